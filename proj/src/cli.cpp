#include "specgraph/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "specgraph/cf.hpp"
#include "specgraph/evaluation.hpp"
#include "specgraph/io.hpp"
#include "specgraph/parallel.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"

namespace specgraph {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Eigen::Index> parse_index_list(const std::string& text) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stol(cell));
    } catch (const std::exception&) {
      throw ValidationError("bad integer '" + cell + "' in list");
    }
  }
  require(!out.empty(), "empty index list");
  return out;
}

io::TensorFormat format_for(const std::string& path, const std::string& flag) {
  if (flag == "json") return io::TensorFormat::Json;
  if (flag == "binary") return io::TensorFormat::Binary;
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? io::TensorFormat::Json
                                                                     : io::TensorFormat::Binary;
}

struct PartitionFlags {
  std::string blocks;
  Eigen::Index equal_blocks = 0;

  void attach(CLI::App* app) {
    auto* b = app->add_option("--blocks", blocks,
                              "comma-separated block start indices, e.g. 0,64,448");
    auto* e = app->add_option("--equal-blocks", equal_blocks, "K equally sized blocks");
    b->excludes(e);
    e->excludes(b);
  }
  FrequencyPartition resolve(Eigen::Index total) const {
    if (!blocks.empty()) return make_partition(parse_index_list(blocks), total);
    if (equal_blocks > 0) return equal_partition(equal_blocks, total);
    throw ValidationError("specify --blocks or --equal-blocks");
  }
};

struct IaFlags {
  IaConfig cfg;
  std::string stepsize = "log-t";
  std::string init = "identity";
  std::string trace;
  std::string config_path;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path,
                    "flat key=value file with the option names below (flags win)");
    options["lambda"] = app->add_option("--lambda", cfg.lambda, "block-sparsity strength");
    options["eta"] = app->add_option("--eta", cfg.eta, "CSD trust radius");
    options["epsilon"] = app->add_option("--epsilon", cfg.epsilon, "PD floor");
    options["tau"] = app->add_option("--tau", cfg.tau, "surrogate proximal weight");
    options["sigma"] = app->add_option("--sigma", cfg.sigma, "ADMM penalty sigma");
    options["omega"] = app->add_option("--omega", cfg.omega, "ADMM penalty omega");
    options["theta"] = app->add_option("--theta", cfg.theta, "ADMM penalty theta");
    options["rho"] = app->add_option("--rho", cfg.rho, "ADMM penalty rho");
    options["delta"] = app->add_option("--delta", cfg.delta, "ADMM penalty delta");
    options["stepsize"] = app->add_option("--stepsize", stepsize, "log-t | log-sqrt-t")
                              ->check(CLI::IsMember({"log-t", "log-sqrt-t"}));
    options["c1"] = app->add_option("--c1", cfg.c1, "stepsize exponent c1");
    options["c2"] = app->add_option("--c2", cfg.c2, "stepsize damping c2");
    options["tol-abs-p"] =
        app->add_option("--tol-abs-p", cfg.tol_abs_primal, "absolute primal tolerance");
    options["tol-rel-p"] =
        app->add_option("--tol-rel-p", cfg.tol_rel_primal, "relative primal tolerance");
    options["tol-abs-d"] =
        app->add_option("--tol-abs-d", cfg.tol_abs_dual, "absolute dual tolerance");
    options["tol-rel-d"] =
        app->add_option("--tol-rel-d", cfg.tol_rel_dual, "relative dual tolerance");
    options["max-iters"] = app->add_option("--max-iters", cfg.max_iters, "iteration cap");
    options["init"] = app->add_option("--init", init, "identity | inverse")
                          ->check(CLI::IsMember({"identity", "inverse"}));
    options["trace"] = app->add_option("--trace", trace, "residual trace CSV output path");
  }

  // Flat key=value config; a key is skipped when its flag was given explicitly.
  void apply_config() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    require(in.good(), "cannot open config file " + config_path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
      if (line.empty()) continue;
      const auto eq = line.find('=');
      require(eq != std::string::npos, "config line " + std::to_string(lineno) +
                                           " is not key=value in " + config_path);
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      const auto it = options.find(key);
      require(it != options.end(), "unknown config key '" + key + "' in " + config_path);
      if (it->second->count() > 0) continue;  // explicit flag wins
      try {
        if (key == "stepsize") {
          require(value == "log-t" || value == "log-sqrt-t", "bad stepsize value");
          stepsize = value;
        } else if (key == "init") {
          require(value == "identity" || value == "inverse", "bad init value");
          init = value;
        } else if (key == "trace") {
          trace = value;
        } else if (key == "max-iters") {
          cfg.max_iters = std::stol(value);
        } else {
          double* slot = key == "lambda"      ? &cfg.lambda
                         : key == "eta"       ? &cfg.eta
                         : key == "epsilon"   ? &cfg.epsilon
                         : key == "tau"       ? &cfg.tau
                         : key == "sigma"     ? &cfg.sigma
                         : key == "omega"     ? &cfg.omega
                         : key == "theta"     ? &cfg.theta
                         : key == "rho"       ? &cfg.rho
                         : key == "delta"     ? &cfg.delta
                         : key == "c1"        ? &cfg.c1
                         : key == "c2"        ? &cfg.c2
                         : key == "tol-abs-p" ? &cfg.tol_abs_primal
                         : key == "tol-rel-p" ? &cfg.tol_rel_primal
                         : key == "tol-abs-d" ? &cfg.tol_abs_dual
                                              : &cfg.tol_rel_dual;
          *slot = std::stod(value);
        }
      } catch (const ValidationError&) {
        throw;
      } catch (const std::exception&) {
        throw ValidationError("bad value '" + value + "' for config key '" + key + "'");
      }
    }
  }

  IaConfig resolve() const {
    IaConfig out = cfg;
    out.pair = stepsize == "log-t" ? StepsizePair::LogOverT : StepsizePair::LogOverSqrtT;
    out.init = init == "identity" ? IaInit::Identity : IaInit::Inverse;
    return out;
  }
};

json ia_config_json(const IaConfig& cfg) {
  return json{{"lambda", cfg.lambda},
              {"eta", cfg.eta},
              {"epsilon", cfg.epsilon},
              {"tau", cfg.tau},
              {"sigma", cfg.sigma},
              {"omega", cfg.omega},
              {"theta", cfg.theta},
              {"rho", cfg.rho},
              {"delta", cfg.delta},
              {"stepsize", cfg.pair == StepsizePair::LogOverT ? "log-t" : "log-sqrt-t"},
              {"c1", cfg.c1},
              {"c2", cfg.c2},
              {"tol_abs_p", cfg.tol_abs_primal},
              {"tol_rel_p", cfg.tol_rel_primal},
              {"tol_abs_d", cfg.tol_abs_dual},
              {"tol_rel_d", cfg.tol_rel_dual},
              {"max_iters", cfg.max_iters},
              {"init", cfg.init == IaInit::Identity ? "identity" : "inverse"}};
}

BandStructure load_structure(const std::string& path, bool use_reference) {
  if (use_reference) return reference_structure();
  require(!path.empty(), "specify --structure or --reference");
  return io::read_structure(path);
}

int cmd_generate(const std::string& structure_path, bool use_reference, Eigen::Index t,
                 Eigen::Index replicates, std::uint64_t seed, const std::string& out_dir,
                 bool header) {
  const BandStructure structure = load_structure(structure_path, use_reference);
  validate_structure(structure, t);
  fs::create_directories(out_dir);

  std::string hash;
  if (use_reference) {
    const std::string tmp = out_dir + "/structure.json";
    io::write_structure(tmp, structure);
    hash = io::file_hash(tmp);
  } else {
    hash = io::file_hash(structure_path);
  }

  json files = json::array();
  for (Eigen::Index rep = 0; rep < replicates; ++rep) {
    char name[32];
    std::snprintf(name, sizeof(name), "panel_%04ld.csv", static_cast<long>(rep));
    const TimeSeriesPanel panel =
        generate(structure, t, derive_seed(seed, static_cast<std::uint64_t>(rep)));
    io::write_panel_csv(out_dir + "/" + name, panel, header);
    files.push_back(name);
  }
  std::ofstream manifest(out_dir + "/manifest.json");
  require(manifest.good(), "cannot write manifest");
  manifest << json{{"seed", seed},
                   {"t", t},
                   {"replicates", replicates},
                   {"structure_hash", hash},
                   {"files", std::move(files)}}
                  .dump(1)
           << "\n";
  return 0;
}

int cmd_estimate(const std::vector<std::string>& panels, const std::string& half_window,
                 bool header, const std::string& out, const std::string& format) {
  require(!panels.empty(), "no input panels");
  CsdTensor accum;
  Eigen::Index n = 0, t = 0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const TimeSeriesPanel panel = io::read_panel_csv(panels[i], header);
    validate_panel(panel);
    if (i == 0) {
      n = panel.n();
      t = panel.t();
    } else {
      require(panel.n() == n && panel.t() == t,
              "panel " + panels[i] + " has mismatched N or T");
    }
    Eigen::Index half;
    if (half_window == "auto") {
      half = auto_half_window(t);
    } else {
      try {
        half = std::stol(half_window);
      } catch (const std::exception&) {
        throw ValidationError("bad --half-window value '" + half_window + "'");
      }
    }
    const CsdTensor smoothed = smoothed_periodogram_of_panel(panel, hanning_window(half));
    if (accum.slices.empty()) {
      accum = smoothed;
    } else {
      for (std::size_t k = 0; k < accum.slices.size(); ++k)
        accum.slices[k] += smoothed.slices[k];
    }
  }
  for (auto& slice : accum.slices) slice /= static_cast<double>(panels.size());
  io::write_tensor(out, accum, format_for(out, format));
  return 0;
}

int cmd_learn(const std::string& method, const std::string& tensor_path,
              const PartitionFlags& partition_flags, const std::string& out,
              const std::string& format, const std::string& meta_path,
              const std::string& budgets, Eigen::Index budget, const IaFlags& ia_flags) {
  json meta{{"method", method}, {"input", tensor_path}};
  if (method == "naive") {
    const CsdTensor smoothed = io::read_tensor(tensor_path);
    const InverseCsdTensor inverse = naive_inverse(smoothed);
    io::write_tensor(out, inverse, format_for(out, format));
    meta["iterations"] = 0;
    meta["converged"] = true;
  } else if (method == "cf") {
    const InverseCsdTensor naive = io::read_inverse_tensor(tensor_path);
    const FrequencyPartition partition = partition_flags.resolve(naive.m());
    SparsityBudget sb;
    if (!budgets.empty()) {
      sb.s = parse_index_list(budgets);
    } else {
      require(budget >= 0, "specify --budgets or --budget");
      sb.s.assign(static_cast<std::size_t>(partition.blocks()), budget);
    }
    const InverseCsdTensor learned = cf_learn(naive, partition, sb);
    io::write_tensor(out, learned, format_for(out, format));
    meta["budgets"] = sb.s;
    meta["iterations"] = 0;
    meta["converged"] = true;
  } else if (method == "ia") {
    const CsdTensor smoothed = io::read_tensor(tensor_path);
    const FrequencyPartition partition = partition_flags.resolve(smoothed.m());
    const IaConfig cfg = ia_flags.resolve();
    const IaResult result = ia_learn(smoothed, partition, cfg);
    io::write_tensor(out, result.prec, format_for(out, format));
    io::write_tensor(out + ".csd", result.csd, format_for(out, format));
    if (!ia_flags.trace.empty())
      io::write_residual_trace_csv(ia_flags.trace, result.trace, cfg);
    meta["config"] = ia_config_json(cfg);
    meta["iterations"] = result.iterations;
    meta["converged"] = result.converged;
  } else {
    throw ValidationError("unknown method '" + method + "' (use naive, cf, or ia)");
  }
  const std::string meta_out = meta_path.empty() ? out + ".meta.json" : meta_path;
  std::ofstream mf(meta_out);
  require(mf.good(), "cannot write " + meta_out);
  mf << meta.dump(1) << "\n";
  return 0;
}

int cmd_extract(const std::string& tensor_path, const PartitionFlags& partition_flags,
                double threshold, const std::string& normalization, const std::string& out,
                const std::string& edge_dir) {
  const InverseCsdTensor inverse = io::read_inverse_tensor(tensor_path);
  const FrequencyPartition partition = partition_flags.resolve(inverse.m());
  const Normalization mode =
      normalization == "global" ? Normalization::Global : Normalization::PerBlock;
  const ExtractionResult result = extract_kpcg(inverse, partition, threshold, mode);
  io::write_kpcg(out, result.graph);
  if (!edge_dir.empty()) io::write_kpcg_edge_csvs(edge_dir, result.graph);
  for (const Eigen::Index m : result.degenerate_blocks)
    std::cerr << "warning: block " << m + 1 << " has uniform scores; no edges emitted\n";
  return 0;
}

int cmd_evaluate(const std::string& structure_path, bool use_reference, Eigen::Index t,
                 const PartitionFlags& partition_flags, const std::string& methods_text,
                 const std::string& regimes_text, int runs, std::uint64_t seed, double threshold,
                 const std::string& normalization, const std::string& half_window,
                 const std::string& lambda_grid_text, bool full_grid, const std::string& out,
                 const std::string& json_out, const std::string& summary_out) {
  ExperimentPlan plan;
  plan.structure = load_structure(structure_path, use_reference);
  plan.t = t;
  plan.partition = partition_flags.blocks.empty() && partition_flags.equal_blocks == 0
                       ? equal_partition(8, slice_count_for(t))
                       : partition_flags.resolve(slice_count_for(t));
  plan.runs = runs;
  plan.seed = seed;
  plan.threshold = threshold;
  plan.normalization =
      normalization == "per-block" ? Normalization::PerBlock : Normalization::Global;
  if (half_window != "auto") plan.half_window = std::stol(half_window);
  if (full_grid) {
    plan.regimes = {5, 10, 20, 50, 100, 1000};
    plan.runs = 50;
  } else if (!regimes_text.empty()) {
    plan.regimes = parse_index_list(regimes_text);
  }
  if (!lambda_grid_text.empty()) {
    std::stringstream ss(lambda_grid_text);
    std::string cell;
    while (std::getline(ss, cell, ',')) plan.lambda_grid.push_back(std::stod(cell));
  }

  std::vector<MethodSpec> methods;
  std::stringstream ss(methods_text);
  std::string cell;
  while (std::getline(ss, cell, ',')) methods.push_back(MethodSpec::parse(cell));
  require(!methods.empty(), "no methods requested");

  const auto rows = run_experiment(plan, methods);
  if (!out.empty()) write_results_csv(out, rows);
  if (!json_out.empty()) write_results_json(json_out, rows);
  if (!summary_out.empty())
    write_summary_csv(summary_out, summarize(rows), summarize_differences(rows));
  for (const auto& row : rows)
    if (!row.error.empty())
      std::cerr << "warning: " << row.method << " regime " << row.regime << " run " << row.run
                << " failed: " << row.error << "\n";
  return 0;
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"block-sparse multi-frequency partial correlation graph learning"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker thread cap (also SPECGRAPH_THREADS)");

  // generate
  auto* gen = app.add_subcommand("generate", "sample panels from a band-limited structure");
  std::string gen_structure, gen_out_dir;
  bool gen_reference = false, gen_header = false;
  Eigen::Index gen_t = 1024, gen_replicates = 1;
  std::uint64_t gen_seed = 1;
  gen->add_option("--structure", gen_structure, "structure JSON path");
  gen->add_flag("--reference", gen_reference, "use the built-in two-band benchmark structure");
  gen->add_option("--samples", gen_t, "panel length T");
  gen->add_option("--replicates", gen_replicates, "number of panels");
  gen->add_option("--seed", gen_seed, "base seed");
  gen->add_option("--out-dir", gen_out_dir, "output directory")->required();
  gen->add_flag("--csv-header", gen_header, "write a header row");

  // estimate
  auto* est = app.add_subcommand("estimate", "averaged smoothed periodogram of panels");
  std::vector<std::string> est_panels;
  std::string est_half = "auto", est_out, est_format = "auto";
  bool est_header = false;
  est->add_option("--panel", est_panels, "panel CSV (repeatable)")->required();
  est->add_option("--half-window", est_half, "half-window size or 'auto' (floor(sqrt(T)))");
  est->add_flag("--csv-header", est_header, "input panels carry a header row");
  est->add_option("--out", est_out, "output tensor path")->required();
  est->add_option("--format", est_format, "json | binary | auto")
      ->check(CLI::IsMember({"json", "binary", "auto"}));

  // learn
  auto* learn = app.add_subcommand("learn", "fit an inverse-CSD tensor (naive, cf, or ia)");
  std::string learn_method, learn_tensor, learn_out, learn_format = "auto", learn_meta;
  std::string learn_budgets;
  Eigen::Index learn_budget = -1;
  PartitionFlags learn_partition;
  IaFlags ia_flags;
  learn->add_option("--method", learn_method, "naive | cf | ia")->required();
  learn->add_option("--tensor", learn_tensor, "input tensor path")->required();
  learn_partition.attach(learn);
  learn->add_option("--out", learn_out, "output tensor path")->required();
  learn->add_option("--format", learn_format, "json | binary | auto")
      ->check(CLI::IsMember({"json", "binary", "auto"}));
  learn->add_option("--meta", learn_meta, "run metadata JSON path");
  learn->add_option("--budgets", learn_budgets, "cf: per-block budgets, e.g. 0,5,7");
  learn->add_option("--budget", learn_budget, "cf: uniform budget");
  ia_flags.attach(learn);

  // extract
  auto* ext = app.add_subcommand("extract", "turn an inverse tensor into a K-PCG");
  std::string ext_tensor, ext_norm = "per-block", ext_out, ext_edge_dir;
  double ext_threshold = 0.05;
  PartitionFlags ext_partition;
  ext->add_option("--tensor", ext_tensor, "inverse tensor path")->required();
  ext_partition.attach(ext);
  ext->add_option("--threshold", ext_threshold, "normalized score threshold");
  ext->add_option("--normalization", ext_norm, "per-block | global")
      ->check(CLI::IsMember({"per-block", "global"}));
  ext->add_option("--out", ext_out, "K-PCG JSON path")->required();
  ext->add_option("--edge-csv-dir", ext_edge_dir, "write per-layer edge CSVs here");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "benchmark methods against the ground truth");
  std::string eval_structure, eval_methods = "naive,cf-fk,ia-bs";
  std::string eval_regimes, eval_norm = "global", eval_half = "auto", eval_lambda_grid;
  std::string eval_out = "results.csv", eval_json, eval_summary;
  bool eval_reference = false, eval_full = false;
  Eigen::Index eval_t = 1024;
  int eval_runs = 10;
  std::uint64_t eval_seed = 1;
  double eval_threshold = 0.05;
  PartitionFlags eval_partition;
  eval->add_option("--structure", eval_structure, "structure JSON path");
  eval->add_flag("--reference", eval_reference, "use the built-in benchmark structure");
  eval->add_option("--t", eval_t, "panel length T");
  eval_partition.attach(eval);
  eval->add_option("--methods", eval_methods, "comma list: naive,cf-nz:7,cf-fk,ia-gs,ia-bs");
  eval->add_option("--regimes", eval_regimes, "comma list of replicate counts");
  eval->add_option("--runs", eval_runs, "repetitions per regime");
  eval->add_option("--seed", eval_seed, "base seed");
  eval->add_option("--threshold", eval_threshold, "extraction threshold");
  eval->add_option("--normalization", eval_norm, "per-block | global")
      ->check(CLI::IsMember({"per-block", "global"}));
  eval->add_option("--half-window", eval_half, "half-window size or 'auto'");
  eval->add_option("--lambda-grid", eval_lambda_grid, "tune ia lambda by SHD over this list");
  eval->add_flag("--full-grid", eval_full, "full protocol: regimes 5,10,20,50,100,1000; 50 runs");
  eval->add_option("--out", eval_out, "results CSV path");
  eval->add_option("--json", eval_json, "results JSON mirror path");
  eval->add_option("--summary", eval_summary, "summary CSV path");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "generate + estimate + learn + extract");
  std::string pipe_structure, pipe_method = "ia", pipe_out_dir, pipe_norm = "per-block";
  bool pipe_reference = false;
  Eigen::Index pipe_t = 1024, pipe_replicates = 5;
  std::uint64_t pipe_seed = 1;
  double pipe_threshold = 0.05;
  std::string pipe_half = "auto", pipe_budgets;
  Eigen::Index pipe_budget = -1;
  PartitionFlags pipe_partition;
  IaFlags pipe_ia;
  pipe->add_option("--structure", pipe_structure, "structure JSON path");
  pipe->add_flag("--reference", pipe_reference, "use the built-in benchmark structure");
  pipe->add_option("--samples", pipe_t, "panel length T");
  pipe->add_option("--replicates", pipe_replicates, "number of panels");
  pipe->add_option("--seed", pipe_seed, "base seed");
  pipe->add_option("--method", pipe_method, "naive | cf | ia");
  pipe_partition.attach(pipe);
  pipe->add_option("--threshold", pipe_threshold, "extraction threshold");
  pipe->add_option("--normalization", pipe_norm, "per-block | global")
      ->check(CLI::IsMember({"per-block", "global"}));
  pipe->add_option("--half-window", pipe_half, "half-window size or 'auto'");
  pipe->add_option("--budgets", pipe_budgets, "cf: per-block budgets");
  pipe->add_option("--budget", pipe_budget, "cf: uniform budget");
  pipe->add_option("--out-dir", pipe_out_dir, "output directory")->required();
  pipe_ia.attach(pipe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (threads > 0) set_thread_count(threads);

  if (gen->parsed())
    return cmd_generate(gen_structure, gen_reference, gen_t, gen_replicates, gen_seed,
                        gen_out_dir, gen_header);
  if (est->parsed()) return cmd_estimate(est_panels, est_half, est_header, est_out, est_format);
  if (learn->parsed()) {
    ia_flags.apply_config();
    return cmd_learn(learn_method, learn_tensor, learn_partition, learn_out, learn_format,
                     learn_meta, learn_budgets, learn_budget, ia_flags);
  }
  if (ext->parsed())
    return cmd_extract(ext_tensor, ext_partition, ext_threshold, ext_norm, ext_out,
                       ext_edge_dir);
  if (eval->parsed())
    return cmd_evaluate(eval_structure, eval_reference, eval_t, eval_partition, eval_methods,
                        eval_regimes, eval_runs, eval_seed, eval_threshold, eval_norm, eval_half,
                        eval_lambda_grid, eval_full, eval_out, eval_json, eval_summary);
  if (pipe->parsed()) {
    pipe_ia.apply_config();
    fs::create_directories(pipe_out_dir);
    int rc = cmd_generate(pipe_structure, pipe_reference, pipe_t, pipe_replicates, pipe_seed,
                          pipe_out_dir, false);
    if (rc != 0) return rc;
    std::vector<std::string> panels;
    for (Eigen::Index rep = 0; rep < pipe_replicates; ++rep) {
      char name[32];
      std::snprintf(name, sizeof(name), "panel_%04ld.csv", static_cast<long>(rep));
      panels.push_back(pipe_out_dir + "/" + name);
    }
    const std::string tensor = pipe_out_dir + "/smoothed.bin";
    rc = cmd_estimate(panels, pipe_half, false, tensor, "binary");
    if (rc != 0) return rc;
    const std::string learned = pipe_out_dir + "/inverse.bin";
    if (pipe_method == "cf") {
      const std::string naive_path = pipe_out_dir + "/naive.bin";
      rc = cmd_learn("naive", tensor, pipe_partition, naive_path, "binary", "", "", -1, pipe_ia);
      if (rc != 0) return rc;
      rc = cmd_learn("cf", naive_path, pipe_partition, learned, "binary", "", pipe_budgets,
                     pipe_budget, pipe_ia);
    } else {
      rc = cmd_learn(pipe_method, tensor, pipe_partition, learned, "binary", "", pipe_budgets,
                     pipe_budget, pipe_ia);
    }
    if (rc != 0) return rc;
    return cmd_extract(learned, pipe_partition, pipe_threshold, pipe_norm,
                       pipe_out_dir + "/graph.json", pipe_out_dir + "/edges");
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace specgraph
