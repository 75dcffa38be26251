#include "specgraph/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace specgraph::fft {

namespace {

// fftw plan creation/destruction is not thread-safe; execution on a plan's
// own buffers is. Each thread keeps its own plans and scratch buffers.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct R2cPlan {
  fftw_plan plan = nullptr;
  double* in = nullptr;
  fftw_complex* out = nullptr;
  Eigen::Index n = 0;

  void init(Eigen::Index size) {
    n = size;
    std::lock_guard<std::mutex> lock(planner_mutex());
    in = fftw_alloc_real(static_cast<std::size_t>(n));
    out = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  ~R2cPlan() {
    if (!plan) return;
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
};

struct C2rPlan {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  double* out = nullptr;
  Eigen::Index n = 0;

  void init(Eigen::Index size) {
    n = size;
    std::lock_guard<std::mutex> lock(planner_mutex());
    in = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    out = fftw_alloc_real(static_cast<std::size_t>(n));
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  ~C2rPlan() {
    if (!plan) return;
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
};

template <class Plan>
Plan& cached_plan(Eigen::Index n) {
  thread_local std::map<Eigen::Index, Plan> cache;
  auto [it, inserted] = cache.try_emplace(n);
  if (inserted) it->second.init(n);
  return it->second;
}

}  // namespace

VectorXcd rfft(const VectorXd& in) {
  const Eigen::Index n = in.size();
  require(n >= 1, "rfft needs a nonempty input");
  auto& p = cached_plan<R2cPlan>(n);
  std::memcpy(p.in, in.data(), sizeof(double) * static_cast<std::size_t>(n));
  fftw_execute(p.plan);
  VectorXcd out(n / 2 + 1);
  for (Eigen::Index k = 0; k <= n / 2; ++k) out[k] = Complex(p.out[k][0], p.out[k][1]);
  return out;
}

VectorXd irfft(const VectorXcd& spectrum, Eigen::Index n) {
  require(n >= 1 && spectrum.size() == n / 2 + 1, "irfft spectrum length must be n/2+1");
  auto& p = cached_plan<C2rPlan>(n);
  for (Eigen::Index k = 0; k <= n / 2; ++k) {
    p.in[k][0] = spectrum[k].real();
    p.in[k][1] = spectrum[k].imag();
  }
  fftw_execute(p.plan);
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = p.out[i] / static_cast<double>(n);
  return out;
}

}  // namespace specgraph::fft
