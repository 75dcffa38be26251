#include "specgraph/cli.hpp"

int main(int argc, char** argv) { return specgraph::run_cli(argc, argv); }
