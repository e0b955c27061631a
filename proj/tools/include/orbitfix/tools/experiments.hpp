#pragma once

#include "orbitfix/numlin/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitfix::tools {

/// Bad flag combinations; the command line maps these to exit status 1.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string problem;     // nbody | bs
  std::string subcommand;  // solve | spectrum | orbit | shift-table | propagate

  // N-body
  int bodies = 2;
  double m0 = 10.0;
  std::string convention = "tables";  // tables | central
  std::string map = "plain";          // plain | petviashvili

  // Bona-Smith
  double theta2 = 0.9;
  std::optional<double> speed;  // closed-form speed when absent
  Index grid_n = 1024;
  double half_length = 50.0;
  double precond_s = 1.0;
  std::string inner = "pcg";  // pcg | minres
  double x0 = 0.0;            // centre of the gauss-derivative bump

  // Solver and seed
  std::optional<std::string> method;   // fixed | petviashvili | newton
  std::optional<std::string> perturb;  // none | ones | generator | gauss | gauss-derivative | generator-discrete
  std::vector<double> eps;
  std::optional<double> gamma;
  std::optional<double> tol;
  std::optional<int> max_iter;

  // Propagation
  double dt = 0.01;
  std::vector<double> times;
  std::optional<double> t_end;

  std::uint64_t seed = 0;
  std::filesystem::path out = "out";

  /// Throws UsageError.
  void validate() const;
};

/// Runs one experiment, writing artifacts under cfg.out. Returns the process
/// exit status: 0 success, 2 some run hit MaxIterations, 3 some run diverged.
/// Throws UsageError for invalid configurations.
int run(const ExperimentConfig& cfg);

}  // namespace orbitfix::tools
