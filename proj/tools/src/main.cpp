#include "orbitfix/tools/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using orbitfix::tools::ExperimentConfig;
  ExperimentConfig cfg;

  CLI::App app{"Symmetric nonlinear solvers: N-body polygon equilibria and Bona-Smith solitary waves"};
  app.allow_windows_style_options(false);
  app.add_option("problem", cfg.problem, "nbody | bs")->required()->check(CLI::IsMember({"nbody", "bs"}));
  app.add_option("action", cfg.subcommand, "solve | spectrum | orbit | shift-table | propagate")
      ->required()
      ->check(CLI::IsMember({"solve", "spectrum", "orbit", "shift-table", "propagate"}));

  app.add_option("--bodies", cfg.bodies, "number of orbiting bodies")->capture_default_str();
  app.add_option("--m0", cfg.m0, "mass parameter")->capture_default_str();
  app.add_option("--convention", cfg.convention, "tables: unit central mass, bodies of mass m0; central: central mass m0")
      ->capture_default_str();
  app.add_option("--map", cfg.map, "iteration matrix for nbody spectrum: plain | petviashvili")->capture_default_str();
  app.add_option("--method", cfg.method, "fixed | petviashvili | newton");
  app.add_option("--perturb", cfg.perturb, "none | ones | generator | gauss | gauss-derivative | generator-discrete");
  app.add_option("--eps", cfg.eps, "perturbation sizes, comma separated")->delimiter(',');
  app.add_option("--gamma", cfg.gamma, "Petviashvili exponent");
  app.add_option("--tol", cfg.tol, "residual tolerance");
  app.add_option("--max-iter", cfg.max_iter, "outer iteration limit");
  app.add_option("--theta2", cfg.theta2, "Bona-Smith parameter theta^2")->capture_default_str();
  app.add_option("--speed", cfg.speed, "wave speed (closed-form speed if omitted)");
  app.add_option("--grid-n", cfg.grid_n, "collocation points")->capture_default_str();
  app.add_option("--half-length", cfg.half_length, "half period L of the domain [-L, L)")->capture_default_str();
  app.add_option("--s", cfg.precond_s, "preconditioner shift")->capture_default_str();
  app.add_option("--inner", cfg.inner, "inner Krylov solver: pcg | minres")->capture_default_str();
  app.add_option("--x0", cfg.x0, "centre of the gauss-derivative perturbation")->capture_default_str();
  app.add_option("--dt", cfg.dt, "time step")->capture_default_str();
  app.add_option("--times", cfg.times, "snapshot times, comma separated")->delimiter(',');
  app.add_option("--t-end", cfg.t_end, "final time when --times is omitted");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return orbitfix::tools::run(cfg);
  } catch (const orbitfix::tools::UsageError& e) {
    std::cerr << "orbitfix: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "orbitfix: run failed: " << e.what() << '\n';
    return 3;
  }
}
