#include "orbitfix/tools/experiments.hpp"

#include "orbitfix/boussinesq.hpp"
#include "orbitfix/nbody.hpp"
#include "orbitfix/numlin.hpp"
#include "orbitfix/solvers.hpp"
#include "orbitfix/symmetry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>

namespace orbitfix::tools {

namespace {

using json = nlohmann::ordered_json;

template <class... Allowed>
void require_one_of(const std::string& flag, const std::string& value, const Allowed&... allowed) {
  if (((value != allowed) && ...)) throw UsageError("invalid value '" + value + "' for --" + flag);
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::ConvergedResidual:
    case SolveStatus::ConvergedReference:
      return 0;
    case SolveStatus::MaxIterations:
      return 2;
    case SolveStatus::Diverged:
      return 3;
  }
  return 3;
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  return os;
}

json orbit_json(const OrbitReport& r) { return json::parse(r.to_json()); }

json status_json(SolveStatus s) { return std::string(to_string(s)); }

json config_json(const ExperimentConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["subcommand"] = c.subcommand;
  if (c.problem == "nbody") {
    j["bodies"] = c.bodies;
    j["m0"] = c.m0;
    j["convention"] = c.convention;
    j["map"] = c.map;
  } else {
    j["theta2"] = c.theta2;
    j["speed"] = c.speed ? json(*c.speed) : json(nullptr);
    j["grid_n"] = c.grid_n;
    j["half_length"] = c.half_length;
    j["s"] = c.precond_s;
    j["inner"] = c.inner;
    j["x0"] = c.x0;
    j["dt"] = c.dt;
  }
  j["method"] = c.method ? json(*c.method) : json(nullptr);
  j["perturb"] = c.perturb ? json(*c.perturb) : json(nullptr);
  j["eps"] = c.eps;
  j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
  j["max_iter"] = c.max_iter ? json(*c.max_iter) : json(nullptr);
  j["seed"] = c.seed;
  return j;
}

struct Summary {
  json doc;
  int code = 0;

  explicit Summary(const ExperimentConfig& c) {
    doc["problem"] = c.problem;
    doc["subcommand"] = c.subcommand;
    doc["status"] = nullptr;
    doc["final_residual"] = nullptr;
    doc["orbit"] = nullptr;
    doc["wall_time_s"] = 0.0;
    doc["config"] = config_json(c);
  }

  void merge_status(SolveStatus s) {
    code = std::max(code, exit_code(s));
    doc["status"] = status_json(s);
  }
};

// Overall status of a batch: the worst individual outcome.
SolveStatus worst(const std::vector<SolveStatus>& all) {
  auto rank = [](SolveStatus s) { return exit_code(s); };
  return *std::max_element(all.begin(), all.end(), [&](auto a, auto b) { return rank(a) < rank(b); });
}

std::vector<double> eps_or(const ExperimentConfig& c, std::vector<double> fallback) {
  return c.eps.empty() ? fallback : c.eps;
}

// ---------------------------------------------------------------- N-body

NBodyConfig nbody_config(const ExperimentConfig& c) {
  return c.convention == "tables" ? NBodyConfig::table_convention(c.bodies, c.m0)
                                  : NBodyConfig::unit_bodies(c.bodies, c.m0);
}

Vector nbody_seed(const std::string& kind, const Vector& qs, double eps) {
  if (kind == "none") return qs;
  if (kind == "ones") return qs + eps * ones_perturbation(qs.size());
  if (kind == "generator") return qs + eps * generator_perturbation(qs);
  throw UsageError("perturbation '" + kind + "' does not apply to nbody (use none, ones or generator)");
}

SolveOutcome nbody_solve(const ExperimentConfig& c, const ProblemSpec& p, const Vector& x0, const Vector& qs) {
  SolverConfig s;
  s.tol_residual = c.tol.value_or(1e-7);
  s.max_outer = c.max_iter.value_or(1000);
  s.gamma = c.gamma;
  s.validate();
  const std::string method = c.method.value_or("petviashvili");
  if (method == "fixed") return fixed_point_solve(p, x0, s, qs);
  if (method == "petviashvili") return petviashvili_solve(p, x0, s, qs);
  return newton_solve(p, x0, s, qs);
}

void nbody_run(const ExperimentConfig& c, Summary& sum) {
  const NBodyConfig nb = nbody_config(c);
  const ProblemSpec p = build_nbody(nb);
  const Vector qs = polygon_solution(c.bodies);
  const GroupAction rot = rotation_action();

  if (c.subcommand == "solve") {
    const auto out = nbody_solve(c, p, nbody_seed(c.perturb.value_or("ones"), qs, eps_or(c, {0.1}).front()), qs);
    auto tr = open_out(c.out, "trace.csv");
    out.trace.write_csv(tr);
    auto bodies = open_out(c.out, "bodies.csv");
    write_bodies_csv(bodies, out.x_final);
    sum.merge_status(out.status);
    sum.doc["final_residual"] = out.final_residual();
    if (out.x_final.allFinite()) sum.doc["orbit"] = orbit_json(align_to_orbit(out.x_final, qs, rot));
    if (!out.diagnostic.empty()) sum.doc["diagnostic"] = out.diagnostic;
    return;
  }

  if (c.subcommand == "spectrum") {
    Matrix jac;
    if (c.map == "plain") {
      jac = p.fixed_point_jacobian(qs);
    } else {
      jac = petviashvili_jacobian(*p.homogeneous, c.gamma.value_or(default_gamma(p.homogeneous->degree)), qs);
    }
    const auto rep = dense_eigenvalues(jac);
    auto os = open_out(c.out, "spectrum.csv");
    write_spectrum_csv(os, rep);
    auto bodies = open_out(c.out, "bodies.csv");
    write_bodies_csv(bodies, qs);
    sum.doc["final_residual"] = p.residual(qs).norm();
    sum.doc["spectrum"] = {{"dimension", rep.eigenvalues.size()},
                           {"count_near_unit", rep.count_near_unit},
                           {"count_near_zero", rep.count_near_zero},
                           {"dominant_modulus", rep.dominant_modulus}};
    return;
  }

  if (c.subcommand == "orbit") {
    const std::string kind = c.perturb.value_or("generator");
    json runs = json::array();
    std::vector<SolveStatus> statuses;
    auto table = open_out(c.out, "orbit.csv");
    table << "eps,status,final_residual,alpha_star,orbital_distance,raw_distance,predicted_alpha\n";
    const auto eps = eps_or(c, {1.0, 2.0, 4.0});
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const Vector x0 = nbody_seed(kind, qs, eps[i]);
      const auto out = nbody_solve(c, p, x0, qs);
      const std::string trace_name = "trace_" + std::to_string(i + 1) + ".csv";
      auto tr = open_out(c.out, trace_name);
      out.trace.write_csv(tr);
      statuses.push_back(out.status);
      json r{{"eps", eps[i]},
             {"status", status_json(out.status)},
             {"final_residual", out.final_residual()},
             {"iterations", out.trace.back().n},
             {"trace", trace_name}};
      if (out.x_final.allFinite()) {
        const auto orb = align_to_orbit(out.x_final, qs, rot);
        const double predicted = predict_limit(x0, qs, rot)[0];
        r["orbit"] = orbit_json(orb);
        r["predicted_alpha"] = predicted;
        table << format_g17(eps[i]) << ',' << to_string(out.status) << ',' << format_g17(out.final_residual()) << ','
              << format_g17(orb.alpha_star[0]) << ',' << format_g17(orb.orbital_distance) << ','
              << format_g17(orb.raw_distance) << ',' << format_g17(predicted) << '\n';
      } else {
        table << format_g17(eps[i]) << ',' << to_string(out.status) << ',' << format_g17(out.final_residual())
              << ",,,,\n";
      }
      runs.push_back(r);
    }
    sum.merge_status(worst(statuses));
    sum.doc["final_residual"] = runs.back()["final_residual"];
    if (runs.back().contains("orbit")) sum.doc["orbit"] = runs.back()["orbit"];
    sum.doc["runs"] = runs;
    return;
  }

  throw UsageError("nbody has no '" + c.subcommand + "' subcommand (use solve, spectrum or orbit)");
}

// ---------------------------------------------------------------- Bona-Smith

BSParams bs_params(const ExperimentConfig& c) {
  BSParams p = BSParams::closed_form(c.theta2, c.grid_n, c.half_length);
  if (c.speed) p.speed = *c.speed;
  p.validate();
  return p;
}

WavePair bs_seed(const ExperimentConfig& c, const std::string& kind, const ExactProfile& prof, const SpectralGrid& g,
                 double eps) {
  if (kind == "none") return prof.wave;
  if (kind == "gauss") return gauss_perturbation(prof, g, eps);
  if (kind == "gauss-derivative") return gauss_derivative_perturbation(prof, g, eps, c.x0);
  if (kind == "generator-discrete") return generator_discrete_perturbation(prof, g, eps);
  throw UsageError("perturbation '" + kind +
                   "' does not apply to bs (use none, gauss, gauss-derivative or generator-discrete)");
}

SolveOutcome bs_solve(const ExperimentConfig& c, const BSParams& p, const Vector& x0) {
  if (c.method && *c.method != "newton") throw UsageError("bs supports --method newton only");
  SolverConfig s;
  s.tol_residual = c.tol.value_or(1e-12);
  s.max_outer = c.max_iter.value_or(100);
  s.precond_s = c.precond_s;
  s.inner = c.inner == "minres" ? InnerSolver::Minres : InnerSolver::Pcg;
  s.validate();
  return newton_solve(build_bs_problem(p), x0, s);
}

void bs_run(const ExperimentConfig& c, Summary& sum) {
  const BSParams p = bs_params(c);
  const SpectralGrid grid(c.grid_n, c.half_length);
  const ExactProfile prof = exact_profile(c.theta2, c.grid_n, c.half_length);
  const GroupAction tr = translation_action(p);
  const bool closed_speed = !c.speed || *c.speed == prof.params.speed;

  // Wave at the requested speed: the sampled closed form, or a Newton solve
  // seeded by it.
  auto wave_at_speed = [&]() -> std::pair<WavePair, std::optional<SolveOutcome>> {
    if (closed_speed) return {prof.wave, std::nullopt};
    auto out = bs_solve(c, p, prof.wave.stacked());
    return {WavePair::from_stacked(out.x_final), std::move(out)};
  };

  auto record_solution = [&](const SolveOutcome& out) {
    sum.merge_status(out.status);
    sum.doc["final_residual"] = out.final_residual();
    if (!out.diagnostic.empty()) sum.doc["diagnostic"] = out.diagnostic;
    auto t = open_out(c.out, "trace.csv");
    out.trace.write_csv(t);
  };

  auto add_centers = [&](json& j, const WavePair& w) {
    try {
      const auto [xu, xe] = centers(w, c.half_length);
      j["x_u"] = xu;
      j["x_eta"] = xe;
    } catch (const std::runtime_error&) {
      // No first Fourier mode to read a phase from.
    }
  };

  if (c.subcommand == "solve") {
    const std::string kind = c.perturb.value_or(closed_speed ? "gauss" : "none");
    const WavePair seed = bs_seed(c, kind, prof, grid, eps_or(c, {0.05}).front());
    const auto out = bs_solve(c, p, seed.stacked());
    record_solution(out);
    const WavePair w = WavePair::from_stacked(out.x_final);
    auto os = open_out(c.out, "profile.csv");
    write_profile_csv(os, grid, w);
    if (out.x_final.allFinite()) {
      sum.doc["orbit"] = orbit_json(align_to_orbit(out.x_final, prof.wave.stacked(), tr));
      json cj = json::object();
      add_centers(cj, w);
      if (!cj.empty()) sum.doc["centers"] = cj;
    }
    return;
  }

  if (c.subcommand == "spectrum") {
    const auto [w, solved] = wave_at_speed();
    if (solved) record_solution(*solved);
    const ProblemSpec prob = build_bs_problem(p);
    const auto rep = dense_eigenvalues(prob.dense_jacobian(w.stacked()));
    auto os = open_out(c.out, "spectrum.csv");
    write_spectrum_csv(os, rep);
    auto po = open_out(c.out, "profile.csv");
    write_profile_csv(po, grid, w);
    if (!solved) sum.doc["final_residual"] = prob.residual(w.stacked()).norm();
    sum.doc["spectrum"] = {{"dimension", rep.eigenvalues.size()},
                           {"count_near_unit", rep.count_near_unit},
                           {"count_near_zero", rep.count_near_zero},
                           {"count_modulus_below_1e-8", rep.count_modulus_below(1e-8)},
                           {"dominant_modulus", rep.dominant_modulus}};
    return;
  }

  if (c.subcommand == "orbit" || c.subcommand == "shift-table") {
    if (!closed_speed) throw UsageError("bs " + c.subcommand + " perturbs the closed-form wave; omit --speed");
    const std::string kind = c.perturb.value_or("generator-discrete");
    const bool orbit = c.subcommand == "orbit";
    auto table = open_out(c.out, orbit ? "orbit.csv" : "shift_table.csv");
    table << (orbit ? "eps,status,final_residual,alpha_star,orbital_distance,raw_distance,predicted_alpha\n"
                    : "eps,status,final_residual,x_eta,x_u\n");
    json runs = json::array();
    std::vector<SolveStatus> statuses;
    const auto eps = eps_or(c, {0.1, 0.05, 0.01, 0.005});
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const Vector x0 = bs_seed(c, kind, prof, grid, eps[i]).stacked();
      const auto out = bs_solve(c, p, x0);
      statuses.push_back(out.status);
      const std::string trace_name = "trace_" + std::to_string(i + 1) + ".csv";
      auto t = open_out(c.out, trace_name);
      out.trace.write_csv(t);
      json r{{"eps", eps[i]},
             {"status", status_json(out.status)},
             {"final_residual", out.final_residual()},
             {"iterations", out.trace.back().n},
             {"trace", trace_name}};
      table << format_g17(eps[i]) << ',' << to_string(out.status) << ',' << format_g17(out.final_residual());
      if (out.x_final.allFinite()) {
        const WavePair w = WavePair::from_stacked(out.x_final);
        add_centers(r, w);
        const auto orb = align_to_orbit(out.x_final, prof.wave.stacked(), tr);
        r["orbit"] = orbit_json(orb);
        if (orbit) {
          const double predicted = predict_limit(x0, prof.wave.stacked(), tr)[0];
          r["predicted_alpha"] = predicted;
          table << ',' << format_g17(orb.alpha_star[0]) << ',' << format_g17(orb.orbital_distance) << ','
                << format_g17(orb.raw_distance) << ',' << format_g17(predicted);
        } else {
          table << ',' << (r.contains("x_eta") ? format_g17(r["x_eta"].get<double>()) : "") << ','
                << (r.contains("x_u") ? format_g17(r["x_u"].get<double>()) : "");
        }
      } else {
        table << (orbit ? ",,,," : ",,");
      }
      table << '\n';
      runs.push_back(r);
    }
    sum.merge_status(worst(statuses));
    sum.doc["final_residual"] = runs.back()["final_residual"];
    if (runs.back().contains("orbit")) sum.doc["orbit"] = runs.back()["orbit"];
    sum.doc["runs"] = runs;
    return;
  }

  if (c.subcommand == "propagate") {
    const auto [w0, solved] = wave_at_speed();
    if (solved) {
      record_solution(*solved);
      if (!solved->converged()) return;
    }
    auto po = open_out(c.out, "profile.csv");
    write_profile_csv(po, grid, w0);
    std::vector<double> times = c.times;
    if (times.empty()) times.push_back(c.t_end.value_or(10.0));
    const auto prop = propagate(w0, p, c.dt, times);
    auto so = open_out(c.out, "snapshots.csv");
    write_snapshots_csv(so, grid, prop.snapshots);
    json snaps = json::array();
    const double start = translation_shift(w0, c.half_length);
    for (const auto& s : prop.snapshots) {
      double shift = std::remainder(translation_shift(s.wave, c.half_length) - start, 2.0 * c.half_length);
      snaps.push_back({{"t", s.t}, {"shift", shift}});
    }
    json pj{{"completed", prop.completed}, {"snapshots", snaps}};
    if (!prop.diagnostic.empty()) pj["diagnostic"] = prop.diagnostic;
    sum.doc["propagation"] = pj;
    if (!prop.completed) sum.code = std::max(sum.code, 3);
    return;
  }

  throw UsageError("unknown subcommand '" + c.subcommand + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  require_one_of("problem", problem, "nbody", "bs");
  require_one_of("subcommand", subcommand, "solve", "spectrum", "orbit", "shift-table", "propagate");
  require_one_of("convention", convention, "tables", "central");
  require_one_of("map", map, "plain", "petviashvili");
  require_one_of("inner", inner, "pcg", "minres");
  if (method) require_one_of("method", *method, "fixed", "petviashvili", "newton");
  if (perturb) {
    require_one_of("perturb", *perturb, "none", "ones", "generator", "gauss", "gauss-derivative",
                   "generator-discrete");
  }
  if (bodies < 2) throw UsageError("--bodies must be at least 2");
  if (!(m0 >= 0.0)) throw UsageError("--m0 must be non-negative");
  if (grid_n < 8 || grid_n % 2 != 0) throw UsageError("--grid-n must be an even number >= 8");
  if (!(theta2 > 7.0 / 9.0 && theta2 < 1.0)) throw UsageError("--theta2 must lie in (7/9, 1)");
  if (!(half_length > 0.0)) throw UsageError("--half-length must be positive");
  if (!(precond_s > 0.0)) throw UsageError("--s must be positive");
  if (!(dt > 0.0)) throw UsageError("--dt must be positive");
  if (tol && !(*tol > 0.0)) throw UsageError("--tol must be positive");
  if (max_iter && *max_iter < 1) throw UsageError("--max-iter must be at least 1");
  if (t_end && !(*t_end >= 0.0)) throw UsageError("--t-end must be non-negative");
  for (double t : times) {
    if (!(t >= 0.0)) throw UsageError("--times entries must be non-negative");
  }
  for (double e : eps) {
    if (!std::isfinite(e)) throw UsageError("--eps entries must be finite");
  }
}

int run(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.out);
  Summary sum(cfg);
  try {
    if (cfg.problem == "nbody") {
      nbody_run(cfg, sum);
    } else {
      bs_run(cfg, sum);
    }
  } catch (const std::invalid_argument& e) {
    // Parameter validation inside the library is a usage error too.
    throw UsageError(e.what());
  }
  sum.doc["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto os = open_out(cfg.out, "summary.json");
  os << sum.doc.dump(2) << '\n';
  return sum.code;
}

}  // namespace orbitfix::tools
