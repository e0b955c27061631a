// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "orbitfix/boussinesq.hpp"
#include "orbitfix/nbody.hpp"
#include "orbitfix/numlin.hpp"
#include "orbitfix/solvers.hpp"
#include "orbitfix/symmetry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace orbitfix;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    v.pass = false;
    v.detail << " [runtime " << secs << " s over budget " << budget_s << " s]";
  }
  if (!v.pass) ++failures;
  std::printf("%s %2d %s (%.2f s):%s\n", v.pass ? "PASS" : "FAIL", id, title, secs, v.detail.str().c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(b), 1e-300); }

// Greedy one-to-one matching of computed real eigenvalues to expected ones.
bool match_all(std::vector<double> got, const std::vector<double>& want, double tol_rel, double tol_abs) {
  for (double w : want) {
    auto it = std::min_element(got.begin(), got.end(), [&](double a, double b) { return std::abs(a - w) < std::abs(b - w); });
    if (it == got.end() || std::abs(*it - w) > tol_rel * std::abs(w) + tol_abs) return false;
    got.erase(it);
  }
  return true;
}

std::vector<double> real_parts(const SpectrumReport& r) {
  std::vector<double> out;
  for (auto z : r.eigenvalues) out.push_back(z.real());
  return out;
}

const std::vector<double> kMasses = {10.0, 5.0, 4.0, 1.0, 0.0};

// Reference iteration-matrix eigenvalues at 5 digits, in mass order above.
const std::vector<std::vector<double>> kPlainReference = {
    {-2.0, 0.99999, -0.57143, 0.28571},
    {-2.0, 1.0, -0.88888, 0.44444},
    {-2.0, 1.0, -1.0, 0.50001},
    {-2.0, -1.6, 1.0, 0.8},
    {-2.0, -2.0, 1.0, 1.0},
};
const std::vector<std::vector<double>> kFilteredReference = {
    {0.99999, -0.57143, 0.28571},
    {1.0, -0.88888, 0.44444},
    {1.0, -1.0, 0.5},
    {-1.6, 1.0, 0.8},
    {-2.0, 1.0, 1.0},
};

ProblemSpec two_body(double m0) { return build_nbody(NBodyConfig::table_convention(2, m0)); }

struct BsRun {
  SolveOutcome out;
  double xu = 0.0, xeta = 0.0;
};

BsRun bs_newton(const BSParams& p, const Vector& x0, double tol, int max_outer = 200) {
  SolverConfig cfg;
  cfg.tol_residual = tol;
  cfg.max_outer = max_outer;
  cfg.inner = InnerSolver::Pcg;
  BsRun r;
  r.out = newton_solve(build_bs_problem(p), x0, cfg);
  const auto [xu, xe] = centers(WavePair::from_stacked(r.out.x_final), p.half_length);
  r.xu = xu;
  r.xeta = xe;
  return r;
}

}  // namespace

int main() {
  const Vector qs = polygon_solution(2);

  run(1, "Plain iteration-matrix spectrum of the two-body problem", 1.0, [&](Verdict& v) {
    for (std::size_t i = 0; i < kMasses.size(); ++i) {
      const double m0 = kMasses[i];
      const auto p = two_body(m0);
      const auto rep = iteration_matrix_spectrum(p.fixed_point, qs, std::nullopt, p.fixed_point_jacobian);
      const auto got = real_parts(rep);
      v.require(match_all(got, kPlainReference[i], 1e-4, 1e-12), "reference column m0=" + fmt(m0));
      v.require(match_all(got, {-2.0, 1.0, -8.0 / (m0 + 4.0), 4.0 / (m0 + 4.0)}, 0.0, 1e-10),
                "closed form m0=" + fmt(m0));
      v.detail << " m0=" << fmt(m0) << ":{";
      for (double x : rep.sorted_real_parts()) v.detail << fmt(x) << ' ';
      v.detail << '}';
    }
  });

  run(2, "Petviashvili filters the homogeneity eigenvalue", 1.0, [&](Verdict& v) {
    for (std::size_t i = 0; i < kMasses.size(); ++i) {
      const auto p = two_body(kMasses[i]);
      const auto rep = dense_eigenvalues(petviashvili_jacobian(*p.homogeneous, 2.0 / 3.0, qs));
      auto got = real_parts(rep);
      // The filtered eigenvalue is the one of smallest modulus.
      const double smallest = std::abs(rep.eigenvalues.back());
      v.require(smallest <= 1e-5, "filtered eigenvalue m0=" + fmt(kMasses[i]));
      got.pop_back();
      v.require(match_all(got, kFilteredReference[i], 0.0, 1e-4), "surviving eigenvalues m0=" + fmt(kMasses[i]));
      v.detail << " m0=" << fmt(kMasses[i]) << ":|min|=" << fmt(smallest);
    }
  });

  run(3, "Convergence classification from q* + 0.1 ones", 5.0, [&](Verdict& v) {
    const std::vector<SolveStatus> expected = {SolveStatus::ConvergedResidual, SolveStatus::ConvergedResidual,
                                               SolveStatus::MaxIterations, SolveStatus::Diverged, SolveStatus::Diverged};
    for (std::size_t i = 0; i < kMasses.size(); ++i) {
      SolverConfig cfg;
      cfg.tol_residual = 1e-7;
      cfg.max_outer = 1000;
      const auto out = petviashvili_solve(two_body(kMasses[i]), qs + 0.1 * Vector::Ones(4), cfg);
      v.detail << " m0=" << fmt(kMasses[i]) << ":" << to_string(out.status) << "@" << out.trace.back().n;
      v.require(out.status == expected[i], "m0=" + fmt(kMasses[i]) + " expected " + std::string(to_string(expected[i])));
    }
  });

  run(4, "Orbital convergence from generator seeds", 5.0, [&](Verdict& v) {
    const auto p = two_body(10.0);
    const GroupAction rot = rotation_action();
    for (double eps : {1.0, 2.0, 4.0}) {
      const auto out = petviashvili_solve(p, qs + eps * generator_perturbation(qs), {}, qs);
      const auto orbit = align_to_orbit(out.x_final, qs, rot);
      const auto& last = out.trace.back();
      v.require(out.status == SolveStatus::ConvergedResidual, "eps=" + fmt(eps) + " converged");
      v.require(orbit.orbital_distance <= 1e-6, "eps=" + fmt(eps) + " orbital distance");
      v.require(orbit.raw_distance > 1e-2, "eps=" + fmt(eps) + " raw distance");
      v.require(last.stab_factor && std::abs(1.0 - *last.stab_factor) <= 1e-8, "eps=" + fmt(eps) + " |1-s_n|");
      v.require(last.residual <= 1e-7 && last.ref_error && *last.ref_error > 0.0, "eps=" + fmt(eps) + " plateau");
      v.detail << " eps=" << fmt(eps) << ":orbital=" << fmt(orbit.orbital_distance)
               << ",raw=" << fmt(orbit.raw_distance) << ",E=" << fmt(*last.ref_error);
    }
  });

  run(5, "Limit-point prediction, seeds q* + eps v(q*)", 5.0, [&](Verdict& v) {
    const auto p = two_body(10.0);
    const GroupAction rot = rotation_action();
    SolverConfig cfg;
    cfg.tol_residual = 1e-14;
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3};
    std::vector<double> gap;
    for (double e : eps) {
      const Vector x0 = qs + e * generator_perturbation(qs);
      const auto out = petviashvili_solve(p, x0, cfg);
      v.require(out.converged(), "eps=" + fmt(e) + " converged");
      const double alpha = align_to_orbit(out.x_final, qs, rot).alpha_star[0];
      gap.push_back(std::abs(alpha - e));
      v.detail << " eps=" << fmt(e) << ":|alpha*-eps|=" << fmt(gap.back());
    }
    const double c = std::max({gap[0] / (eps[0] * eps[0]), gap[1] / (eps[1] * eps[1]), gap[2] / (eps[2] * eps[2])});
    const double slope = std::log(gap[0] / gap[2]) / std::log(eps[0] / eps[2]);
    v.detail << " C=" << fmt(c) << " slope=" << fmt(slope);
    v.require(c <= 1.0, "C eps^2 bound");
    v.require(std::abs(slope - 2.0) <= 0.3, "log-log slope 2 +- 0.3");
  });

  run(6, "Polar reduction", 1.0, [&](Verdict& v) {
    double worst0 = 0.0, worst = 0.0;
    for (double m0 : kMasses) {
      worst0 = std::max(worst0, reduced_polar_residual(1.0, 1.0, std::numbers::pi, m0).lpNorm<Eigen::Infinity>());
    }
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> rr(0.5, 2.0), ang(-std::numbers::pi, std::numbers::pi), mass(0.0, 10.0);
    for (int k = 0; k < 100; ++k) {
      const double r1 = rr(gen), r2 = rr(gen), t1 = ang(gen), t2 = ang(gen), m0 = mass(gen);
      Vector q(4);
      q << r1 * std::cos(t1), r1 * std::sin(t1), r2 * std::cos(t2), r2 * std::sin(t2);
      const Vector f = build_nbody(NBodyConfig::unit_bodies(2, m0)).residual(q);
      const Vector jq = generator_perturbation(q);
      Vector polar(3);
      polar << f.head<2>().dot(q.head<2>()) / r1, f.tail<2>().dot(q.tail<2>()) / r2,
          f.tail<2>().dot(jq.tail<2>()) - f.head<2>().dot(jq.head<2>());
      const Vector red = reduced_polar_residual(r1, r2, t1 - t2, m0);
      worst = std::max(worst, (polar - red).lpNorm<Eigen::Infinity>() / std::max(1.0, red.lpNorm<Eigen::Infinity>()));
    }
    v.detail << " at (1,1,pi):" << fmt(worst0) << " change of variables:" << fmt(worst);
    v.require(worst0 <= 1e-12, "solution point");
    v.require(worst <= 1e-10, "change of variables");
  });

  const BSParams exact_params = BSParams::closed_form(0.9, 1024, 50.0);
  const SpectralGrid grid(1024, 50.0);
  const ExactProfile prof = exact_profile(0.9, 1024, 50.0);

  run(7, "Bona-Smith exact profile: residual and Jacobian spectrum", 120.0, [&](Verdict& v) {
    const ProblemSpec prob = build_bs_problem(exact_params);
    const Vector xs = prof.wave.stacked();
    const double res = prob.residual(xs).norm();
    const auto rep = dense_eigenvalues(prob.dense_jacobian(xs));
    const auto re = rep.sorted_real_parts();
    const std::size_t zeros = rep.count_modulus_below(1e-8);
    v.detail << " |F_h|=" << fmt(res) << " zero eigenvalues=" << zeros << " range=[" << fmt(re.front()) << ","
             << fmt(re.back()) << "]";
    v.require(res <= 1e-10, "residual");
    v.require(zeros == 1, "exactly one eigenvalue of modulus <= 1e-8");
    v.require(re.front() < 0.0 && re.back() > 0.0, "indefinite");
  });

  run(8, "Newton-PCG from a Gaussian perturbation", 60.0, [&](Verdict& v) {
    const auto r = bs_newton(exact_params, gauss_perturbation(prof, grid, 0.05).stacked(), 1e-12, 100);
    const auto ratios = convergence_ratios([&] {
      IterationTrace t = r.out.trace;
      for (auto& row : t.rows) row.ref_error = row.residual;
      return t;
    }());
    double rmax = 0.0;
    for (double q : ratios) rmax = std::max(rmax, q);
    v.detail << " status=" << to_string(r.out.status) << " |F|=" << fmt(r.out.final_residual())
             << " iterations=" << r.out.trace.back().n << " x_eta=" << fmt(r.xeta) << " x_u=" << fmt(r.xu)
             << " max ratio=" << fmt(rmax);
    v.require(r.out.final_residual() <= 1e-12, "residual <= 1e-12");
    v.require(std::abs(r.xeta) <= 1e-6 && std::abs(r.xu) <= 1e-6, "centred");
    v.require(std::isfinite(rmax) && rmax < 10.0, "bounded ratios");
  });

  run(9, "Phase shifts from generator perturbations", 120.0, [&](Verdict& v) {
    const std::vector<double> eps = {0.1, 0.05, 0.01, 0.005};
    const std::vector<double> table = {-9.9534e-2, -4.9941e-2, -9.9995e-3, -4.9999e-3};
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const auto r = bs_newton(exact_params, generator_discrete_perturbation(prof, grid, eps[i]).stacked(), 1e-12, 100);
      v.detail << " eps=" << fmt(eps[i]) << ":x_eta=" << fmt(r.xeta) << ",x_u=" << fmt(r.xu) << "("
               << to_string(r.out.status) << ")";
      v.require(r.out.converged() || r.out.final_residual() <= 1e-11, "eps=" + fmt(eps[i]) + " converged");
      v.require(near_rel(r.xeta, table[i], 1e-3), "eps=" + fmt(eps[i]) + " x_eta within 1e-3 relative");
      v.require(std::abs(r.xu - r.xeta) <= 1e-10 * std::max(1e-12, std::abs(r.xeta)),
                "eps=" + fmt(eps[i]) + " x_u = x_eta to 10 digits");
    }
  });

  run(10, "Unknown-speed solitary waves", 120.0, [&](Verdict& v) {
    for (double cs : {1.05, 1.2}) {
      BSParams p = exact_params;
      p.speed = cs;
      const auto r = bs_newton(p, prof.wave.stacked(), 1e-11, 1000);
      v.detail << " c_s=" << fmt(cs) << ":" << to_string(r.out.status) << "@" << r.out.trace.back().n
               << ",|F|=" << fmt(r.out.final_residual()) << ",x_eta=" << fmt(r.xeta) << ",x_u=" << fmt(r.xu);
      v.require(r.out.status == SolveStatus::ConvergedResidual, "c_s=" + fmt(cs) + " converged to 1e-11");
      // A center is meaningful only for a single hump.
      const Vector eta = WavePair::from_stacked(r.out.x_final).eta;
      const double top = eta.maxCoeff();
      int humps = 0;
      for (Index i = 0; i < eta.size(); ++i) {
        const double l = eta[(i + eta.size() - 1) % eta.size()], rgt = eta[(i + 1) % eta.size()];
        if (eta[i] > 0.5 * top && eta[i] >= l && eta[i] > rgt) ++humps;
      }
      v.detail << ",humps=" << humps;
      v.require(top > 0.0 && humps == 1, "c_s=" + fmt(cs) + " single solitary wave");
      if (cs == 1.05) {
        v.require(std::abs(r.xeta) > 1e-12, "c_s=1.05 nonzero shift");
        v.require(std::abs(r.xu - r.xeta) <= 1e-10 * std::abs(r.xeta), "c_s=1.05 x_u = x_eta to 10 digits");
      }
    }
  });

  run(11, "Propagation of the computed c_s = 1.2 wave", 300.0, [&](Verdict& v) {
    const double l = 128.0;
    const Index n = 2048;
    BSParams p = BSParams::closed_form(0.9, n, l);
    p.speed = 1.2;
    const auto seed = exact_profile(0.9, n, l);
    const auto r = bs_newton(p, seed.wave.stacked(), 1e-11, 1000);
    v.require(r.out.converged(), "wave computed");
    const WavePair w0 = WavePair::from_stacked(r.out.x_final);
    const GroupAction tr = translation_action(p);
    const double t_end = 100.0;

    const auto prop = propagate(w0, p, 0.01, {t_end});
    v.require(prop.completed, "integration finished");
    const WavePair& w1 = prop.snapshots.back().wave;
    double moved = translation_shift(w1, l) - translation_shift(w0, l);
    const double expected = std::remainder(p.speed * t_end, 2.0 * l);
    moved = std::remainder(moved, 2.0 * l);
    const Vector aligned = tr.act1(moved, w0.stacked());
    const double shape = (w1.stacked() - aligned).norm() / w0.stacked().norm();
    v.detail << " shift=" << fmt(moved) << " expected=" << fmt(expected) << " shape error=" << fmt(shape);
    v.require(std::abs(moved - expected) <= 1e-3, "translation c_s t mod 2L");
    v.require(shape <= 1e-3, "aligned shape");

    // Self-convergence of the time stepper against a dt/2 reference.
    const double t_order = 10.0;
    const std::vector<double> dts = {0.02, 0.01, 0.005};
    const Vector ref = propagate(w0, p, 0.0025, {t_order}).snapshots.back().wave.stacked();
    std::vector<double> err;
    for (double dt : dts) err.push_back((propagate(w0, p, dt, {t_order}).snapshots.back().wave.stacked() - ref).norm());
    const double s1 = std::log2(err[0] / err[1]), s2 = std::log2(err[1] / err[2]);
    v.detail << " errors=" << fmt(err[0]) << "," << fmt(err[1]) << "," << fmt(err[2]) << " orders=" << fmt(s1) << ","
             << fmt(s2);
    v.require(std::abs(s1 - 4.0) <= 0.5 && std::abs(s2 - 4.0) <= 0.5, "order 4 +- 0.5");
  });

  run(12, "Symmetry invariants on both problems", 60.0, [&](Verdict& v) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    // N-body: equivariance of G, kernel, orbit-constant spectrum, unit eigenvector.
    const auto nb = build_nbody(NBodyConfig::table_convention(3, 10.0));
    const Vector q3 = polygon_solution(3);
    const GroupAction rot = rotation_action();
    double eq = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Vector x = q3 + 0.2 * random_vector(6, 700 + static_cast<std::uint64_t>(k));
      eq = std::max(eq, equivariance_defect(nb.fixed_point, rot, Vector::Constant(1, ang(gen)), x) /
                            nb.fixed_point(x).norm());
    }
    const double ker = kernel_check(nb, q3, rot);
    const auto base = dense_eigenvalues(nb.fixed_point_jacobian(q3)).sorted_real_parts();
    double drift = 0.0;
    for (double a : {0.3, 1.9, -2.2}) {
      const auto other = dense_eigenvalues(nb.fixed_point_jacobian(rot.act1(a, q3))).sorted_real_parts();
      for (std::size_t i = 0; i < base.size(); ++i) drift = std::max(drift, std::abs(base[i] - other[i]));
    }
    const Vector g3 = rot.generators(q3).col(0);
    const double unit = (nb.fixed_point_jacobian(q3) * g3 - g3).norm() / g3.norm();
    v.detail << " nbody: equivariance=" << fmt(eq) << " kernel=" << fmt(ker) << " spectrum drift=" << fmt(drift)
             << " G'v-v=" << fmt(unit);
    v.require(eq <= 1e-10, "nbody equivariance");
    v.require(ker <= 1e-6, "nbody kernel");
    v.require(drift <= 1e-6, "nbody orbit spectrum");
    v.require(unit <= 1e-8, "nbody unit eigenvector");

    // Bona-Smith: grid-shift equivariance of F_h, kernel, orbit-constant
    // Jacobian spectrum (coarser grid for the dense solves), and the unit
    // eigenvector of the preconditioned Richardson map x - M^{-1} F_h(x).
    const ProblemSpec bs = build_bs_problem(exact_params);
    const GroupAction tr = translation_action(exact_params);
    const Vector xs = prof.wave.stacked();
    double beq = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Vector x = xs + 0.1 * random_vector(2048, 800 + static_cast<std::uint64_t>(k));
      const int shift = static_cast<int>(std::uniform_int_distribution<int>(1, 1023)(gen));
      beq = std::max(beq, equivariance_defect(bs.residual, tr, Vector::Constant(1, shift * exact_params.spacing()), x));
    }
    const double bker = kernel_check(bs, xs, tr);
    const BSParams small = BSParams::closed_form(0.9, 512, 50.0);
    const ProblemSpec bs_small = build_bs_problem(small);
    const GroupAction tr_small = translation_action(small);
    const Vector xs_small = exact_profile(0.9, 512, 50.0).wave.stacked();
    const auto bbase = dense_eigenvalues(bs_small.dense_jacobian(xs_small)).sorted_real_parts();
    double bdrift = 0.0;
    for (int j : {17, 200}) {
      const auto other =
          dense_eigenvalues(bs_small.dense_jacobian(tr_small.act1(j * small.spacing(), xs_small))).sorted_real_parts();
      for (std::size_t i = 0; i < bbase.size(); ++i) bdrift = std::max(bdrift, std::abs(bbase[i] - other[i]));
    }
    const LinearOperator minv = bs.preconditioner(1.0);
    const LinearOperator jac = bs.jacobian(xs);
    const Vector g = tr.generators(xs).col(0);
    const double bunit = ((g - minv(jac(g))) - g).norm() / g.norm();
    v.detail << " bona-smith: equivariance=" << fmt(beq) << " kernel=" << fmt(bker) << " spectrum drift=" << fmt(bdrift)
             << " G'v-v=" << fmt(bunit);
    v.require(beq <= 1e-8, "bona-smith equivariance");
    v.require(bker <= 1e-6, "bona-smith kernel");
    v.require(bdrift <= 1e-6, "bona-smith orbit spectrum");
    v.require(bunit <= 1e-8, "bona-smith unit eigenvector");
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
