#pragma once

// Critical-point machinery for the modified action: multi-start damped Newton
// on the gauge-bordered system, clustering of solutions into S^1-families,
// the family-count report, signed-zero-count degrees of odd fields
// (Euler-characteristic check) and flow probes for isolating-neighborhood
// evidence.
//
// Gauge fixing: the S^1-action makes zeros of the gradient non-isolated, so
// the Newton system is bordered with one phase row <J x_dom, .>_{1/2} = 0
// (x_dom: the current iterate restricted to its dominant coordinate plane)
// and one multiplier column; the multiplier vanishes at convergence.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arnold/action.hpp"
#include "arnold/common.hpp"
#include "arnold/linalg.hpp"
#include "arnold/loop_space.hpp"
#include "arnold/parallel.hpp"

namespace arnold {

// Annulus r0 <= |x|_{1/2} <= R0 times the multiplier slab. r0 = 0 degenerates
// to a ball, used by the degree computation where the origin is a zero.
struct SearchRegion {
  double r0 = 0.05;
  double R0 = 10.0;
  double lambda0 = -0.5;

  void validate() const {
    if (!(r0 >= 0.0 && r0 < R0))
      throw config_error("SearchRegion: need 0 <= r0 < R0");
  }
  bool contains(double norm, double lambda) const {
    return norm >= r0 && norm <= R0 && lambda > lambda0 && lambda < lambda0 + 1.0;
  }
};

struct SolverConfig {
  int starts = 100;
  double newton_tol = 1e-10;
  int max_iter = 60;
  SearchRegion region;
  std::uint64_t seed = 1;
};

struct SolvedPoint {
  ActionPoint point;
  double residual = 0.0;  // |grad A_H| re-evaluated at the converged point
};

namespace detail {

// Orbit tangent carrier: J applied to the dominant-plane part of x.
inline FourierLoop gauge_vector(const FourierLoop& x) {
  auto mass = plane_l2_mass(x);
  int dom = 0;
  for (std::size_t j = 1; j < mass.size(); ++j)
    if (mass[j] > mass[dom]) dom = static_cast<int>(j);
  FourierLoop v(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    auto xs = x.mode(k);
    auto vs = v.mode(k);
    vs[2 * dom] = -xs[2 * dom + 1];
    vs[2 * dom + 1] = xs[2 * dom];
  }
  return v;
}

struct NewtonOutcome {
  bool converged = false;
  bool abandoned = false;  // singular beyond damping recovery
  ActionPoint point;
  double residual = 0.0;
};

inline NewtonOutcome newton_from_start(const HamiltonianModel& m, const ChiProfile& chi,
                                       ActionPoint start, int M, const SolverConfig& cfg) {
  const std::size_t D = start.x.coeffs.size();
  const std::size_t n = D + 2;  // x, lambda, gauge multiplier
  NewtonOutcome out;
  ActionPoint cur = std::move(start);
  double mu = 0.0;

  auto grad_at = [&](const ActionPoint& p) { return action_gradient(m, chi, p, M); };

  auto residual_vec = [&](const ActionPoint& p, double mu_val, const FourierLoop& gauge,
                          std::vector<double>& r) {
    ActionGradient g = grad_at(p);
    for (std::size_t i = 0; i < D; ++i) r[i] = g.loop.coeffs[i] + mu_val * gauge.coeffs[i];
    r[D] = g.multiplier;
    r[D + 1] = h12_inner(gauge, p.x);
  };

  std::vector<double> r(n), r_trial(n);
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    ActionGradient g = grad_at(cur);
    double pure_res = g.norm();
    if (pure_res < cfg.newton_tol) {
      out.converged = true;
      out.point = cur;
      out.residual = pure_res;
      return out;
    }
    FourierLoop gauge = gauge_vector(cur.x);
    residual_vec(cur, mu, gauge, r);

    // forward-difference Jacobian over (x, lambda); analytic gauge column/row
    Matrix J(n, n);
    ActionPoint pert = cur;
    for (std::size_t col = 0; col <= D; ++col) {
      double* slot = col < D ? &pert.x.coeffs[col] : &pert.lambda;
      double keep = *slot;
      double h = 1e-7 * std::max(1.0, std::fabs(keep));
      *slot = keep + h;
      residual_vec(pert, mu, gauge, r_trial);
      *slot = keep;
      for (std::size_t row = 0; row < n; ++row) J(row, col) = (r_trial[row] - r[row]) / h;
    }
    for (std::size_t row = 0; row < D; ++row) J(row, D + 1) = gauge.coeffs[row];
    J(D, D + 1) = 0.0;
    J(D + 1, D + 1) = 0.0;

    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];
    Matrix Jc = J;
    LuResult lu = lu_solve_inplace(Jc, rhs);
    if (!lu.ok) {
      // Levenberg fallback: (J^T J + damp I) delta = -J^T r
      bool recovered = false;
      for (double damp = 1e-8; damp <= 1e2; damp *= 100.0) {
        Matrix JtJ(n, n);
        std::vector<double> Jtr(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += J(k, i) * J(k, j);
            JtJ(i, j) = s + (i == j ? damp : 0.0);
          }
        for (std::size_t i = 0; i < n; ++i) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k) s += J(k, i) * (-r[k]);
          Jtr[i] = s;
        }
        if (lu_solve_inplace(JtJ, Jtr).ok) { rhs = Jtr; recovered = true; break; }
      }
      if (!recovered) { out.abandoned = true; return out; }
    }

    // backtracking on the bordered residual norm
    double rn = norm2(r);
    double t = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 14; ++bt) {
      ActionPoint trial = cur;
      for (std::size_t i = 0; i < D; ++i) trial.x.coeffs[i] += t * rhs[i];
      trial.lambda += t * rhs[D];
      double mu_trial = mu + t * rhs[D + 1];
      FourierLoop gauge_t = gauge_vector(trial.x);
      residual_vec(trial, mu_trial, gauge_t, r_trial);
      if (norm2(r_trial) < (1.0 - 1e-4 * t) * rn) {
        cur = std::move(trial);
        mu = mu_trial;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) { out.abandoned = true; return out; }
  }
  ActionGradient g = grad_at(cur);
  if (g.norm() < cfg.newton_tol) {
    out.converged = true;
    out.point = cur;
    out.residual = g.norm();
  }
  return out;
}

}  // namespace detail

struct SolveDiagnostics {
  int starts = 0;
  int converged = 0;
  int abandoned = 0;
  int outside_region = 0;
};

// Multi-start damped Newton on the gauge-bordered system. Converged points
// inside the region, deduplicated at raw-point level, deterministic given the
// seed. Finding nothing is an empty list, not an error.
inline std::vector<SolvedPoint> find_critical_points(const HamiltonianModel& m,
                                                     const ChiProfile& chi,
                                                     const ModeWindow& window,
                                                     const SolverConfig& cfg, int M,
                                                     SolveDiagnostics* diag = nullptr) {
  cfg.region.validate();
  const double l0 = chi.lambda0;
  std::vector<detail::NewtonOutcome> outcomes(cfg.starts);
  parallel_for(cfg.starts, [&](std::size_t s) {
    auto rng = make_rng(cfg.seed, s);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ActionPoint start{FourierLoop(window), 0.0};
    for (double& v : start.x.coeffs) v = gauss(rng);
    double n2 = l2_norm(start.x);
    for (double& v : start.x.coeffs) v /= n2;  // solutions live near |x|_2 = 1
    start.lambda = l0 + chi.eps + (1.0 - 2.0 * chi.eps) * unif(rng);
    outcomes[s] = detail::newton_from_start(m, chi, std::move(start), M, cfg);
  });

  SolveDiagnostics d;
  d.starts = cfg.starts;
  std::vector<SolvedPoint> points;
  for (auto& o : outcomes) {
    if (o.abandoned) { d.abandoned++; continue; }
    if (!o.converged) continue;
    d.converged++;
    double nx = h12_norm(o.point.x);
    if (!cfg.region.contains(nx, o.point.lambda)) { d.outside_region++; continue; }
    bool dup = false;
    for (const auto& p : points) {
      if (std::fabs(p.point.lambda - o.point.lambda) < 1e-9 &&
          h12_norm(p.point.x - o.point.x) < 1e-7) {
        dup = true;
        break;
      }
    }
    if (!dup) points.push_back(SolvedPoint{std::move(o.point), o.residual});
  }
  if (diag) *diag = d;
  return points;
}

// --- clustering into S^1-families ------------------------------------------------

struct ClusterTol {
  double lambda = 1e-6;
  double orbit = 1e-4;
};

// min over theta of |rot(x,theta) - y|_{1/2}: 256-point grid then
// golden-section refinement around the best cell.
inline double orbit_distance(const FourierLoop& x, const FourierLoop& y) {
  const int grid = 256;
  double best_theta = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    double theta = static_cast<double>(i) / grid;
    double dist = h12_norm(s1_rotate(x, theta) - y);
    if (dist < best) { best = dist; best_theta = theta; }
  }
  double a = best_theta - 1.0 / grid, b = best_theta + 1.0 / grid;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), dpt = a + gr * (b - a);
  double fc = h12_norm(s1_rotate(x, c) - y);
  double fd = h12_norm(s1_rotate(x, dpt) - y);
  for (int it = 0; it < 40; ++it) {
    if (fc < fd) {
      b = dpt; dpt = c; fd = fc;
      c = b - gr * (b - a);
      fc = h12_norm(s1_rotate(x, c) - y);
    } else {
      a = c; c = dpt; fc = fd;
      dpt = a + gr * (b - a);
      fd = h12_norm(s1_rotate(x, dpt) - y);
    }
  }
  return std::min({best, fc, fd});
}

struct CriticalFamily {
  ActionPoint representative;
  double residual = 0.0;
  double lambda = 0.0;
  std::vector<double> fingerprint;  // lambda, per-plane L2 mass, dominant modes
  int multiplicity_hint = 1;
};

inline std::vector<double> family_fingerprint(const ActionPoint& p) {
  std::vector<double> fp;
  fp.push_back(p.lambda);
  auto mass = plane_l2_mass(p.x);
  fp.insert(fp.end(), mass.begin(), mass.end());
  for (int j = 0; j < p.x.window.dim / 2; ++j)
    fp.push_back(static_cast<double>(dominant_mode_in_plane(p.x, j)));
  return fp;
}

// Two points belong to one family iff their lambdas agree and one lies on the
// other's S^1-orbit. Gauge invariant: rotating inputs does not change counts.
inline std::vector<CriticalFamily> cluster_families(const std::vector<SolvedPoint>& points,
                                                    const ClusterTol& tol = {}) {
  std::vector<CriticalFamily> fams;
  for (const auto& sp : points) {
    bool placed = false;
    for (auto& fam : fams) {
      if (std::fabs(fam.lambda - sp.point.lambda) >= tol.lambda) continue;
      if (orbit_distance(sp.point.x, fam.representative.x) < tol.orbit) {
        fam.multiplicity_hint++;
        if (sp.residual < fam.residual) {
          fam.representative = sp.point;
          fam.residual = sp.residual;
          fam.lambda = sp.point.lambda;
          fam.fingerprint = family_fingerprint(sp.point);
        }
        placed = true;
        break;
      }
    }
    if (!placed) {
      CriticalFamily fam;
      fam.representative = sp.point;
      fam.residual = sp.residual;
      fam.lambda = sp.point.lambda;
      fam.fingerprint = family_fingerprint(sp.point);
      fams.push_back(std::move(fam));
    }
  }
  std::sort(fams.begin(), fams.end(), [](const CriticalFamily& a, const CriticalFamily& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.fingerprint < b.fingerprint;
  });
  return fams;
}

struct CountReport {
  std::vector<CriticalFamily> families;
  int count = 0;
  int expected_minimum = 0;  // n + 1
  bool pass = false;
  std::vector<std::string> warnings;
  SolveDiagnostics diagnostics;
};

// The desk-scale family count against the n+1 bound. A confirmation, not a
// proof: count is a lower bound for the number of S^1-families.
inline CountReport arnold_count(const HamiltonianModel& m, const ChiProfile& chi,
                                const ModeWindow& window, const SolverConfig& cfg, int M,
                                const ClusterTol& tol = {}) {
  CountReport rep;
  auto points = find_critical_points(m, chi, window, cfg, M, &rep.diagnostics);
  rep.families = cluster_families(points, tol);
  rep.count = static_cast<int>(rep.families.size());
  rep.expected_minimum = m.n + 1;
  rep.pass = rep.count >= rep.expected_minimum;
  for (std::size_t i = 0; i + 1 < rep.families.size(); ++i)
    if (std::fabs(rep.families[i].lambda - rep.families[i + 1].lambda) < tol.lambda) {
      rep.warnings.push_back(
          "degenerate families at coincident lambda distinguished only by fingerprint; "
          "count is a lower bound");
      break;
    }
  if (rep.diagnostics.abandoned > rep.diagnostics.starts / 2)
    rep.warnings.push_back("more than half of the Newton starts were abandoned");
  return rep;
}

// --- signed zero count / Euler characteristic ------------------------------------

struct DegreeConfig {
  int starts = 64;
  double newton_tol = 1e-11;
  int max_iter = 80;
  std::uint64_t seed = 3;
  double cond_threshold = 1e10;  // pivot-ratio proxy above this is degenerate
};

struct SignedZero {
  FourierLoop x;
  int sign = 0;
};

struct DegreeReport {
  int degree = 0;
  std::vector<SignedZero> zeros;
  bool sweep_warning = false;  // verification sweep found a new zero
  std::string convention =
      "zeros strictly inside the region; for odd fields on a symmetric region "
      "non-origin zeros pair up with equal signs, so a ball degree is odd and "
      "an annulus degree is even";
};

namespace detail {

inline std::optional<FourierLoop> newton_zero(const LoopField& f, FourierLoop x,
                                              const DegreeConfig& cfg) {
  const std::size_t D = x.coeffs.size();
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    FourierLoop fx = f(x);
    double rn = norm2(fx.coeffs);
    if (rn < cfg.newton_tol) return x;
    Matrix J(D, D);
    for (std::size_t col = 0; col < D; ++col) {
      double keep = x.coeffs[col];
      double h = 1e-7 * std::max(1.0, std::fabs(keep));
      x.coeffs[col] = keep + h;
      FourierLoop fp = f(x);
      x.coeffs[col] = keep;
      for (std::size_t row = 0; row < D; ++row)
        J(row, col) = (fp.coeffs[row] - fx.coeffs[row]) / h;
    }
    std::vector<double> rhs(D);
    for (std::size_t i = 0; i < D; ++i) rhs[i] = -fx.coeffs[i];
    if (!lu_solve_inplace(J, rhs).ok) return std::nullopt;
    double t = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 12; ++bt) {
      FourierLoop trial = x;
      for (std::size_t i = 0; i < D; ++i) trial.coeffs[i] += t * rhs[i];
      if (norm2(f(trial).coeffs) < rn) { x = std::move(trial); moved = true; break; }
      t *= 0.5;
    }
    if (!moved) return std::nullopt;
  }
  return norm2(f(x).coeffs) < cfg.newton_tol ? std::optional<FourierLoop>(x) : std::nullopt;
}

inline LuResult zero_jacobian_sign(const LoopField& f, const FourierLoop& x) {
  const std::size_t D = x.coeffs.size();
  Matrix J(D, D);
  FourierLoop xp = x, xm = x;
  for (std::size_t col = 0; col < D; ++col) {
    double keep = x.coeffs[col];
    double h = 1e-6 * std::max(1.0, std::fabs(keep));
    xp.coeffs[col] = keep + h;
    xm.coeffs[col] = keep - h;
    FourierLoop fp = f(xp);
    FourierLoop fm = f(xm);
    xp.coeffs[col] = keep;
    xm.coeffs[col] = keep;
    for (std::size_t row = 0; row < D; ++row)
      J(row, col) = (fp.coeffs[row] - fm.coeffs[row]) / (2.0 * h);
  }
  return lu_det_sign(J);
}

inline std::vector<FourierLoop> degree_zeros(const LoopField& f, const ModeWindow& window,
                                             const SearchRegion& region,
                                             const DegreeConfig& cfg, int starts,
                                             std::uint64_t seed) {
  std::vector<std::optional<FourierLoop>> found(starts * 2 + 1);
  parallel_for(found.size(), [&](std::size_t s) {
    FourierLoop x0(window);
    if (s == found.size() - 1) {
      // the origin itself; for ball regions it is frequently the only zero
    } else {
      std::size_t pair = s / 2;
      auto rng = make_rng(seed, pair);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (double& v : x0.coeffs) v = gauss(rng);
      double n = h12_norm(x0);
      // start radii ladder through the region interior
      double target = region.r0 + (region.R0 - region.r0) * (0.15 + 0.75 * (pair % 7) / 7.0);
      for (double& v : x0.coeffs) v *= target / n;
      if (s % 2 == 1)
        for (double& v : x0.coeffs) v = -v;  // antipodal seeds, using oddness
    }
    found[s] = newton_zero(f, std::move(x0), cfg);
  });
  std::vector<FourierLoop> zeros;
  for (auto& o : found) {
    if (!o) continue;
    double n = h12_norm(*o);
    bool inside = n < region.R0 && (region.r0 == 0.0 ? true : n > region.r0);
    if (!inside) continue;
    bool dup = false;
    for (const auto& z : zeros)
      if (h12_norm(z - *o) < 1e-6 * std::max(1.0, n)) { dup = true; break; }
    if (!dup) zeros.push_back(std::move(*o));
  }
  return zeros;
}

}  // namespace detail

// Signed zero count of an odd field over the region: sum of sign det DF over
// the zeros found by antipodal-pair multi-start Newton. Degenerate zeros are
// an error (the degree is unreliable); a verification sweep with a finer start
// grid that uncovers a new zero sets a warning flag.
inline DegreeReport euler_char_signed_zeros(const LoopField& field, const ModeWindow& window,
                                            const SearchRegion& region,
                                            const DegreeConfig& cfg = {}) {
  region.validate();
  // oddness validation on samples
  auto rng = make_rng(cfg.seed, 999);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 8; ++rep) {
    FourierLoop x(window);
    for (double& v : x.coeffs) v = gauss(rng);
    FourierLoop sum = field(x) + field(-1.0 * x);
    if (norm2(sum.coeffs) > 1e-8 * std::max(1.0, norm2(field(x).coeffs)))
      throw config_error("euler_char_signed_zeros: field is not odd on samples");
  }

  auto zeros = detail::degree_zeros(field, window, region, cfg, cfg.starts, cfg.seed);
  DegreeReport rep;
  for (const auto& z : zeros) {
    LuResult lu = detail::zero_jacobian_sign(field, z);
    bool degenerate = !lu.ok || lu.min_pivot <= 1e-8 * std::max(1.0, lu.max_pivot) ||
                      lu.max_pivot / lu.min_pivot > cfg.cond_threshold;
    if (degenerate)
      throw config_error("euler_char_signed_zeros: degenerate zero; degree unreliable");
    rep.zeros.push_back(SignedZero{z, lu.det_sign});
    rep.degree += lu.det_sign;
  }
  // verification sweep: double the starts, different seed stream
  auto sweep = detail::degree_zeros(field, window, region, cfg, cfg.starts * 2,
                                    split_seed(cfg.seed, 77));
  for (const auto& z : sweep) {
    bool known = false;
    for (const auto& kz : rep.zeros)
      if (h12_norm(kz.x - z) < 1e-5 * std::max(1.0, h12_norm(z))) { known = true; break; }
    if (!known) { rep.sweep_warning = true; break; }
  }
  return rep;
}

// --- boundedness / isolating-neighborhood probes ----------------------------------

struct ProbeBudget {
  int samples = 512;
  double t_max = 50.0;
  double h_init = 1e-2;
  double h_min = 1e-8;
  int max_steps = 20000;
  std::uint64_t seed = 5;
};

struct TrajectoryResult {
  bool exited = false;
  bool flagged = false;  // step-size collapse or step-cap hit
  double t_exit = 0.0;
};

struct ProbeReport {
  int samples = 0;
  int exits_forward = 0;
  int exits_backward = 0;
  int exits_either = 0;
  std::vector<int> non_exiting;  // sample indices that never left the region
  int flagged = 0;
};

namespace detail {

// Cash–Karp 4(5) embedded step for the flattened state (coeffs..., lambda).
template <typename Rhs>
inline TrajectoryResult integrate_until_exit(
    const Rhs& rhs, std::vector<double> state,
    const std::function<bool(const std::vector<double>&)>& inside, const ProbeBudget& b) {
  static const double A[6] = {0, 1. / 5, 3. / 10, 3. / 5, 1., 7. / 8};
  static const double B[6][5] = {
      {0, 0, 0, 0, 0},
      {1. / 5, 0, 0, 0, 0},
      {3. / 40, 9. / 40, 0, 0, 0},
      {3. / 10, -9. / 10, 6. / 5, 0, 0},
      {-11. / 54, 5. / 2, -70. / 27, 35. / 27, 0},
      {1631. / 55296, 175. / 512, 575. / 13824, 44275. / 110592, 253. / 4096}};
  static const double C4[6] = {2825. / 27648, 0, 18575. / 48384, 13525. / 55296,
                               277. / 14336, 1. / 4};
  static const double C5[6] = {37. / 378, 0, 250. / 621, 125. / 594, 0, 512. / 1771};
  (void)A;

  TrajectoryResult res;
  const std::size_t n = state.size();
  double t = 0.0, h = b.h_init;
  std::vector<std::vector<double>> k(6, std::vector<double>(n));
  std::vector<double> tmp(n), next(n);
  std::vector<double> prev = state;
  double t_prev = 0.0;
  for (int step = 0; step < b.max_steps; ++step) {
    if (!inside(state)) {
      // refine the exit time along the last accepted step
      double lo = t_prev, hi = t;
      for (int bis = 0; bis < 30 && hi - lo > 1e-12 * (1.0 + hi); ++bis) {
        double mid = 0.5 * (lo + hi);
        double w1 = (t - t_prev) > 0 ? (mid - t_prev) / (t - t_prev) : 1.0;
        for (std::size_t i = 0; i < n; ++i) tmp[i] = prev[i] + w1 * (state[i] - prev[i]);
        if (inside(tmp)) lo = mid;
        else hi = mid;
      }
      res.exited = true;
      res.t_exit = hi;
      return res;
    }
    if (t >= b.t_max) return res;
    h = std::min(h, b.t_max - t + 1e-12);
    k[0] = rhs(state);
    for (int stage = 1; stage < 6; ++stage) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = state[i];
        for (int j = 0; j < stage; ++j) acc += h * B[stage][j] * k[j][i];
        tmp[i] = acc;
      }
      k[stage] = rhs(tmp);
    }
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s4 = 0.0, s5 = 0.0;
      for (int j = 0; j < 6; ++j) { s4 += C4[j] * k[j][i]; s5 += C5[j] * k[j][i]; }
      next[i] = state[i] + h * s5;
      err += (s5 - s4) * (s5 - s4) * h * h;
      scale += next[i] * next[i];
    }
    err = std::sqrt(err);
    double tol = 1e-8 * (1.0 + std::sqrt(scale));
    if (err <= tol) {
      prev = state;
      t_prev = t;
      state = next;
      t += h;
      h = std::min(h * std::min(5.0, 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2)), 1.0);
    } else {
      h *= std::max(0.1, 0.9 * std::pow(tol / err, 0.25));
    }
    if (h < b.h_min) { res.flagged = true; return res; }
  }
  res.flagged = true;  // step cap reached without exit
  return res;
}

}  // namespace detail

// lambda-dependent family of loop fields, the x-component of a flow on E x R.
using FlowField = std::function<FourierLoop(const FourierLoop&, double)>;

// x-component of the gradient flow of the modified action.
inline FlowField make_gradient_flow(const HamiltonianModel& m, const ChiProfile& chi,
                                    int M_hint = 0) {
  return [m, chi, M_hint](const FourierLoop& x, double lambda) {
    int M = std::max(M_hint, nonlinear_sampling_floor(x.window));
    return field_F_lambda(m, x, chi.value(lambda), M);
  };
}

// Integrates one point of (T, g) in the given time direction until it leaves
// the region or the cap is reached.
inline TrajectoryResult probe_trajectory(const FlowField& T_field, const ChiProfile& chi,
                                         const ModeWindow& window, const ActionPoint& start,
                                         const SearchRegion& region, int direction,
                                         const ProbeBudget& budget = {}) {
  const std::size_t D = window.size();
  std::vector<double> state(D + 1);
  for (std::size_t i = 0; i < D; ++i) state[i] = start.x.coeffs[i];
  state[D] = start.lambda;
  const double sgn = direction >= 0 ? 1.0 : -1.0;

  auto rhs = [&](const std::vector<double>& s) {
    FourierLoop x(window);
    for (std::size_t i = 0; i < D; ++i) x.coeffs[i] = s[i];
    FourierLoop tx = T_field(x, s[D]);
    std::vector<double> out(D + 1);
    for (std::size_t i = 0; i < D; ++i) out[i] = sgn * tx.coeffs[i];
    out[D] = sgn * multiplier_g(chi, x, s[D]);
    return out;
  };
  const double slack = 1e-6 * (1.0 + region.R0);
  auto inside = [&](const std::vector<double>& s) {
    double n2 = 0.0;
    FourierLoop x(window);
    for (std::size_t i = 0; i < D; ++i) x.coeffs[i] = s[i];
    n2 = h12_norm(x);
    return n2 >= region.r0 - slack && n2 <= region.R0 + slack &&
           s[D] >= region.lambda0 - slack && s[D] <= region.lambda0 + 1.0 + slack;
  };
  return detail::integrate_until_exit(rhs, state, inside, budget);
}

// Samples the boundary of the annulus-times-slab region and reports how many
// trajectories leave it in each time direction. Evidence that the region is
// isolating, not a proof.
inline ProbeReport boundedness_probe(const FlowField& T_field, const ChiProfile& chi,
                                     const ModeWindow& window, const SearchRegion& region,
                                     const ProbeBudget& budget = {}) {
  region.validate();
  std::vector<ActionPoint> pts;
  auto rng = make_rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < budget.samples; ++i) {
    FourierLoop x(window);
    for (double& v : x.coeffs) v = gauss(rng);
    double n = h12_norm(x);
    double lambda;
    switch (i % 4) {
      case 0:  // outer sphere
        for (double& v : x.coeffs) v *= region.R0 / n;
        lambda = region.lambda0 + unif(rng);
        break;
      case 1:  // inner sphere
        for (double& v : x.coeffs) v *= std::max(region.r0, 1e-9) / n;
        lambda = region.lambda0 + unif(rng);
        break;
      case 2:  // bottom lid
        for (double& v : x.coeffs)
          v *= (region.r0 + unif(rng) * (region.R0 - region.r0)) / n;
        lambda = region.lambda0;
        break;
      default:  // top lid
        for (double& v : x.coeffs)
          v *= (region.r0 + unif(rng) * (region.R0 - region.r0)) / n;
        lambda = region.lambda0 + 1.0;
        break;
    }
    pts.push_back(ActionPoint{std::move(x), lambda});
  }

  std::vector<TrajectoryResult> fwd(pts.size()), bwd(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    fwd[i] = probe_trajectory(T_field, chi, window, pts[i], region, +1, budget);
    bwd[i] = probe_trajectory(T_field, chi, window, pts[i], region, -1, budget);
  });
  ProbeReport rep;
  rep.samples = static_cast<int>(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (fwd[i].exited) rep.exits_forward++;
    if (bwd[i].exited) rep.exits_backward++;
    if (fwd[i].exited || bwd[i].exited) rep.exits_either++;
    else rep.non_exiting.push_back(static_cast<int>(i));
    if (fwd[i].flagged || bwd[i].flagged) rep.flagged++;
  }
  return rep;
}

}  // namespace arnold
