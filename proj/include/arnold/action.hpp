#pragma once

// The cutoff chi, the twisted fields F_lambda and jstar F_lambda, the modified
// action
//   A_H(x,lambda) = 1/2 <-J xdot, x>_2 - int_0^1 H(t,x(t)) dt
//                   + pi (chi(lambda) |x|_2^2 - lambda),
// its full gradient
//   (jstar(-J xdot - grad H(x) + 2 pi chi(lambda) x),
//    pi (chi'(lambda) |x|_2^2 - 1)),
// and a multi-start estimator for inf_{|x|=1} |field(x)| over the H^{1/2}
// unit sphere.
//
// chi construction: chi' is 0 outside [l0, l0+1], a polynomial ramp
// beta((l-l0)/eps) on the left edge, 1 on the plateau [l0+eps, l0+1-eps] and
// the mirrored ramp on the right. beta(u) = 18u^2 - 32u^3 + 15u^4 has
// beta(0)=0, beta(1)=1, beta'(0)=beta'(1)=0 and unit mean, which makes the
// plateau identity chi(l)=l and both endpoint values exact. (A ramp that is
// monotone with beta(0)=0, beta(1)=1 cannot have unit mean, so the ramp
// overshoots 1 in the middle; chi' stays strictly positive on (l0, l0+1).)

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "arnold/common.hpp"
#include "arnold/hamiltonian.hpp"
#include "arnold/linalg.hpp"
#include "arnold/loop_space.hpp"
#include "arnold/parallel.hpp"

namespace arnold {

namespace detail {
inline double chi_ramp(double u) { return ((15.0 * u - 32.0) * u + 18.0) * u * u; }
inline double chi_ramp_integral(double u) { return ((3.0 * u - 8.0) * u + 6.0) * u * u * u; }
}  // namespace detail

struct ChiProfile {
  double lambda0 = 0.0;
  double eps = 0.1;

  double value(double l) const {
    if (l <= lambda0) return lambda0;
    if (l >= lambda0 + 1.0) return lambda0 + 1.0;
    if (l < lambda0 + eps)
      return lambda0 + eps * detail::chi_ramp_integral((l - lambda0) / eps);
    if (l > lambda0 + 1.0 - eps)
      return lambda0 + 1.0 - eps * detail::chi_ramp_integral((lambda0 + 1.0 - l) / eps);
    return l;  // plateau, exact
  }

  double deriv(double l) const {
    if (l <= lambda0 || l >= lambda0 + 1.0) return 0.0;
    if (l < lambda0 + eps) return detail::chi_ramp((l - lambda0) / eps);
    if (l > lambda0 + 1.0 - eps) return detail::chi_ramp((lambda0 + 1.0 - l) / eps);
    return 1.0;
  }

  bool on_plateau(double l) const { return l >= lambda0 + eps && l <= lambda0 + 1.0 - eps; }
};

inline ChiProfile make_chi(double lambda0, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw config_error("make_chi: need 0 < eps < 1/2");
  return ChiProfile{lambda0, eps};
}

struct ActionPoint {
  FourierLoop x;
  double lambda = 0.0;
};

// Raw twisted field F_lambda(x) = -J xdot - grad H(x) + 2 pi lambda x, as an
// L^2 element on the window of x.
inline FourierLoop field_F_raw(const HamiltonianModel& m, const FourierLoop& x,
                               double lambda, int M) {
  FourierLoop out = minus_J_dt(x) - nabla_H_loopfield(m, x, M);
  FourierLoop scaled = kTwoPi * lambda * x;
  return out + scaled;
}

// jstar F_lambda = L x - jstar grad H(x) + 2 pi lambda jstar x; the admissible
// form L + compact used everywhere downstream.
inline FourierLoop field_F_lambda(const HamiltonianModel& m, const FourierLoop& x,
                                  double lambda, int M) {
  FourierLoop compact = nabla_H_loopfield(m, x, M) - (kTwoPi * lambda) * x;
  return op_L(x) - op_jstar(compact);
}

// 1/2 <-J xdot, x>_2 = pi sum_k k |x_k|^2.
inline double kinetic_term(const FourierLoop& x) {
  double s = 0.0;
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    if (k == 0) continue;
    auto xs = x.mode(k);
    double m = 0.0;
    for (int c = 0; c < x.window.dim; ++c) m += xs[c] * xs[c];
    s += static_cast<double>(k) * m;
  }
  return kPi * s;
}

// Mean of H(t_i, x(t_i)) over the uniform grid; exact for band-limited
// integrands below the floor (trapezoid = rectangle rule on periodic data).
inline double hamiltonian_integral(const HamiltonianModel& m, const FourierLoop& x, int M) {
  if (M < nonlinear_sampling_floor(x.window))
    throw aliasing_error("hamiltonian_integral: need M >= 4*span+1");
  std::vector<double> samples = synthesize(x, M);
  const int d = x.window.dim;
  double s = 0.0;
  for (int i = 0; i < M; ++i) {
    std::span<const double> xi(samples.data() + static_cast<std::size_t>(i) * d,
                               static_cast<std::size_t>(d));
    s += lift_value(m, static_cast<double>(i) / M, xi);
  }
  return s / M;
}

inline double action_value(const HamiltonianModel& m, const ChiProfile& chi,
                           const ActionPoint& p, int M) {
  double l2sq = l2_inner(p.x, p.x);
  return kinetic_term(p.x) - hamiltonian_integral(m, p.x, M) +
         kPi * (chi.value(p.lambda) * l2sq - p.lambda);
}

struct ActionGradient {
  FourierLoop loop;     // jstar(-J xdot - grad H + 2 pi chi(lambda) x)
  double multiplier = 0.0;  // g = pi (chi'(lambda) |x|_2^2 - 1)

  double norm() const {
    return std::sqrt(h12_inner(loop, loop) + multiplier * multiplier);
  }
};

inline ActionGradient action_gradient(const HamiltonianModel& m, const ChiProfile& chi,
                                      const ActionPoint& p, int M) {
  ActionGradient g;
  g.loop = field_F_lambda(m, p.x, chi.value(p.lambda), M);
  g.multiplier = kPi * (chi.deriv(p.lambda) * l2_inner(p.x, p.x) - 1.0);
  return g;
}

// g alone, also used by the flow probes.
inline double multiplier_g(const ChiProfile& chi, const FourierLoop& x, double lambda) {
  return kPi * (chi.deriv(lambda) * l2_inner(x, x) - 1.0);
}

// --- non-vanishing infimum ----------------------------------------------------

using LoopField = std::function<FourierLoop(const FourierLoop&)>;

struct InfimumBudget {
  int random_starts = 32;
  int descent_iters = 60;
  std::uint64_t seed = 1;
};

struct InfimumResult {
  double value = std::numeric_limits<double>::infinity();  // min |field| on unit sphere found
  FourierLoop argmin;
  std::vector<double> start_values;  // per-start minima, start order
};

namespace detail {

// |field(x)|^2 / |x|^2, both in H^{1/2}; scale invariant for 1-homogeneous fields.
inline double rayleigh(const LoopField& f, const FourierLoop& x) {
  double den = h12_inner(x, x);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  FourierLoop fx = f(x);
  return h12_inner(fx, fx) / den;
}

inline double descend(const LoopField& f, FourierLoop& x, int iters) {
  const std::size_t D = x.coeffs.size();
  double val = rayleigh(f, x);
  std::vector<double> grad(D);
  for (int it = 0; it < iters; ++it) {
    double h = 1e-7 * std::max(1.0, h12_norm(x));
    for (std::size_t i = 0; i < D; ++i) {
      double keep = x.coeffs[i];
      x.coeffs[i] = keep + h;
      grad[i] = (rayleigh(f, x) - val) / h;
      x.coeffs[i] = keep;
    }
    double gn = norm2(grad);
    if (gn < 1e-14) break;
    double step = std::max(0.05, std::sqrt(val)) / gn;
    bool improved = false;
    for (int bt = 0; bt < 30; ++bt) {
      FourierLoop trial = x;
      for (std::size_t i = 0; i < D; ++i) trial.coeffs[i] -= step * grad[i];
      double tv = rayleigh(f, trial);
      if (tv < val) {
        double n = h12_norm(trial);
        if (n > 0) {
          for (double& c : trial.coeffs) c /= n;
          x = trial;
          val = rayleigh(f, x);
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return val;
}

}  // namespace detail

// Estimates inf over the H^{1/2} unit sphere of |field(x)| by descent from
// every coordinate axis of the window plus seeded random starts. One-sided:
// the reported value is an upper bound for the true infimum, so an estimate
// above a threshold is a PASS certificate only up to optimizer quality, while
// a small estimate exhibits an explicit near-zero.
inline InfimumResult nonvanishing_infimum(const LoopField& field, const ModeWindow& window,
                                          const InfimumBudget& budget = {}) {
  std::vector<FourierLoop> starts;
  for (int k = window.k_min; k <= window.k_max; ++k)
    for (int c = 0; c < window.dim; ++c) starts.push_back(unit_mode_loop(window, k, c));
  const std::size_t axis_count = starts.size();
  for (int r = 0; r < budget.random_starts; ++r) {
    auto rng = make_rng(budget.seed, r);
    std::normal_distribution<double> gauss(0.0, 1.0);
    FourierLoop x(window);
    for (double& v : x.coeffs) v = gauss(rng);
    double n = h12_norm(x);
    for (double& v : x.coeffs) v /= n;
    starts.push_back(std::move(x));
  }
  std::vector<double> values(starts.size());
  std::vector<FourierLoop> mins(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    FourierLoop x = starts[i];
    int iters = i < axis_count ? budget.descent_iters / 2 : budget.descent_iters;
    values[i] = detail::descend(field, x, iters);
    mins[i] = std::move(x);
  });
  InfimumResult res;
  res.start_values.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    res.start_values[i] = std::sqrt(std::max(0.0, values[i]));
    if (res.start_values[i] < res.value) {
      res.value = res.start_values[i];
      res.argmin = mins[i];
    }
  }
  double n = h12_norm(res.argmin);
  if (n > 0)
    for (double& v : res.argmin.coeffs) v /= n;
  return res;
}

// Convenience: jstar F_lambda for a fixed Hamiltonian and lambda as a LoopField.
// M is raised to the nonlinear floor of the loop actually passed in.
inline LoopField make_F_field(const HamiltonianModel& m, double lambda, int M_hint = 0) {
  return [m, lambda, M_hint](const FourierLoop& x) {
    int M = std::max(M_hint, nonlinear_sampling_floor(x.window));
    return field_F_lambda(m, x, lambda, M);
  };
}

}  // namespace arnold
