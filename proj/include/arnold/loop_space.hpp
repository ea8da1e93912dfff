#pragma once

// Finite Fourier model of the loop space E = H^{1/2}(T, R^d), d = 2n+2 even.
// A loop is stored as real d-vector coefficients x_k of the basis curves
// e^{2pi k J t}, k running over an integer mode window [k_min, k_max] with
// k_min <= 0 <= k_max. J is the standard complex structure acting blockwise
// on coordinate pairs, (a,b) -> (-b,a), so e^{theta J} rotates every pair
// by theta.
//
// Conventions fixed here and used project-wide:
//   l2 inner   <x,y>_2   = sum_k <x_k, y_k>          (modes are orthonormal)
//   h12 inner  <x,y>     = <x_0,y_0> + sum_{k!=0} 2pi|k| <x_k,y_k>
//   L          x_k -> sign(k) x_k                     (zero on mode 0)
//   jstar      x_k -> x_k / w(k), w(0)=1, w(k)=2pi|k| (adjoint of inclusion)
// With these weights jstar(-J d/dt) = L holds mode-exactly.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arnold/common.hpp"

namespace arnold {

struct ModeWindow {
  int k_min = 0;
  int k_max = 0;
  int dim = 2;  // ambient dimension d = 2n+2

  int span() const { return k_max - k_min; }
  int mode_count() const { return span() + 1; }
  int size() const { return mode_count() * dim; }  // flat dof count
  bool contains(int k) const { return k >= k_min && k <= k_max; }
  bool contains(const ModeWindow& sub) const {
    return sub.dim == dim && sub.k_min >= k_min && sub.k_max <= k_max;
  }
  bool operator==(const ModeWindow&) const = default;
};

inline ModeWindow make_window(int k_min, int k_max, int dim) {
  if (k_min > 0 || k_max < 0)
    throw window_error("mode window must satisfy k_min <= 0 <= k_max");
  if (dim < 2 || dim % 2 != 0)
    throw dimension_error("ambient dimension must be even and >= 2");
  return ModeWindow{k_min, k_max, dim};
}

// Symmetric window [-K, K].
inline ModeWindow symmetric_window(int K, int dim) { return make_window(-K, K, dim); }

// H^{1/2} weight of mode k.
inline double h12_weight(int k) { return k == 0 ? 1.0 : kTwoPi * std::abs(k); }

struct FourierLoop {
  ModeWindow window;
  std::vector<double> coeffs;  // mode-major: coeffs[(k - k_min)*dim + c]

  FourierLoop() = default;
  explicit FourierLoop(const ModeWindow& w) : window(w), coeffs(w.size(), 0.0) {}

  std::span<double> mode(int k) {
    return {coeffs.data() + static_cast<std::size_t>(k - window.k_min) * window.dim,
            static_cast<std::size_t>(window.dim)};
  }
  std::span<const double> mode(int k) const {
    return {coeffs.data() + static_cast<std::size_t>(k - window.k_min) * window.dim,
            static_cast<std::size_t>(window.dim)};
  }
};

inline FourierLoop zero_loop(const ModeWindow& w) { return FourierLoop(w); }

// Loop with a single nonzero entry: coordinate c of mode k set to value.
inline FourierLoop unit_mode_loop(const ModeWindow& w, int k, int c, double value = 1.0) {
  if (!w.contains(k)) throw window_error("unit_mode_loop: mode outside window");
  FourierLoop x(w);
  x.mode(k)[c] = value;
  return x;
}

// J on a flat vector: (a,b) -> (-b,a) on each pair.
inline void apply_J_inplace(std::span<double> v) {
  for (std::size_t p = 0; p + 1 < v.size(); p += 2) {
    double a = v[p], b = v[p + 1];
    v[p] = -b;
    v[p + 1] = a;
  }
}

inline std::vector<double> apply_J(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  apply_J_inplace(out);
  return out;
}

// e^{theta J} on a flat vector: rotate every coordinate pair by theta.
inline void rotate_pairs_inplace(std::span<double> v, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  for (std::size_t p = 0; p + 1 < v.size(); p += 2) {
    double a = v[p], b = v[p + 1];
    v[p] = c * a - s * b;
    v[p + 1] = s * a + c * b;
  }
}

inline void check_same_window(const FourierLoop& x, const FourierLoop& y,
                              const char* who) {
  if (!(x.window == y.window))
    throw dimension_error(std::string(who) + ": operands on different windows");
}

inline double l2_inner(const FourierLoop& x, const FourierLoop& y) {
  check_same_window(x, y, "l2_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) s += x.coeffs[i] * y.coeffs[i];
  return s;
}

inline double h12_inner(const FourierLoop& x, const FourierLoop& y) {
  check_same_window(x, y, "h12_inner");
  double s = 0.0;
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    auto xs = x.mode(k);
    auto ys = y.mode(k);
    double m = 0.0;
    for (int c = 0; c < x.window.dim; ++c) m += xs[c] * ys[c];
    s += h12_weight(k) * m;
  }
  return s;
}

inline double l2_norm(const FourierLoop& x) { return std::sqrt(l2_inner(x, x)); }
inline double h12_norm(const FourierLoop& x) { return std::sqrt(h12_inner(x, x)); }

// L x = x^+ - x^-: multiply mode k by sign(k); kernel is E^0 (mode 0).
inline FourierLoop op_L(const FourierLoop& x) {
  FourierLoop out(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    if (k == 0) continue;
    double s = k > 0 ? 1.0 : -1.0;
    auto xs = x.mode(k);
    auto os = out.mode(k);
    for (int c = 0; c < x.window.dim; ++c) os[c] = s * xs[c];
  }
  return out;
}

// Adjoint of the inclusion H^{1/2} -> L^2: divide mode k by w(k).
inline FourierLoop op_jstar(const FourierLoop& u) {
  FourierLoop out(u.window);
  for (int k = u.window.k_min; k <= u.window.k_max; ++k) {
    double w = h12_weight(k);
    auto us = u.mode(k);
    auto os = out.mode(k);
    for (int c = 0; c < u.window.dim; ++c) os[c] = us[c] / w;
  }
  return out;
}

// -J dx/dt computed mode-wise: coefficient 2pi k x_k. The factor is built as
// sign(k) * h12_weight(k) so that op_jstar(minus_J_dt(x)) == op_L(x) exactly.
inline FourierLoop minus_J_dt(const FourierLoop& x) {
  FourierLoop out(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    if (k == 0) continue;
    double f = (k > 0 ? 1.0 : -1.0) * h12_weight(k);
    auto xs = x.mode(k);
    auto os = out.mode(k);
    for (int c = 0; c < x.window.dim; ++c) os[c] = f * xs[c];
  }
  return out;
}

// Orthogonal projection onto the sub-window: zero all modes outside sub,
// keep the storage window.
inline FourierLoop project_window(const FourierLoop& x, const ModeWindow& sub) {
  if (!x.window.contains(sub))
    throw window_error("project_window: sub-window not contained in storage window");
  FourierLoop out(x.window);
  for (int k = sub.k_min; k <= sub.k_max; ++k) {
    auto xs = x.mode(k);
    auto os = out.mode(k);
    for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
  }
  return out;
}

// Copy into a larger storage window (new modes zero).
inline FourierLoop embed_window(const FourierLoop& x, const ModeWindow& target) {
  if (!target.contains(x.window))
    throw window_error("embed_window: target does not contain source window");
  FourierLoop out(target);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    auto xs = x.mode(k);
    auto os = out.mode(k);
    for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
  }
  return out;
}

// Restrict to a smaller storage window, dropping outside modes.
inline FourierLoop restrict_window(const FourierLoop& x, const ModeWindow& target) {
  if (!x.window.contains(target))
    throw window_error("restrict_window: target not contained in source window");
  FourierLoop out(target);
  for (int k = target.k_min; k <= target.k_max; ++k) {
    auto xs = x.mode(k);
    auto os = out.mode(k);
    for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
  }
  return out;
}

// Sh^power: multiplication by e^{2pi J t}^power; mode index map k -> k+power.
// The storage window stays fixed, so shifted-out modes must be zero.
inline FourierLoop shift(const FourierLoop& x, int power) {
  FourierLoop out(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    auto xs = x.mode(k);
    bool zero = true;
    for (int c = 0; c < x.window.dim; ++c)
      if (xs[c] != 0.0) { zero = false; break; }
    if (zero) continue;
    int kt = k + power;
    if (!x.window.contains(kt))
      throw window_error("shift: mode " + std::to_string(k) + " -> " +
                         std::to_string(kt) + " overflows the storage window");
    auto os = out.mode(kt);
    for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
  }
  return out;
}

// Global S^1 action: every coefficient rotated by e^{2pi theta J}; mode
// indices unchanged. Preserves both norms and every mode operator here.
inline FourierLoop s1_rotate(const FourierLoop& x, double theta) {
  FourierLoop out = x;
  const double ang = kTwoPi * theta;
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) rotate_pairs_inplace(out.mode(k), ang);
  return out;
}

inline int sampling_floor(const ModeWindow& w) { return 2 * w.span() + 1; }
inline int nonlinear_sampling_floor(const ModeWindow& w) { return 4 * w.span() + 1; }

// Pointwise samples x(t_i), t_i = i/M, flattened M x dim.
inline std::vector<double> synthesize(const FourierLoop& x, int M) {
  if (M < sampling_floor(x.window))
    throw aliasing_error("synthesize: need M >= 2*span+1 = " +
                         std::to_string(sampling_floor(x.window)) + ", got " +
                         std::to_string(M));
  const int d = x.window.dim;
  std::vector<double> samples(static_cast<std::size_t>(M) * d, 0.0);
  std::vector<double> tmp(d);
  for (int i = 0; i < M; ++i) {
    double* out = samples.data() + static_cast<std::size_t>(i) * d;
    for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
      auto xs = x.mode(k);
      for (int c = 0; c < d; ++c) tmp[c] = xs[c];
      rotate_pairs_inplace(tmp, kTwoPi * k * (static_cast<double>(i) / M));
      for (int c = 0; c < d; ++c) out[c] += tmp[c];
    }
  }
  return samples;
}

// Discrete Fourier analysis onto the window: x_k = (1/M) sum_i R(-2pi k t_i) u(t_i).
// Exact inverse of synthesize for band-limited data when M >= 2*span+1; for
// wider-band data the coefficients beyond the window fold in mod M.
inline FourierLoop analyze(const std::vector<double>& samples, const ModeWindow& window) {
  const int d = window.dim;
  if (samples.size() % d != 0)
    throw dimension_error("analyze: sample buffer size not a multiple of dim");
  const int M = static_cast<int>(samples.size() / d);
  if (M < sampling_floor(window))
    throw aliasing_error("analyze: need M >= 2*span+1 = " +
                         std::to_string(sampling_floor(window)) + ", got " +
                         std::to_string(M));
  FourierLoop x(window);
  std::vector<double> tmp(d);
  for (int k = window.k_min; k <= window.k_max; ++k) {
    auto xs = x.mode(k);
    for (int i = 0; i < M; ++i) {
      const double* u = samples.data() + static_cast<std::size_t>(i) * d;
      for (int c = 0; c < d; ++c) tmp[c] = u[c];
      rotate_pairs_inplace(tmp, -kTwoPi * k * (static_cast<double>(i) / M));
      for (int c = 0; c < d; ++c) xs[c] += tmp[c];
    }
    for (int c = 0; c < d; ++c) xs[c] /= M;
  }
  return x;
}

inline FourierLoop operator+(const FourierLoop& x, const FourierLoop& y) {
  check_same_window(x, y, "operator+");
  FourierLoop out = x;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += y.coeffs[i];
  return out;
}

inline FourierLoop operator-(const FourierLoop& x, const FourierLoop& y) {
  check_same_window(x, y, "operator-");
  FourierLoop out = x;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= y.coeffs[i];
  return out;
}

inline FourierLoop operator*(double a, const FourierLoop& x) {
  FourierLoop out = x;
  for (double& v : out.coeffs) v *= a;
  return out;
}

// Per-coordinate-plane L^2 mass: plane j collects coordinates 2j, 2j+1 over
// all modes. Gauge invariant (S^1 rotation preserves each plane's norm).
inline std::vector<double> plane_l2_mass(const FourierLoop& x) {
  const int planes = x.window.dim / 2;
  std::vector<double> mass(planes, 0.0);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    auto xs = x.mode(k);
    for (int j = 0; j < planes; ++j)
      mass[j] += xs[2 * j] * xs[2 * j] + xs[2 * j + 1] * xs[2 * j + 1];
  }
  return mass;
}

// Mode with the largest L^2 mass in plane j.
inline int dominant_mode_in_plane(const FourierLoop& x, int j) {
  int best_k = 0;
  double best = -1.0;
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    auto xs = x.mode(k);
    double m = xs[2 * j] * xs[2 * j] + xs[2 * j + 1] * xs[2 * j + 1];
    if (m > best) { best = m; best_k = k; }
  }
  return best_k;
}

}  // namespace arnold
