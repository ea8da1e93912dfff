#pragma once

// Hamiltonians on CP^n entering through their S^1-invariant restriction h1 to
// the unit sphere of R^{2n+2}. The 2-homogeneous lift is
//   H(t,x) = |x|^2 h1(t, x/|x|),
// with gradient
//   grad H(t,x) = 2 h1(t,xhat) x + |x| grad_h1(t,xhat),
// where grad_h1 is the gradient of the 0-homogeneous extension of h1 at unit
// vectors (tangent to the sphere). Both maps extend by 0 at x = 0.
//
// Two built-in families:
//   DiagonalQuadratic  h1 = sum_j a_j |z_j|^2, so grad H = 2 A x with
//                      A = diag(a_j I_2); the twisted equation has closed-form
//                      single-mode solutions, used as the test oracle.
//   FourierPolynomial  h1(t,x) = sum_m c_m trig(2pi p_m t) <x, S_m x> with S_m
//                      drawn from the S^1-invariant quadratics |z_j|^2,
//                      Re(z_i conj z_j), Im(z_i conj z_j).

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "arnold/common.hpp"
#include "arnold/json_io.hpp"
#include "arnold/loop_space.hpp"

namespace arnold {

struct HamiltonianModel {
  int n = 0;  // ambient dimension d = 2n+2
  std::function<double(double, std::span<const double>)> h1;                 // (t, unit x)
  std::function<std::vector<double>(double, std::span<const double>)> grad_h1;  // tangent at unit x
  std::string label;

  int dim() const { return 2 * n + 2; }
};

// --- diagonal quadratic family -------------------------------------------

struct DiagonalQuadratic {
  std::vector<double> a;  // n+1 plane coefficients

  int n() const { return static_cast<int>(a.size()) - 1; }
};

inline HamiltonianModel make_hamiltonian(const DiagonalQuadratic& q) {
  if (q.a.empty()) throw config_error("diagonal_quadratic: empty coefficient list");
  HamiltonianModel m;
  m.n = q.n();
  m.label = "diagonal_quadratic";
  std::vector<double> a = q.a;
  m.h1 = [a](double, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      s += a[j] * (x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1]);
    return s;
  };
  m.grad_h1 = [a](double, std::span<const double> x) {
    // gradient of the 0-homogeneous extension at |x| = 1: 2Ax - 2<x,Ax>x
    std::vector<double> g(x.size(), 0.0);
    double h = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      g[2 * j] = 2.0 * a[j] * x[2 * j];
      g[2 * j + 1] = 2.0 * a[j] * x[2 * j + 1];
      h += a[j] * (x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1]);
    }
    for (std::size_t c = 0; c < x.size(); ++c) g[c] -= 2.0 * h * x[c];
    return g;
  };
  return m;
}

// --- trigonometric polynomial family --------------------------------------

struct InvariantTerm {
  enum class Form { diag, re, im };
  int p = 0;          // time frequency, factor trig(2pi p t)
  bool sine = false;  // cos by default
  Form form = Form::diag;
  int i = 0, j = 0;   // plane indices (j unused for diag)
  double c = 0.0;     // coefficient
};

struct FourierPolynomial {
  int n = 0;
  std::vector<InvariantTerm> terms;
};

namespace detail {

// <x, S x> for one invariant quadratic.
inline double invariant_value(const InvariantTerm& t, std::span<const double> x) {
  switch (t.form) {
    case InvariantTerm::Form::diag:
      return x[2 * t.i] * x[2 * t.i] + x[2 * t.i + 1] * x[2 * t.i + 1];
    case InvariantTerm::Form::re:
      return x[2 * t.i] * x[2 * t.j] + x[2 * t.i + 1] * x[2 * t.j + 1];
    case InvariantTerm::Form::im:
      return x[2 * t.i + 1] * x[2 * t.j] - x[2 * t.i] * x[2 * t.j + 1];
  }
  return 0.0;
}

// S x (S symmetric, commuting with J).
inline void invariant_apply(const InvariantTerm& t, std::span<const double> x,
                            double scale, std::span<double> out) {
  switch (t.form) {
    case InvariantTerm::Form::diag:
      out[2 * t.i] += scale * x[2 * t.i];
      out[2 * t.i + 1] += scale * x[2 * t.i + 1];
      return;
    case InvariantTerm::Form::re:
      out[2 * t.i] += 0.5 * scale * x[2 * t.j];
      out[2 * t.i + 1] += 0.5 * scale * x[2 * t.j + 1];
      out[2 * t.j] += 0.5 * scale * x[2 * t.i];
      out[2 * t.j + 1] += 0.5 * scale * x[2 * t.i + 1];
      return;
    case InvariantTerm::Form::im:
      out[2 * t.i] += -0.5 * scale * x[2 * t.j + 1];
      out[2 * t.i + 1] += 0.5 * scale * x[2 * t.j];
      out[2 * t.j] += 0.5 * scale * x[2 * t.i + 1];
      out[2 * t.j + 1] += -0.5 * scale * x[2 * t.i];
      return;
  }
}

inline double time_factor(const InvariantTerm& t, double time) {
  double ang = kTwoPi * t.p * time;
  return t.c * (t.sine ? std::sin(ang) : std::cos(ang));
}

}  // namespace detail

inline HamiltonianModel make_hamiltonian(const FourierPolynomial& fp) {
  const int planes = fp.n + 1;
  for (const auto& t : fp.terms) {
    if (t.i < 0 || t.i >= planes || ((t.form != InvariantTerm::Form::diag) && (t.j < 0 || t.j >= planes)))
      throw config_error("fourier_polynomial: plane index out of range");
    if (t.form != InvariantTerm::Form::diag && t.i == t.j)
      throw config_error("fourier_polynomial: coupling term needs distinct planes");
  }
  HamiltonianModel m;
  m.n = fp.n;
  m.label = "fourier_polynomial";
  auto terms = fp.terms;
  m.h1 = [terms](double time, std::span<const double> x) {
    double s = 0.0;
    for (const auto& t : terms) s += detail::time_factor(t, time) * detail::invariant_value(t, x);
    return s;
  };
  m.grad_h1 = [terms](double time, std::span<const double> x) {
    std::vector<double> g(x.size(), 0.0);
    double h = 0.0;
    for (const auto& t : terms) {
      double f = detail::time_factor(t, time);
      detail::invariant_apply(t, x, 2.0 * f, g);
      h += f * detail::invariant_value(t, x);
    }
    for (std::size_t c = 0; c < x.size(); ++c) g[c] -= 2.0 * h * x[c];
    return g;
  };
  return m;
}

// --- lift ------------------------------------------------------------------

inline double lift_value(const HamiltonianModel& m, double t, std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  if (r2 == 0.0) return 0.0;
  double r = std::sqrt(r2);
  std::vector<double> xhat(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) xhat[c] = x[c] / r;
  return r2 * m.h1(t, xhat);
}

inline std::vector<double> lift_grad(const HamiltonianModel& m, double t,
                                     std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  std::vector<double> g(x.size(), 0.0);
  if (r2 == 0.0) return g;
  double r = std::sqrt(r2);
  std::vector<double> xhat(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) xhat[c] = x[c] / r;
  double h = m.h1(t, xhat);
  std::vector<double> gh = m.grad_h1(t, xhat);
  for (std::size_t c = 0; c < x.size(); ++c) g[c] = 2.0 * h * x[c] + r * gh[c];
  return g;
}

// grad H applied pointwise to the loop and truncated back onto its window.
inline FourierLoop nabla_H_loopfield(const HamiltonianModel& m, const FourierLoop& x, int M) {
  if (x.window.dim != m.dim())
    throw dimension_error("nabla_H_loopfield: loop dimension does not match Hamiltonian");
  if (M < nonlinear_sampling_floor(x.window))
    throw aliasing_error("nabla_H_loopfield: need M >= 4*span+1 = " +
                         std::to_string(nonlinear_sampling_floor(x.window)));
  const int d = x.window.dim;
  std::vector<double> samples = synthesize(x, M);
  std::vector<double> out(samples.size(), 0.0);
  for (int i = 0; i < M; ++i) {
    double t = static_cast<double>(i) / M;
    std::span<const double> xi(samples.data() + static_cast<std::size_t>(i) * d,
                               static_cast<std::size_t>(d));
    std::vector<double> gi = lift_grad(m, t, xi);
    for (int c = 0; c < d; ++c) out[static_cast<std::size_t>(i) * d + c] = gi[c];
  }
  return analyze(out, x.window);
}

// --- closed-form oracle for the diagonal family ----------------------------

// One S^1-family of twisted solutions: the loop e^{2pi mode J t} q with q in
// the given coordinate plane solves the twisted equation at this lambda.
struct OracleFamily {
  double lambda = 0.0;
  int mode = 0;
  int plane = 0;
};

// lambda_0 is admissible iff a_j/pi - lambda_0 is not an integer for any j.
inline void check_admissible(const DiagonalQuadratic& q, double lambda0,
                             double tol = 1e-9) {
  for (std::size_t j = 0; j < q.a.size(); ++j) {
    double frac = q.a[j] / kPi - lambda0;
    if (std::fabs(frac - std::round(frac)) < tol)
      throw config_error("lambda0 inadmissible: a[" + std::to_string(j) +
                         "]/pi - lambda0 is an integer (plane " + std::to_string(j) + ")");
  }
}

// For each plane j the unique lambda_j in (lambda0, lambda0+1) congruent to
// a_j/pi mod 1, with the mode index m_j = a_j/pi - lambda_j.
inline std::vector<OracleFamily> oracle_families(const DiagonalQuadratic& q, double lambda0) {
  check_admissible(q, lambda0);
  std::vector<OracleFamily> fams;
  for (std::size_t j = 0; j < q.a.size(); ++j) {
    double ratio = q.a[j] / kPi;
    int mj = static_cast<int>(std::floor(ratio - lambda0));
    double lj = ratio - mj;
    fams.push_back(OracleFamily{lj, mj, static_cast<int>(j)});
  }
  return fams;
}

// Assemble the oracle loop (unit L^2 norm, coefficient (1,0) in its plane).
inline FourierLoop oracle_loop(const OracleFamily& f, const ModeWindow& w) {
  return unit_mode_loop(w, f.mode, 2 * f.plane, 1.0);
}

// --- validators -------------------------------------------------------------

struct ValidationReport {
  double max_invariance_defect = 0.0;  // |h1(rot x) - h1(x)| over samples
  double max_tangency_defect = 0.0;    // |<grad_h1, xhat>| over samples
  double max_gradient_relerr = 0.0;    // central FD of lift vs lift_grad
  bool pass = false;
};

inline ValidationReport validate_hamiltonian(const HamiltonianModel& m,
                                             std::uint64_t seed = 1,
                                             int samples = 64,
                                             double invariance_tol = 1e-10,
                                             double gradient_tol = 1e-6) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = m.dim();
  ValidationReport rep;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x(d);
    double r2 = 0.0;
    for (double& v : x) { v = gauss(rng); }
    for (double v : x) r2 += v * v;
    double r = std::sqrt(r2);
    for (double& v : x) v /= r;
    double t = unif(rng);
    double theta = unif(rng);
    std::vector<double> xr = x;
    rotate_pairs_inplace(xr, kTwoPi * theta);
    rep.max_invariance_defect =
        std::max(rep.max_invariance_defect, std::fabs(m.h1(t, xr) - m.h1(t, x)));
    auto g = m.grad_h1(t, x);
    double tang = 0.0;
    for (int c = 0; c < d; ++c) tang += g[c] * x[c];
    rep.max_tangency_defect = std::max(rep.max_tangency_defect, std::fabs(tang));

    // central differences of the lift at radius in [0.5, 2]
    double scale = 0.5 + 1.5 * unif(rng);
    std::vector<double> y(d);
    for (int c = 0; c < d; ++c) y[c] = scale * x[c];
    auto grad = lift_grad(m, t, y);
    const double h = 1e-5;
    for (int c = 0; c < d; ++c) {
      std::vector<double> yp = y, ym = y;
      yp[c] += h;
      ym[c] -= h;
      double fd = (lift_value(m, t, yp) - lift_value(m, t, ym)) / (2.0 * h);
      double denom = std::max(1.0, std::fabs(grad[c]));
      rep.max_gradient_relerr =
          std::max(rep.max_gradient_relerr, std::fabs(fd - grad[c]) / denom);
    }
  }
  rep.pass = rep.max_invariance_defect <= invariance_tol &&
             rep.max_tangency_defect <= invariance_tol &&
             rep.max_gradient_relerr <= gradient_tol;
  return rep;
}

// --- config file -------------------------------------------------------------

// {type: "diagonal_quadratic", n, a: [...]}
// {type: "fourier_polynomial", n, terms: [{p, trig, form, i[, j], c}]}
inline HamiltonianModel hamiltonian_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw config_error("hamiltonian config: missing 'type'");
  std::string type = j["type"].get<std::string>();
  if (type == "diagonal_quadratic") {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "type" && it.key() != "n" && it.key() != "a")
        throw config_error("hamiltonian config: unknown field '" + it.key() + "'");
    if (!j.contains("n") || !j.contains("a")) throw config_error("diagonal_quadratic: need n and a");
    DiagonalQuadratic q{j["a"].get<std::vector<double>>()};
    if (q.n() != j["n"].get<int>())
      throw config_error("diagonal_quadratic: a has " + std::to_string(q.a.size()) +
                         " entries, expected n+1");
    return make_hamiltonian(q);
  }
  if (type == "fourier_polynomial") {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "type" && it.key() != "n" && it.key() != "terms")
        throw config_error("hamiltonian config: unknown field '" + it.key() + "'");
    if (!j.contains("n") || !j.contains("terms")) throw config_error("fourier_polynomial: need n and terms");
    FourierPolynomial fp;
    fp.n = j["n"].get<int>();
    for (const auto& tj : j["terms"]) {
      for (auto it = tj.begin(); it != tj.end(); ++it) {
        const std::string& key = it.key();
        if (key != "p" && key != "trig" && key != "form" && key != "i" && key != "j" && key != "c")
          throw config_error("fourier_polynomial term: unknown field '" + key + "'");
      }
      InvariantTerm t;
      t.p = tj.value("p", 0);
      std::string trig = tj.value("trig", std::string("cos"));
      if (trig != "cos" && trig != "sin") throw config_error("term trig must be cos or sin");
      t.sine = (trig == "sin");
      std::string form = tj.at("form").get<std::string>();
      if (form == "diag") t.form = InvariantTerm::Form::diag;
      else if (form == "re") t.form = InvariantTerm::Form::re;
      else if (form == "im") t.form = InvariantTerm::Form::im;
      else throw config_error("term form must be diag, re or im");
      t.i = tj.at("i").get<int>();
      t.j = tj.value("j", 0);
      t.c = tj.at("c").get<double>();
      fp.terms.push_back(t);
    }
    return make_hamiltonian(fp);
  }
  throw config_error("hamiltonian config: unknown type '" + type + "'");
}

// Extract the diagonal coefficients when the model is the diagonal family.
// Several oracle paths special-case it.
inline const DiagonalQuadratic* as_diagonal(const ordered_json& j, DiagonalQuadratic& storage) {
  if (j.is_object() && j.contains("type") && j["type"] == "diagonal_quadratic") {
    storage.a = j["a"].get<std::vector<double>>();
    return &storage;
  }
  return nullptr;
}

}  // namespace arnold
