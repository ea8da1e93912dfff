#pragma once

// Homotopies of admissible fields L + compact: non-vanishing certificates
// along field paths, and the explicit chain of deformations that reduces the
// twisted field at lambda0+1 to a product-form field.
//
//   step 1  conjugation by the shift Sh: x -> e^{2pi J t} x. The raw fields
//           satisfy F_{l0+1} = Sh^{-1} F_{l0} Sh exactly; the two ways of
//           inserting jstar are joined by the mixed operator
//           s (jstar Sh^{-1}) + (1-s)(Sh^{-1} jstar), whose mode coefficients
//           c_k(s) = s/w(k-1) + (1-s)/w(k) are strictly positive.
//   step 2  truncation V = L + P K P onto modes [-N,N]; valid once the field
//           has positive h12 product with L outside [-N,N].
//   step 3  unshift by M (Sh on [-N-1,N], Sh^{-2(N+1)} on E_{N+1}, identity
//           elsewhere); M (Sh^{-1} V Sh) M^{-1} equals V on E^{-N,N}, +id on
//           E_{-N-1} and L outside.
//   step 4  scaling deformation of g; checked on scaling rays.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "arnold/action.hpp"
#include "arnold/common.hpp"
#include "arnold/loop_space.hpp"
#include "arnold/parallel.hpp"

namespace arnold {

// shift that silently drops coefficients leaving the storage window; the
// Galerkin compression of Sh^power.
inline FourierLoop shift_drop(const FourierLoop& x, int power) {
  FourierLoop out(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    int kt = k + power;
    if (!x.window.contains(kt)) continue;
    auto xs = x.mode(k);
    auto os = out.mode(kt);
    for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
  }
  return out;
}

struct AdmissibleField {
  LoopField apply;
  std::string label;

  FourierLoop compact_part(const FourierLoop& x) const { return apply(x) - op_L(x); }
};

inline AdmissibleField make_admissible_F(const HamiltonianModel& m, double lambda,
                                         int M_hint = 0) {
  AdmissibleField f;
  f.apply = make_F_field(m, lambda, M_hint);
  f.label = "jstar_F[" + m.label + ", lambda=" + std::to_string(lambda) + "]";
  return f;
}

inline AdmissibleField field_lincomb(double a, const AdmissibleField& f,
                                     double b, const AdmissibleField& g,
                                     const std::string& label = "lincomb") {
  AdmissibleField out;
  LoopField fa = f.apply, gb = g.apply;
  out.apply = [a, b, fa, gb](const FourierLoop& x) { return a * fa(x) + b * gb(x); };
  out.label = label;
  return out;
}

// Smallest half-width N such that the compact part of the field has h12 mass
// at most tol outside [-N, N] for every probe loop. Returns -1 if even the
// full ambient window fails.
inline int compactness_window(const AdmissibleField& f, const std::vector<FourierLoop>& probes,
                              double tol = 1e-8) {
  int ambient = 0;
  for (const auto& p : probes) ambient = std::max({ambient, -p.window.k_min, p.window.k_max});
  for (int N = 0; N <= ambient; ++N) {
    bool ok = true;
    for (const auto& p : probes) {
      FourierLoop K = f.compact_part(p);
      double tail = 0.0;
      for (int k = K.window.k_min; k <= K.window.k_max; ++k) {
        if (std::abs(k) <= N) continue;
        auto ks = K.mode(k);
        double m = 0.0;
        for (int c = 0; c < K.window.dim; ++c) m += ks[c] * ks[c];
        tail += h12_weight(k) * m;
      }
      if (std::sqrt(tail) > tol) { ok = false; break; }
    }
    if (ok) return N;
  }
  return -1;
}

// --- step 1: shift conjugation ------------------------------------------------

// Sh^{-power} ∘ field ∘ Sh^{power}, evaluated with one spare mode of headroom
// each side and compressed back onto the window of the argument. power = +1
// is the conjugation of step 1; power = -1 undoes it on interior modes.
inline AdmissibleField shift_conjugate_field(const AdmissibleField& f, int power = 1) {
  if (power != 1 && power != -1)
    throw config_error("shift_conjugate_field: power must be +1 or -1");
  AdmissibleField out;
  LoopField inner = f.apply;
  out.apply = [inner, power](const FourierLoop& x) {
    ModeWindow ext = make_window(x.window.k_min - 1, x.window.k_max + 1, x.window.dim);
    FourierLoop y = shift(embed_window(x, ext), power);
    FourierLoop fy = inner(y);
    return restrict_window(shift_drop(fy, -power), x.window);
  };
  out.label = (power == 1 ? "Sh^-1 o (" : "Sh o (") + f.label +
              (power == 1 ? ") o Sh" : ") o Sh^-1");
  return out;
}

// jstar ∘ Sh^{-1} ∘ F_lambda ∘ Sh with the raw (L^2) twisted field inside;
// the right-hand side of the conjugation identity at lambda+1.
inline AdmissibleField conjugated_raw_F(const HamiltonianModel& m, double lambda,
                                        int M_hint = 0) {
  AdmissibleField out;
  out.apply = [m, lambda, M_hint](const FourierLoop& x) {
    ModeWindow ext = make_window(x.window.k_min - 1, x.window.k_max + 1, x.window.dim);
    int M = std::max(M_hint, nonlinear_sampling_floor(ext));
    FourierLoop y = shift(embed_window(x, ext), 1);
    FourierLoop Fy = field_F_raw(m, y, lambda, M);
    return op_jstar(restrict_window(shift_drop(Fy, -1), x.window));
  };
  out.label = "jstar o Sh^-1 o F_raw[" + m.label + "] o Sh";
  return out;
}

// Mode coefficient of s·(jstar∘Sh^{-1}) + (1-s)·(Sh^{-1}∘jstar) on e_k; the
// operator transports e_k to c_k(s) e_{k-1}.
inline double mixed_shift_coeff(int k, double s) {
  return s / h12_weight(k - 1) + (1.0 - s) / h12_weight(k);
}

inline FourierLoop apply_mixed_shift(const FourierLoop& x, double s) {
  FourierLoop out(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    int kt = k - 1;
    if (!x.window.contains(kt)) continue;
    double c = mixed_shift_coeff(k, s);
    auto xs = x.mode(k);
    auto os = out.mode(kt);
    for (int cc = 0; cc < x.window.dim; ++cc) os[cc] = c * xs[cc];
  }
  return out;
}

// --- non-vanishing certificates -----------------------------------------------

struct FieldPath {
  std::function<AdmissibleField(double)> at;
  std::string label;
};

struct HomotopyCertificate {
  std::string step;
  std::vector<double> s_grid;
  std::vector<double> infima;
  double tau = 1e-3;
  double margin = 0.0;  // min infimum - tau
  bool pass = false;
  double worst_s = 0.0;
  FourierLoop witness;  // argmin loop at the worst s
};

inline HomotopyCertificate verify_ia_homotopy(const FieldPath& path,
                                              const std::vector<double>& s_grid,
                                              const ModeWindow& window,
                                              const InfimumBudget& budget = {},
                                              double tau = 1e-3,
                                              const std::string& step = "path") {
  HomotopyCertificate cert;
  cert.step = step;
  cert.s_grid = s_grid;
  cert.tau = tau;
  cert.infima.resize(s_grid.size());
  std::vector<FourierLoop> witnesses(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    AdmissibleField f = path.at(s_grid[i]);
    InfimumBudget b = budget;
    b.seed = split_seed(budget.seed, i);
    InfimumResult r = nonvanishing_infimum(f.apply, window, b);
    cert.infima[i] = r.value;
    witnesses[i] = r.argmin;
  }
  std::size_t worst = 0;
  for (std::size_t i = 1; i < cert.infima.size(); ++i)
    if (cert.infima[i] < cert.infima[worst]) worst = i;
  cert.worst_s = s_grid[worst];
  cert.witness = witnesses[worst];
  cert.margin = cert.infima[worst] - tau;
  cert.pass = cert.infima[worst] > tau;
  return cert;
}

inline std::vector<double> uniform_grid(int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

// Hamiltonian scaled by a factor; the linear homotopy s·H runs through these.
inline HamiltonianModel scale_hamiltonian(const HamiltonianModel& m, double s) {
  HamiltonianModel out = m;
  auto h1 = m.h1;
  auto gh = m.grad_h1;
  out.h1 = [h1, s](double t, std::span<const double> x) { return s * h1(t, x); };
  out.grad_h1 = [gh, s](double t, std::span<const double> x) {
    auto g = gh(t, x);
    for (double& v : g) v *= s;
    return g;
  };
  out.label = m.label + "*s";
  return out;
}

// Path s -> jstar F^{sH}_lambda, the C0-small continuation at fixed lambda.
inline FieldPath scaled_hamiltonian_path(const HamiltonianModel& m, double lambda,
                                         int M_hint = 0) {
  FieldPath p;
  p.at = [m, lambda, M_hint](double s) {
    return make_admissible_F(scale_hamiltonian(m, s), lambda, M_hint);
  };
  p.label = "s*H at lambda=" + std::to_string(lambda);
  return p;
}

// Step-1 path: s·jstar(Sh^{-1} F_{l0} Sh) + (1-s)·Sh^{-1}(jstar F_{l0})Sh.
inline FieldPath step1_path(const HamiltonianModel& m, double lambda0, int M_hint = 0) {
  FieldPath p;
  AdmissibleField a = conjugated_raw_F(m, lambda0, M_hint);
  AdmissibleField b = shift_conjugate_field(make_admissible_F(m, lambda0, M_hint));
  p.at = [a, b](double s) {
    return field_lincomb(s, a, 1.0 - s, b, "step1 mix s=" + std::to_string(s));
  };
  p.label = "step1 conjugation mix";
  return p;
}

// --- step 2: truncation -------------------------------------------------------

struct PositivityBudget {
  ModeWindow ambient;   // sampling space; must strictly contain window_out
  int random_samples = 64;
  std::uint64_t seed = 7;
};

// Sampled inf of <field(x), L x>_{1/2} over unit loops supported outside
// window_out. Axis loops on every outside mode are always included.
inline double positivity_margin(const AdmissibleField& f, const ModeWindow& window_out,
                                const PositivityBudget& budget) {
  if (!budget.ambient.contains(window_out))
    throw window_error("positivity_margin: ambient must contain window_out");
  std::vector<FourierLoop> samples;
  for (int k = budget.ambient.k_min; k <= budget.ambient.k_max; ++k) {
    if (window_out.contains(k)) continue;
    for (int c = 0; c < budget.ambient.dim; ++c)
      samples.push_back(unit_mode_loop(budget.ambient, k, c));
  }
  if (samples.empty())
    throw window_error("positivity_margin: no modes outside window_out in ambient");
  auto rng = make_rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < budget.random_samples; ++r) {
    FourierLoop x(budget.ambient);
    for (int k = budget.ambient.k_min; k <= budget.ambient.k_max; ++k) {
      if (window_out.contains(k)) continue;
      auto xs = x.mode(k);
      for (int c = 0; c < budget.ambient.dim; ++c) xs[c] = gauss(rng);
    }
    samples.push_back(std::move(x));
  }
  double margin = std::numeric_limits<double>::infinity();
  for (auto& x : samples) {
    double n = h12_norm(x);
    for (double& v : x.coeffs) v /= n;
    margin = std::min(margin, h12_inner(f.apply(x), op_L(x)));
  }
  return margin;
}

// V = L + P∘K∘P with P the projection onto [-N, N]. Requires a positive
// sampled margin outside [-N, N] (the n0 condition).
inline AdmissibleField truncate_to_V(const AdmissibleField& f, int N,
                                     const PositivityBudget& budget) {
  double margin = positivity_margin(f, symmetric_window(N, budget.ambient.dim), budget);
  if (!(margin > 0.0))
    throw config_error("truncate_to_V: positivity margin " + std::to_string(margin) +
                       " outside [-" + std::to_string(N) + "," + std::to_string(N) +
                       "] is not positive; N too small");
  AdmissibleField out;
  LoopField inner = f.apply;
  out.apply = [inner, N](const FourierLoop& x) {
    ModeWindow cut{std::max(x.window.k_min, -N), std::min(x.window.k_max, N), x.window.dim};
    FourierLoop px = project_window(x, cut);
    FourierLoop K = inner(px) - op_L(px);
    return op_L(x) + project_window(K, cut);
  };
  out.label = "V_trunc[N=" + std::to_string(N) + "](" + f.label + ")";
  return out;
}

// --- step 3: unshift ----------------------------------------------------------

inline void require_unshift_window(const ModeWindow& w, int N, const char* who) {
  if (w.k_min > -N - 1 || w.k_max < N + 1)
    throw window_error(std::string(who) + ": window must contain [-N-1, N+1]");
}

// M: Sh on E^{-N-1,N}, Sh^{-2(N+1)} on E_{N+1}, identity outside.
inline FourierLoop apply_unshift_M(const FourierLoop& x, int N) {
  require_unshift_window(x.window, N, "apply_unshift_M");
  FourierLoop out(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    int kt;
    if (k >= -N - 1 && k <= N) kt = k + 1;
    else if (k == N + 1) kt = -N - 1;
    else kt = k;
    auto xs = x.mode(k);
    auto os = out.mode(kt);
    for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
  }
  return out;
}

inline FourierLoop apply_unshift_M_inverse(const FourierLoop& x, int N) {
  require_unshift_window(x.window, N, "apply_unshift_M_inverse");
  FourierLoop out(x.window);
  for (int k = x.window.k_min; k <= x.window.k_max; ++k) {
    int kt;
    if (k >= -N && k <= N + 1) kt = k - 1;
    else if (k == -N - 1) kt = N + 1;
    else kt = k;
    auto xs = x.mode(k);
    auto os = out.mode(kt);
    for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
  }
  return out;
}

// V_{l0+1} := M ∘ (Sh^{-1} ∘ V_{l0} ∘ Sh) ∘ M^{-1}; verified mode-exactly
// against the three-case formula before returning.
inline AdmissibleField build_step3_field(const AdmissibleField& V_lambda0, int N,
                                         const ModeWindow& verify_window,
                                         std::uint64_t seed = 13) {
  require_unshift_window(verify_window, N, "build_step3_field");
  AdmissibleField conj = shift_conjugate_field(V_lambda0);
  AdmissibleField out;
  LoopField cf = conj.apply;
  out.apply = [cf, N](const FourierLoop& x) {
    return apply_unshift_M(cf(apply_unshift_M_inverse(x, N)), N);
  };
  out.label = "V[lambda0+1] via M-conjugation, N=" + std::to_string(N);

  // three-case verification on every mode of the window
  const int d = verify_window.dim;
  for (int k = verify_window.k_min; k <= verify_window.k_max; ++k) {
    for (int c = 0; c < d; ++c) {
      FourierLoop e = unit_mode_loop(verify_window, k, c);
      FourierLoop got = out.apply(e);
      FourierLoop want(verify_window);
      if (k >= -N && k <= N) want = V_lambda0.apply(e);
      else if (k == -N - 1) want = e;
      else want = op_L(e);
      for (std::size_t i = 0; i < got.coeffs.size(); ++i)
        if (std::fabs(got.coeffs[i] - want.coeffs[i]) > 1e-12)
          throw config_error("build_step3_field: three-case formula fails on mode " +
                             std::to_string(k));
    }
  }
  // nonlinear consistency inside [-N, N]
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 4; ++rep) {
    FourierLoop y(verify_window);
    for (int k = -N; k <= N; ++k) {
      auto ys = y.mode(k);
      for (int c = 0; c < d; ++c) ys[c] = gauss(rng);
    }
    FourierLoop got = out.apply(y);
    FourierLoop want = V_lambda0.apply(y);
    for (std::size_t i = 0; i < got.coeffs.size(); ++i)
      if (std::fabs(got.coeffs[i] - want.coeffs[i]) > 1e-12)
        throw config_error("build_step3_field: mismatch with V_lambda0 inside [-N,N]");
  }
  return out;
}

// --- product form --------------------------------------------------------------

// Splitting E = E^{-N,N} ⊕ E_{-N-1} ⊕ rest relative to a storage window.
struct ProductSplit {
  ModeWindow window;
  int N = 0;

  FourierLoop y_part(const FourierLoop& x) const {
    ModeWindow cut{std::max(window.k_min, -N), std::min(window.k_max, N), window.dim};
    return project_window(x, cut);
  }
  FourierLoop z_part(const FourierLoop& x) const {
    FourierLoop out(x.window);
    if (x.window.contains(-N - 1)) {
      auto xs = x.mode(-N - 1);
      auto os = out.mode(-N - 1);
      for (int c = 0; c < x.window.dim; ++c) os[c] = xs[c];
    }
    return out;
  }
  FourierLoop w_part(const FourierLoop& x) const {
    return x - y_part(x) - z_part(x);
  }
};

// T((y,z,w), lambda) = (V_{l0} y, (-1 + 2(lambda - lambda0)) z, L w).
inline AdmissibleField product_field(const AdmissibleField& V_lambda0, int N,
                                     double lambda, double lambda0) {
  AdmissibleField out;
  LoopField V = V_lambda0.apply;
  double zmul = -1.0 + 2.0 * (lambda - lambda0);
  out.apply = [V, N, zmul](const FourierLoop& x) {
    ProductSplit split{x.window, N};
    FourierLoop y = split.y_part(x);
    FourierLoop z = split.z_part(x);
    FourierLoop w = split.w_part(x);
    return V(y) + zmul * z + op_L(w);
  };
  out.label = "product field N=" + std::to_string(N) +
              " zmul=" + std::to_string(zmul);
  return out;
}

// --- step 4: g-deformation evidence --------------------------------------------

struct RayProbe {
  std::string ray;
  double s = 0.0;
  std::vector<double> magnitudes;  // max(|T|, |g_s|) along the geometric ray
  bool grows = false;
};

struct GDeformationReport {
  std::vector<RayProbe> probes;
  bool pass = false;
};

// Along scaling rays in y, z (on and off the z-degenerate lambda) and w, the
// pair (T, g_s) must blow up for every s: bounded values force bounded points.
inline GDeformationReport g_deformation_check(const AdmissibleField& T_field,
                                              const ChiProfile& chi, int N,
                                              const ModeWindow& window, double lambda,
                                              const std::vector<double>& s_grid,
                                              std::uint64_t seed = 17) {
  GDeformationReport rep;
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ProductSplit split{window, N};

  FourierLoop base(window);
  for (double& v : base.coeffs) v = gauss(rng);
  FourierLoop y0 = split.y_part(base);
  FourierLoop z0 = split.z_part(base);
  FourierLoop w0 = split.w_part(base);
  if (h12_norm(z0) == 0.0) {
    z0 = unit_mode_loop(window, -N - 1, 0);
  }

  auto probe_ray = [&](const std::string& name, auto&& point_at, double s) {
    RayProbe p;
    p.ray = name;
    p.s = s;
    double prev = -1.0;
    bool monotone_tail = true;
    for (int e = 0; e <= 8; ++e) {
      double t = std::pow(2.0, e);
      FourierLoop x = point_at(t);
      FourierLoop sx = s * split.y_part(x) + split.z_part(x) + s * split.w_part(x);
      double mag = std::max(h12_norm(T_field.apply(x)),
                            std::fabs(multiplier_g(chi, sx, lambda)));
      p.magnitudes.push_back(mag);
      if (e >= 4 && mag <= prev) monotone_tail = false;
      prev = mag;
    }
    p.grows = monotone_tail && p.magnitudes.back() > 10.0 * p.magnitudes.front() &&
              p.magnitudes.back() > 1.0;
    rep.probes.push_back(std::move(p));
  };

  for (double s : s_grid) {
    probe_ray("y-ray", [&](double t) { return t * y0 + z0 + w0; }, s);
    probe_ray("z-ray", [&](double t) { return y0 + t * z0 + w0; }, s);
    probe_ray("w-ray", [&](double t) { return y0 + z0 + t * w0; }, s);
  }
  rep.pass = !rep.probes.empty();
  for (const auto& p : rep.probes) rep.pass = rep.pass && p.grows;
  return rep;
}

// --- step 5/6 region constructions ----------------------------------------------

// A^{-N-1,N}(r0, R0) x [l0, l0+1]: annulus in the (y,z) block, w = 0 slice.
struct Step5Region {
  int N = 0;
  double r0 = 0.5, R0 = 4.0;
  double lambda0 = 0.0;

  bool contains(const FourierLoop& x, double lambda) const {
    ProductSplit split{x.window, N};
    FourierLoop yz = split.y_part(x) + split.z_part(x);
    double n = h12_norm(yz);
    return n >= r0 && n <= R0 && lambda >= lambda0 && lambda <= lambda0 + 1.0;
  }
};

// B(r) x A_{-N-1}(r', R') x [l0, l0+1]: the product isolating neighborhood.
struct Step6Region {
  int N = 0;
  double r_y = 1.0;
  double r_z_in = 0.5, r_z_out = 2.0;
  double lambda0 = 0.0;

  bool contains(const FourierLoop& x, double lambda) const {
    ProductSplit split{x.window, N};
    double ny = h12_norm(split.y_part(x) + split.w_part(x));
    double nz = h12_norm(split.z_part(x));
    return ny <= r_y && nz >= r_z_in && nz <= r_z_out && lambda >= lambda0 &&
           lambda <= lambda0 + 1.0;
  }
};

}  // namespace arnold
