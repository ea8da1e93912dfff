#pragma once

// Finite computational model of relative cup-length: graded rings and modules
// with explicit multiplication tables over Q, the cup-length of a module over
// the positive-degree part of the ring, Kuenneth-style tensor products, the
// Morse-decomposition gate count >= cup-length, and suspension bookkeeping for
// window growth.
//
// The cup-length of the module M over the ring R is
//   0                     if M = 0,
//   1 + max{ j : some product of j positive-degree basis elements acts
//            nontrivially on M },
// computed by exhausting basis products; linear spans only deduplicate, the
// search is exact over Q.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "arnold/common.hpp"
#include "arnold/json_io.hpp"

namespace arnold {

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw config_error("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }
  bool is_zero() const { return num == 0; }
  friend Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend Rational operator/(Rational a, Rational b) {
    return Rational(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

using SparseVec = std::vector<std::pair<int, Rational>>;  // (index, coeff), sorted

namespace detail {

inline void sparse_add(SparseVec& acc, int idx, Rational c) {
  if (c.is_zero()) return;
  for (auto& [i, v] : acc)
    if (i == idx) {
      v = v + c;
      return;
    }
  acc.emplace_back(idx, c);
}

inline void sparse_cleanup(SparseVec& v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](const auto& p) { return p.second.is_zero(); }),
          v.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

}  // namespace detail

struct BasisElement {
  std::string name;
  int degree = 0;
};

struct GradedRing {
  std::vector<BasisElement> basis;
  int unit = 0;  // index of the multiplicative unit
  // products[i][j]: expansion of basis[i] * basis[j]
  std::vector<std::vector<SparseVec>> products;

  int rank() const { return static_cast<int>(basis.size()); }

  SparseVec multiply(const SparseVec& a, const SparseVec& b) const {
    SparseVec out;
    for (const auto& [i, ci] : a)
      for (const auto& [j, cj] : b)
        for (const auto& [k, ck] : products[i][j]) detail::sparse_add(out, k, ci * cj * ck);
    detail::sparse_cleanup(out);
    return out;
  }

  void validate() const {
    if (basis.empty()) throw config_error("GradedRing: empty basis");
    if (unit < 0 || unit >= rank() || basis[unit].degree != 0)
      throw config_error("GradedRing: unit must be a degree-0 basis element");
    const int n = rank();
    if (static_cast<int>(products.size()) != n)
      throw config_error("GradedRing: product table size mismatch");
    for (const auto& row : products)
      if (static_cast<int>(row.size()) != n)
        throw config_error("GradedRing: product table row mismatch");
    // degrees additive, unit acts as identity
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (const auto& [k, c] : products[i][j]) {
          if (c.is_zero()) continue;
          if (basis[k].degree != basis[i].degree + basis[j].degree)
            throw config_error("GradedRing: product not degree-additive at (" +
                               basis[i].name + ", " + basis[j].name + ")");
        }
      }
      SparseVec ui = products[unit][i];
      detail::sparse_cleanup(ui);
      if (!(ui.size() == 1 && ui[0].first == i && ui[0].second == Rational(1)))
        throw config_error("GradedRing: unit is not a left identity on " + basis[i].name);
      SparseVec iu = products[i][unit];
      detail::sparse_cleanup(iu);
      if (!(iu.size() == 1 && iu[0].first == i && iu[0].second == Rational(1)))
        throw config_error("GradedRing: unit is not a right identity on " + basis[i].name);
    }
    // graded commutativity and associativity, exhaustively on the basis
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        SparseVec ij = products[i][j];
        SparseVec ji = products[j][i];
        detail::sparse_cleanup(ij);
        detail::sparse_cleanup(ji);
        long long sign = (basis[i].degree * basis[j].degree) % 2 == 0 ? 1 : -1;
        SparseVec ji_signed = ji;
        for (auto& [k, c] : ji_signed) c = c * Rational(sign);
        if (!(ij == ji_signed))
          throw config_error("GradedRing: graded commutativity fails at (" + basis[i].name +
                             ", " + basis[j].name + ")");
        for (int k = 0; k < n; ++k) {
          SparseVec left = multiply(products[i][j], {{k, Rational(1)}});
          SparseVec right = multiply({{i, Rational(1)}}, products[j][k]);
          if (!(left == right))
            throw config_error("GradedRing: associativity fails at (" + basis[i].name + ", " +
                               basis[j].name + ", " + basis[k].name + ")");
        }
      }
  }
};

struct GradedModule {
  std::vector<BasisElement> basis;
  // action[i][alpha]: expansion of ring basis[i] acting on module basis[alpha]
  std::vector<std::vector<SparseVec>> action;

  int rank() const { return static_cast<int>(basis.size()); }

  SparseVec act(int ring_idx, const SparseVec& v) const {
    SparseVec out;
    for (const auto& [a, ca] : v)
      for (const auto& [b, cb] : action[ring_idx][a]) detail::sparse_add(out, b, ca * cb);
    detail::sparse_cleanup(out);
    return out;
  }

  void validate(const GradedRing& ring) const {
    if (static_cast<int>(action.size()) != ring.rank())
      throw config_error("GradedModule: action table must have one row per ring basis element");
    for (const auto& row : action)
      if (static_cast<int>(row.size()) != rank())
        throw config_error("GradedModule: action row size mismatch");
    for (int i = 0; i < ring.rank(); ++i)
      for (int a = 0; a < rank(); ++a)
        for (const auto& [b, c] : action[i][a]) {
          if (c.is_zero()) continue;
          if (basis[b].degree != ring.basis[i].degree + basis[a].degree)
            throw config_error("GradedModule: action not degree-additive");
        }
    for (int a = 0; a < rank(); ++a) {
      SparseVec ua = action[ring.unit][a];
      detail::sparse_cleanup(ua);
      if (!(ua.size() == 1 && ua[0].first == a && ua[0].second == Rational(1)))
        throw config_error("GradedModule: unit does not act as identity on " + basis[a].name);
    }
    // compatibility with the ring product on all pairs
    for (int i = 0; i < ring.rank(); ++i)
      for (int j = 0; j < ring.rank(); ++j)
        for (int a = 0; a < rank(); ++a) {
          SparseVec via_product;
          for (const auto& [k, ck] : ring.products[i][j])
            for (const auto& [b, cb] : action[k][a])
              detail::sparse_add(via_product, b, ck * cb);
          detail::sparse_cleanup(via_product);
          SparseVec stepwise = act(i, act(j, {{a, Rational(1)}}));
          if (!(via_product == stepwise))
            throw config_error("GradedModule: action incompatible with ring product");
        }
  }
};

// --- exact rank over Q -------------------------------------------------------

namespace detail {

// maintains a reduced row basis; returns true if v enlarged the span
inline bool reduce_into(std::vector<std::vector<Rational>>& rows, std::vector<Rational> v) {
  const std::size_t n = v.size();
  for (const auto& r : rows) {
    std::size_t p = 0;
    while (p < n && r[p].is_zero()) ++p;
    if (p == n) continue;
    if (!v[p].is_zero()) {
      Rational f = v[p] / r[p];
      for (std::size_t c = p; c < n; ++c) v[c] = v[c] - f * r[c];
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (!v[p].is_zero()) {
      rows.push_back(std::move(v));
      return true;
    }
  return false;
}

inline std::vector<Rational> densify(const SparseVec& v, int n) {
  std::vector<Rational> out(n);
  for (const auto& [i, c] : v) out[i] = c;
  return out;
}

}  // namespace detail

// The relative cup-length of the module over the ring, by exhaustive products
// of positive-degree basis elements. An action-through map can be supplied to
// model a ring homomorphism R -> R' (entries: image of each R basis element in
// the ring that genuinely acts); by default the identity is used.
inline int relative_cuplength(const GradedRing& ring, const GradedModule& module) {
  if (module.rank() == 0) return 0;
  std::vector<int> positive;
  for (int i = 0; i < ring.rank(); ++i)
    if (ring.basis[i].degree > 0) positive.push_back(i);

  std::vector<SparseVec> frontier;
  for (int a = 0; a < module.rank(); ++a) frontier.push_back({{a, Rational(1)}});
  int chain = 0;
  const int max_chain = module.rank() + 1;
  while (chain < max_chain) {
    std::vector<SparseVec> next;
    std::vector<std::vector<Rational>> span;
    for (int i : positive)
      for (const auto& v : frontier) {
        SparseVec w = module.act(i, v);
        if (w.empty()) continue;
        if (detail::reduce_into(span, detail::densify(w, module.rank()))) next.push_back(w);
      }
    if (next.empty()) break;
    frontier = std::move(next);
    ++chain;
  }
  return chain + 1;
}

// Single-class variant: only powers of one positive-degree basis element are
// multiplied. Coincides with the general definition on truncated polynomial
// fixtures; exposed for cross-checking.
inline int single_class_cuplength(const GradedRing& ring, const GradedModule& module) {
  if (module.rank() == 0) return 0;
  int best = 0;
  for (int i = 0; i < ring.rank(); ++i) {
    if (ring.basis[i].degree <= 0) continue;
    int chain = 0;
    std::vector<SparseVec> frontier;
    for (int a = 0; a < module.rank(); ++a) frontier.push_back({{a, Rational(1)}});
    while (chain <= module.rank()) {
      std::vector<SparseVec> next;
      for (const auto& v : frontier) {
        SparseVec w = module.act(i, v);
        if (!w.empty()) next.push_back(w);
      }
      if (next.empty()) break;
      frontier = std::move(next);
      ++chain;
    }
    best = std::max(best, chain);
  }
  return best + 1;
}

// --- built-in fixtures ----------------------------------------------------------

// H^*(CP^m): truncated polynomial ring on one degree-2 generator.
inline GradedRing cp_ring(int m) {
  if (m < 0) throw config_error("cp_ring: m must be >= 0");
  GradedRing r;
  for (int i = 0; i <= m; ++i)
    r.basis.push_back(BasisElement{i == 0 ? "1" : "u^" + std::to_string(i), 2 * i});
  r.unit = 0;
  r.products.assign(m + 1, std::vector<SparseVec>(m + 1));
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      if (i + j <= m) r.products[i][j] = {{i + j, Rational(1)}};
  return r;
}

// Free rank-one module over cp_ring(m), generator shifted to degree `shift`.
// shift = 1 models the quotient index pair whose total space is the smash
// with a circle; the cup-length comes out m+1.
inline GradedModule cp_shifted_module(int m, int shift = 1) {
  GradedModule mod;
  for (int i = 0; i <= m; ++i)
    mod.basis.push_back(
        BasisElement{"s" + std::to_string(shift) + "_u^" + std::to_string(i), shift + 2 * i});
  mod.action.assign(m + 1, std::vector<SparseVec>(m + 1));
  for (int i = 0; i <= m; ++i)
    for (int a = 0; a <= m; ++a)
      if (i + a <= m) mod.action[i][a] = {{i + a, Rational(1)}};
  return mod;
}

// Scalars acting on a single generator: the sphere-spectrum factor, cup-length 1.
inline GradedRing scalar_ring() { return cp_ring(0); }

inline GradedModule point_module(int degree = 0) {
  GradedModule mod;
  mod.basis.push_back(BasisElement{"pt", degree});
  mod.action.assign(1, std::vector<SparseVec>(1));
  mod.action[0][0] = {{0, Rational(1)}};
  return mod;
}

inline GradedModule zero_module(const GradedRing& ring) {
  GradedModule mod;
  mod.action.assign(ring.rank(), std::vector<SparseVec>());
  return mod;
}

struct IndexPairFixture {
  std::string label;
  GradedRing ring;
  GradedModule module;
  int expected_cuplength = 0;
};

// The explicit quotient index pair of the C0-small case: base CP^n, total
// module the degree-shifted free module; cup-length n+1.
inline IndexPairFixture small_case_fixture(int n) {
  IndexPairFixture f;
  f.label = "cp" + std::to_string(n) + "_smash_circle";
  f.ring = cp_ring(n);
  f.module = cp_shifted_module(n, 1);
  f.expected_cuplength = n + 1;
  return f;
}

// --- tensor products --------------------------------------------------------------

// Kuenneth tensor of two rings with Koszul signs.
inline GradedRing tensor_ring(const GradedRing& A, const GradedRing& B) {
  GradedRing r;
  const int nb = B.rank();
  auto idx = [nb](int i, int j) { return i * nb + j; };
  for (int i = 0; i < A.rank(); ++i)
    for (int j = 0; j < B.rank(); ++j)
      r.basis.push_back(BasisElement{A.basis[i].name + "(x)" + B.basis[j].name,
                                     A.basis[i].degree + B.basis[j].degree});
  r.unit = idx(A.unit, B.unit);
  const int n = r.rank();
  r.products.assign(n, std::vector<SparseVec>(n));
  for (int i1 = 0; i1 < A.rank(); ++i1)
    for (int j1 = 0; j1 < B.rank(); ++j1)
      for (int i2 = 0; i2 < A.rank(); ++i2)
        for (int j2 = 0; j2 < B.rank(); ++j2) {
          // (a1 x b1)(a2 x b2) = (-1)^{|b1||a2|} a1 a2 x b1 b2
          long long sign = (B.basis[j1].degree * A.basis[i2].degree) % 2 == 0 ? 1 : -1;
          SparseVec out;
          for (const auto& [ka, ca] : A.products[i1][i2])
            for (const auto& [kb, cb] : B.products[j1][j2])
              detail::sparse_add(out, idx(ka, kb), ca * cb * Rational(sign));
          detail::sparse_cleanup(out);
          r.products[idx(i1, j1)][idx(i2, j2)] = std::move(out);
        }
  return r;
}

inline GradedModule tensor_module(const GradedRing& A, const GradedModule& MA,
                                  const GradedRing& B, const GradedModule& MB) {
  GradedModule m;
  const int mb = MB.rank();
  auto midx = [mb](int a, int b) { return a * mb + b; };
  for (int a = 0; a < MA.rank(); ++a)
    for (int b = 0; b < MB.rank(); ++b)
      m.basis.push_back(BasisElement{MA.basis[a].name + "(x)" + MB.basis[b].name,
                                     MA.basis[a].degree + MB.basis[b].degree});
  const int ring_rank = A.rank() * B.rank();
  m.action.assign(ring_rank, std::vector<SparseVec>(m.rank()));
  const int nb = B.rank();
  for (int i = 0; i < A.rank(); ++i)
    for (int j = 0; j < B.rank(); ++j)
      for (int a = 0; a < MA.rank(); ++a)
        for (int b = 0; b < MB.rank(); ++b) {
          // (a_i x b_j).(m_a x m_b) = (-1)^{|b_j||m_a|} (a_i m_a) x (b_j m_b)
          long long sign = (B.basis[j].degree * MA.basis[a].degree) % 2 == 0 ? 1 : -1;
          SparseVec out;
          for (const auto& [pa, ca] : MA.action[i][a])
            for (const auto& [pb, cb] : MB.action[j][b])
              detail::sparse_add(out, midx(pa, pb), ca * cb * Rational(sign));
          detail::sparse_cleanup(out);
          m.action[i * nb + j][midx(a, b)] = std::move(out);
        }
  return m;
}

// Cup-length of the tensor product pair, computed from scratch on the product
// tables. Matches the product of the factor cup-lengths whenever one factor
// has cup-length at most 1 (the regime the product formula is used in).
inline int product_cuplength(const GradedRing& A, const GradedModule& MA,
                             const GradedRing& B, const GradedModule& MB) {
  GradedRing R = tensor_ring(A, B);
  GradedModule M = tensor_module(A, MA, B, MB);
  return relative_cuplength(R, M);
}

// --- ring maps ---------------------------------------------------------------------

// Action of R through a homomorphism into R' (entries: image of each R basis
// element). Used for the monotonicity checks.
inline int cuplength_through_map(const GradedRing& R, const std::vector<SparseVec>& image,
                                 const GradedRing& Rp, const GradedModule& module) {
  if (static_cast<int>(image.size()) != R.rank())
    throw config_error("cuplength_through_map: one image per ring basis element required");
  for (const auto& img : image)
    for (const auto& [ip, c] : img)
      if (!c.is_zero() && (ip < 0 || ip >= Rp.rank()))
        throw config_error("cuplength_through_map: image index outside the target ring basis");
  if (module.rank() == 0) return 0;
  std::vector<int> positive;
  for (int i = 0; i < R.rank(); ++i)
    if (R.basis[i].degree > 0) positive.push_back(i);

  auto act_through = [&](int i, const SparseVec& v) {
    SparseVec out;
    for (const auto& [ip, cip] : image[i])
      for (const auto& [a, ca] : v)
        for (const auto& [b, cb] : module.action[ip][a])
          detail::sparse_add(out, b, cip * ca * cb);
    detail::sparse_cleanup(out);
    return out;
  };

  std::vector<SparseVec> frontier;
  for (int a = 0; a < module.rank(); ++a) frontier.push_back({{a, Rational(1)}});
  int chain = 0;
  while (chain <= module.rank()) {
    std::vector<SparseVec> next;
    std::vector<std::vector<Rational>> span;
    for (int i : positive)
      for (const auto& v : frontier) {
        SparseVec w = act_through(i, v);
        if (w.empty()) continue;
        if (detail::reduce_into(span, detail::densify(w, module.rank()))) next.push_back(w);
      }
    if (next.empty()) break;
    frontier = std::move(next);
    ++chain;
  }
  return chain + 1;
}

// --- gates and bookkeeping -----------------------------------------------------------

// Theorem-style gate: a Morse decomposition of size k forces k >= cuplength.
inline bool morse_lower_bound_check(int cuplength, int decomposition_size) {
  if (cuplength < 0 || decomposition_size < 0)
    throw config_error("morse_lower_bound_check: arguments must be nonnegative");
  return decomposition_size >= cuplength;
}

struct SuspensionReport {
  int l = 0, l_prime = 0;
  int dim = 0;             // ambient dimension 2n+2
  int suspension_dim = 0;  // (2n+2) * (l' - l)
  bool identity = false;   // l == l'
};

// Window growth [-l,l] -> [-l',l'] suspends the index by (2n+2)(l'-l) without
// changing the cup-length; this records the bookkeeping for paired runs.
inline SuspensionReport suspension_bookkeeping(int l, int l_prime, int dim,
                                               int dim_check = -1) {
  if (dim_check >= 0 && dim_check != dim)
    throw config_error("suspension_bookkeeping: paired windows have different ambient dimension");
  if (l < 0 || l_prime < l)
    throw config_error("suspension_bookkeeping: need 0 <= l <= l'");
  SuspensionReport rep;
  rep.l = l;
  rep.l_prime = l_prime;
  rep.dim = dim;
  rep.suspension_dim = dim * (l_prime - l);
  rep.identity = (l == l_prime);
  return rep;
}

// --- fixture files --------------------------------------------------------------------

namespace detail {

inline SparseVec sparse_from_json(const ordered_json& j) {
  SparseVec v;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 3)
      throw config_error("fixture: coefficient entries must be [index, num, den]");
    sparse_add(v, entry[0].get<int>(),
               Rational(entry[1].get<long long>(), entry[2].get<long long>()));
  }
  sparse_cleanup(v);
  return v;
}

inline std::vector<BasisElement> basis_from_json(const ordered_json& j) {
  std::vector<BasisElement> basis;
  for (const auto& b : j) {
    for (auto it = b.begin(); it != b.end(); ++it)
      if (it.key() != "name" && it.key() != "degree")
        throw config_error("fixture basis: unknown field '" + it.key() + "'");
    basis.push_back(BasisElement{b.at("name").get<std::string>(), b.at("degree").get<int>()});
  }
  return basis;
}

}  // namespace detail

// {ring: {basis, unit, products: [[i,j,coeffs]]},
//  module: {basis, action: [[i,alpha,coeffs]]}}; validated on load.
inline IndexPairFixture fixture_from_json(const ordered_json& j) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "label" && it.key() != "ring" && it.key() != "module" &&
        it.key() != "expected_cuplength" && it.key() != "schema_version")
      throw config_error("fixture: unknown field '" + it.key() + "'");
  IndexPairFixture f;
  f.label = j.value("label", std::string("fixture"));
  const auto& rj = j.at("ring");
  for (auto it = rj.begin(); it != rj.end(); ++it)
    if (it.key() != "basis" && it.key() != "unit" && it.key() != "products")
      throw config_error("fixture ring: unknown field '" + it.key() + "'");
  f.ring.basis = detail::basis_from_json(rj.at("basis"));
  f.ring.unit = rj.value("unit", 0);
  f.ring.products.assign(f.ring.rank(), std::vector<SparseVec>(f.ring.rank()));
  for (const auto& p : rj.at("products")) {
    if (!p.is_array() || p.size() != 3)
      throw config_error("fixture ring: products entries must be [i, j, coeffs]");
    f.ring.products[p[0].get<int>()][p[1].get<int>()] = detail::sparse_from_json(p[2]);
  }
  const auto& mj = j.at("module");
  for (auto it = mj.begin(); it != mj.end(); ++it)
    if (it.key() != "basis" && it.key() != "action")
      throw config_error("fixture module: unknown field '" + it.key() + "'");
  f.module.basis = detail::basis_from_json(mj.at("basis"));
  f.module.action.assign(f.ring.rank(), std::vector<SparseVec>(f.module.rank()));
  for (const auto& a : mj.at("action")) {
    if (!a.is_array() || a.size() != 3)
      throw config_error("fixture module: action entries must be [i, alpha, coeffs]");
    f.module.action[a[0].get<int>()][a[1].get<int>()] = detail::sparse_from_json(a[2]);
  }
  f.expected_cuplength = j.value("expected_cuplength", -1);
  f.ring.validate();
  f.module.validate(f.ring);
  return f;
}

inline ordered_json fixture_to_json(const IndexPairFixture& f) {
  ordered_json j;
  j["schema_version"] = 1;
  j["label"] = f.label;
  ordered_json rj;
  rj["basis"] = ordered_json::array();
  for (const auto& b : f.ring.basis) rj["basis"].push_back({{"name", b.name}, {"degree", b.degree}});
  rj["unit"] = f.ring.unit;
  rj["products"] = ordered_json::array();
  for (int i = 0; i < f.ring.rank(); ++i)
    for (int k = 0; k < f.ring.rank(); ++k) {
      if (f.ring.products[i][k].empty()) continue;
      ordered_json coeffs = ordered_json::array();
      for (const auto& [t, c] : f.ring.products[i][k]) coeffs.push_back({t, c.num, c.den});
      rj["products"].push_back({i, k, coeffs});
    }
  j["ring"] = rj;
  ordered_json mj;
  mj["basis"] = ordered_json::array();
  for (const auto& b : f.module.basis) mj["basis"].push_back({{"name", b.name}, {"degree", b.degree}});
  mj["action"] = ordered_json::array();
  for (int i = 0; i < f.ring.rank(); ++i)
    for (int a = 0; a < f.module.rank(); ++a) {
      if (f.module.action[i][a].empty()) continue;
      ordered_json coeffs = ordered_json::array();
      for (const auto& [b, c] : f.module.action[i][a]) coeffs.push_back({b, c.num, c.den});
      mj["action"].push_back({i, a, coeffs});
    }
  j["module"] = mj;
  j["expected_cuplength"] = f.expected_cuplength;
  return j;
}

}  // namespace arnold
