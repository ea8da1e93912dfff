#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "arnold/homotopy.hpp"
#include "arnold/solver.hpp"

using namespace arnold;

namespace {

const DiagonalQuadratic kOracleQ{{0.2 * kPi, 0.7 * kPi}};

SolverConfig quick_config(std::uint64_t seed = 42, int starts = 60) {
  SolverConfig cfg;
  cfg.starts = starts;
  cfg.newton_tol = 1e-10;
  cfg.max_iter = 60;
  cfg.region = SearchRegion{0.05, 10.0, -0.5};
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("search region validation") {
  SearchRegion ok{0.0, 2.0, -0.5};
  ok.validate();
  SearchRegion bad{2.0, 1.0, -0.5};
  CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("oracle critical points are found with tight residuals") {
  HamiltonianModel m = make_hamiltonian(kOracleQ);
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(4, 4);
  const int M = 33;
  SolveDiagnostics diag;
  auto points = find_critical_points(m, chi, w, quick_config(), M, &diag);
  REQUIRE(points.size() >= 2);
  std::vector<double> lambdas;
  for (const auto& p : points) {
    // solver soundness: residual re-evaluated from scratch
    double res = action_gradient(m, chi, {p.point.x, p.point.lambda}, M).norm();
    CHECK(res < 1e-9);
    CHECK(res == doctest::Approx(p.residual).epsilon(1e-6));
    CHECK(l2_norm(p.point.x) == doctest::Approx(1.0).epsilon(1e-8));
    lambdas.push_back(p.point.lambda);
  }
  std::sort(lambdas.begin(), lambdas.end());
  CHECK(std::fabs(lambdas.front() - (-0.3)) < 1e-8);
  CHECK(std::fabs(lambdas.back() - 0.2) < 1e-8);
  CHECK(diag.converged > 0);
}

TEST_CASE("free Hamiltonian: all families sit at lambda = 0") {
  HamiltonianModel zero = make_hamiltonian(DiagonalQuadratic{{0.0, 0.0}});
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(3, 4);
  auto points = find_critical_points(zero, chi, w, quick_config(7, 40), 4 * w.span() + 1);
  REQUIRE(!points.empty());
  for (const auto& p : points) CHECK(std::fabs(p.point.lambda) < 1e-8);
}

TEST_CASE("clustering merges gauge orbits and separates distinct lambdas") {
  HamiltonianModel m = make_hamiltonian(kOracleQ);
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(4, 4);
  const int M = 33;

  auto fams = oracle_families(kOracleQ, -0.5);
  FourierLoop x0 = oracle_loop(fams[0], w);
  SolvedPoint a{{x0, fams[0].lambda}, 1e-12};
  SolvedPoint b{{s1_rotate(x0, 0.37), fams[0].lambda}, 1e-12};
  SolvedPoint c{{oracle_loop(fams[1], w), fams[1].lambda}, 1e-12};

  auto clusters = cluster_families({a, b, c});
  CHECK(clusters.size() == 2);
  int total = 0;
  for (const auto& f : clusters) total += f.multiplicity_hint;
  CHECK(total == 3);

  CHECK(cluster_families({}).empty());

  // gauge invariance: rotating every input point leaves the count unchanged
  auto rng = make_rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<SolvedPoint> rotated;
  for (const auto& p : {a, b, c})
    rotated.push_back(SolvedPoint{{s1_rotate(p.point.x, unif(rng)), p.point.lambda}, p.residual});
  CHECK(cluster_families(rotated).size() == 2);
  (void)m;
  (void)chi;
  (void)M;
}

TEST_CASE("arnold count passes the n+1 gate on the oracle") {
  HamiltonianModel m = make_hamiltonian(kOracleQ);
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(4, 4);
  CountReport rep = arnold_count(m, chi, w, quick_config(), 33);
  CHECK(rep.count == 2);
  CHECK(rep.expected_minimum == 2);
  CHECK(rep.pass);
  CHECK(rep.warnings.empty());
  CHECK(rep.families[0].lambda == doctest::Approx(-0.3).epsilon(1e-8));
  CHECK(rep.families[1].lambda == doctest::Approx(0.2).epsilon(1e-8));
  // fingerprints carry the plane masses: family 0 lives in plane 1
  CHECK(rep.families[0].fingerprint[2] > 0.9);  // mass of plane 1
  CHECK(rep.families[1].fingerprint[1] > 0.9);  // mass of plane 0
}

TEST_CASE("degenerate free Hamiltonian reports a fingerprint lower bound") {
  HamiltonianModel zero = make_hamiltonian(DiagonalQuadratic{{0.0, 0.0}});
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(2, 4);
  CountReport rep = arnold_count(zero, chi, w, quick_config(3, 80), 4 * w.span() + 1);
  CHECK(rep.count >= 2);
  CHECK(rep.pass);
  REQUIRE(!rep.warnings.empty());
  CHECK(rep.warnings[0].find("degenerate") != std::string::npos);
}

TEST_CASE("oracle family lambdas are stable under window growth") {
  HamiltonianModel m = make_hamiltonian(kOracleQ);
  ChiProfile chi = make_chi(-0.5, 0.1);
  CountReport small = arnold_count(m, chi, symmetric_window(4, 4), quick_config(), 33);
  CountReport large = arnold_count(m, chi, symmetric_window(6, 4), quick_config(), 49);
  REQUIRE(small.count == 2);
  REQUIRE(large.count == 2);
  for (int i = 0; i < 2; ++i)
    CHECK(std::fabs(small.families[i].lambda - large.families[i].lambda) < 1e-6);
}

TEST_CASE("signed zero count: identity and diagonal linear fields") {
  ModeWindow w = make_window(0, 0, 4);
  SearchRegion ball{0.0, 2.0, -0.5};
  DegreeConfig cfg;
  cfg.starts = 16;

  LoopField identity = [](const FourierLoop& x) { return x; };
  DegreeReport rep = euler_char_signed_zeros(identity, w, ball, cfg);
  CHECK(rep.degree == 1);
  CHECK(rep.zeros.size() == 1);
  CHECK_FALSE(rep.sweep_warning);

  LoopField diag = [](const FourierLoop& x) {
    FourierLoop out = x;
    out.coeffs[1] = -x.coeffs[1];
    out.coeffs[2] = -x.coeffs[2];
    out.coeffs[3] = -x.coeffs[3];
    return out;
  };
  DegreeReport rep2 = euler_char_signed_zeros(diag, w, ball, cfg);
  CHECK(rep2.degree == -1);  // (-1)^{#negative} with three negative entries
}

TEST_CASE("signed zero count of the twisted field is the diagonal sign product") {
  HamiltonianModel zero = make_hamiltonian(DiagonalQuadratic{{0.0, 0.0}});
  HamiltonianModel m = make_hamiltonian(kOracleQ);
  const double l0 = -0.5;
  for (int K : {2, 3}) {
    ModeWindow w = symmetric_window(K, 4);
    const int M = nonlinear_sampling_floor(w);
    SearchRegion ball{0.0, 1.5, l0};
    DegreeConfig cfg;
    cfg.starts = 24;
    for (const HamiltonianModel* model : {&zero, &m}) {
      LoopField f = [model, l0, M](const FourierLoop& x) {
        return field_F_lambda(*model, x, l0, M);
      };
      DegreeReport rep = euler_char_signed_zeros(f, w, ball, cfg);
      CHECK(rep.degree % 2 != 0);  // odd field: odd degree on a ball

      // independent diagonal sign product over modes and planes
      DiagonalQuadratic q = (model == &zero) ? DiagonalQuadratic{{0.0, 0.0}} : kOracleQ;
      int expect = 1;
      for (int k = -K; k <= K; ++k)
        for (int j = 0; j < 2; ++j) {
          double mult = (k == 0) ? (kTwoPi * l0 - 2.0 * q.a[j])
                                 : ((k > 0 ? 1.0 : -1.0) + (l0 - q.a[j] / kPi) / std::abs(k));
          int s = mult > 0 ? 1 : -1;
          expect *= s * s;  // two real coordinates per plane
        }
      CHECK(rep.degree == expect);
      CHECK(rep.zeros.size() == 1);  // only zero is the origin
    }
  }
}

TEST_CASE("non-odd and degenerate fields are rejected") {
  ModeWindow w = make_window(0, 0, 4);
  SearchRegion ball{0.0, 2.0, -0.5};
  LoopField affine = [](const FourierLoop& x) {
    FourierLoop out = x;
    out.coeffs[0] += 1.0;
    return out;
  };
  CHECK_THROWS_AS(euler_char_signed_zeros(affine, w, ball), config_error);

  LoopField cubic = [](const FourierLoop& x) {
    FourierLoop out = x;
    for (double& v : out.coeffs) v = v * v * v;
    return out;
  };
  CHECK_THROWS_AS(euler_char_signed_zeros(cubic, w, ball), config_error);
}

TEST_CASE("flow line from the origin slice exits: g(0, lambda) = -pi") {
  HamiltonianModel zero = make_hamiltonian(DiagonalQuadratic{{0.0, 0.0}});
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(2, 4);
  FlowField flow = make_gradient_flow(zero, chi);
  SearchRegion ball{0.0, 3.0, -0.5};
  ProbeBudget budget;
  budget.t_max = 10.0;
  TrajectoryResult tr = probe_trajectory(flow, chi, w, {FourierLoop(w), 0.0}, ball, +1, budget);
  CHECK(tr.exited);
  CHECK(tr.t_exit == doctest::Approx(0.5 / kPi).epsilon(0.05));
}

TEST_CASE("boundary samples of an oracle region exit in finite time") {
  HamiltonianModel m = make_hamiltonian(kOracleQ);
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(2, 4);
  FlowField flow = make_gradient_flow(m, chi);
  SearchRegion region{0.05, 6.0, -0.5};
  ProbeBudget budget;
  budget.samples = 24;
  budget.t_max = 20.0;
  budget.seed = 9;
  ProbeReport rep = boundedness_probe(flow, chi, w, region, budget);
  CHECK(rep.samples == 24);
  CHECK(rep.exits_either == rep.samples);
  CHECK(rep.non_exiting.empty());
}

TEST_CASE("lambda slab without critical points flushes every sample") {
  // plateau sub-slab of the free field away from lambda = 0: nothing invariant
  HamiltonianModel zero = make_hamiltonian(DiagonalQuadratic{{0.0, 0.0}});
  ChiProfile chi = make_chi(-0.5, 0.1);
  ModeWindow w = symmetric_window(2, 4);
  FlowField flow = make_gradient_flow(zero, chi);
  SearchRegion region{2.5, 6.0, -0.5};  // annulus excludes the unit-norm circles
  ProbeBudget budget;
  budget.samples = 16;
  budget.t_max = 20.0;
  budget.seed = 13;
  ProbeReport rep = boundedness_probe(flow, chi, w, region, budget);
  CHECK(rep.exits_either == rep.samples);
}
