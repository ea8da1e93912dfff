#pragma once

// Batch front door. Subcommand logic lives here so integration tests can call
// the commands in-process; tools/arnold.cpp only parses flags.
//
// Exit codes: 0 gate passed with no warnings, 1 passed with warnings, 2 gate
// failed, 3 configuration or schema error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arnold/reports.hpp"

namespace arnold::cli {

namespace fs = std::filesystem;

struct RunConfig {
  std::string label;
  ordered_json hamiltonian_json;
  HamiltonianModel model;
  int n = 0;
  int window = 4;
  int samples = 33;
  double lambda0 = -0.5;
  std::optional<double> eps;
  SolverConfig solver;
  int hom_N = -1;  // -1: detect from the positivity margin
  double tau = 1e-3;
  double tau_c0small = 0.04;
  int s_points = 21;
  std::string out_dir = "out";
};

namespace detail {

inline void reject_unknown(const ordered_json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) { ok = true; break; }
    if (!ok) throw config_error(where + ": unknown field '" + it.key() + "'");
  }
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline RunConfig load_run_config(const std::string& path) {
  ordered_json j = parse_json_file(path);
  detail::reject_unknown(j,
                         {"schema_version", "label", "hamiltonian", "n", "window", "samples",
                          "lambda0", "eps", "solver", "homotopy", "out"},
                         "run config");
  RunConfig cfg;
  cfg.label = j.value("label", std::string());
  if (!j.contains("hamiltonian")) throw config_error("run config: missing 'hamiltonian' path");
  fs::path base = fs::path(path).parent_path();
  fs::path hpath = base / j["hamiltonian"].get<std::string>();
  cfg.hamiltonian_json = parse_json_file(hpath.string());
  cfg.model = hamiltonian_from_json(cfg.hamiltonian_json);
  if (!j.contains("n")) throw config_error("run config: missing 'n'");
  cfg.n = j["n"].get<int>();
  if (cfg.n != cfg.model.n)
    throw config_error("run config: n=" + std::to_string(cfg.n) +
                       " does not match the Hamiltonian (n=" + std::to_string(cfg.model.n) + ")");
  cfg.window = j.value("window", 4);
  if (cfg.window < 1 || cfg.window > 64)
    throw config_error("run config: window must be in [1, 64]");
  cfg.samples = j.value("samples", 8 * cfg.window + 1);
  cfg.lambda0 = j.value("lambda0", -0.5);
  if (j.contains("eps")) {
    double e = j["eps"].get<double>();
    if (!(e > 0.0 && e < 0.5)) throw config_error("run config: eps must lie in (0, 1/2)");
    cfg.eps = e;
  }
  if (!j.contains("solver") || !j["solver"].contains("seed"))
    throw config_error("run config: solver.seed is mandatory");
  const auto& sj = j["solver"];
  detail::reject_unknown(sj, {"starts", "newton_tol", "max_iter", "seed", "r0", "R0"},
                         "run config solver");
  cfg.solver.starts = sj.value("starts", 100);
  cfg.solver.newton_tol = sj.value("newton_tol", 1e-10);
  cfg.solver.max_iter = sj.value("max_iter", 60);
  cfg.solver.seed = sj["seed"].get<std::uint64_t>();
  cfg.solver.region.r0 = sj.value("r0", 0.05);
  cfg.solver.region.R0 = sj.value("R0", 10.0);
  cfg.solver.region.lambda0 = cfg.lambda0;
  cfg.solver.region.validate();
  if (j.contains("homotopy")) {
    const auto& hj = j["homotopy"];
    detail::reject_unknown(hj, {"N", "tau", "tau_c0small", "s_points"}, "run config homotopy");
    cfg.hom_N = hj.value("N", -1);
    cfg.tau = hj.value("tau", 1e-3);
    cfg.tau_c0small = hj.value("tau_c0small", 0.04);
    cfg.s_points = hj.value("s_points", 21);
    if (cfg.s_points < 2) throw config_error("run config: homotopy.s_points must be >= 2");
  }
  cfg.out_dir = j.value("out", std::string("out"));
  int floor = 8 * cfg.window + 1;
  if (cfg.samples < floor)
    throw config_error("run config: samples below the nonlinear floor " + std::to_string(floor));
  return cfg;
}

struct SolveOptions {
  std::string config_path;
  std::string out_dir;  // empty: use config
  std::optional<std::uint64_t> seed_override;
  std::optional<int> window_override;
  std::optional<int> samples_override;
};

namespace detail {

inline void apply_overrides(RunConfig& cfg, const std::optional<std::uint64_t>& seed,
                            const std::optional<int>& window, const std::optional<int>& samples,
                            const std::string& out_dir) {
  if (seed) cfg.solver.seed = *seed;
  if (window) {
    cfg.window = *window;
    if (cfg.window < 1 || cfg.window > 64) throw config_error("window override out of range");
    if (!samples) cfg.samples = 8 * cfg.window + 1;
  }
  if (samples) cfg.samples = *samples;
  if (cfg.samples < 8 * cfg.window + 1)
    throw config_error("samples below the nonlinear floor for the window");
  if (!out_dir.empty()) cfg.out_dir = out_dir;
}

// infimum certificates at the slab endpoints; also drives the automatic eps
inline std::vector<InfimumCertificateRecord> endpoint_certificates(const RunConfig& cfg,
                                                                   const ModeWindow& w) {
  InfimumBudget budget;
  budget.random_starts = 24;
  budget.descent_iters = 50;
  std::vector<InfimumCertificateRecord> certs;
  int i = 0;
  for (double lambda : {cfg.lambda0, cfg.lambda0 + 1.0}) {
    InfimumCertificateRecord rec;
    rec.lambda = lambda;
    rec.budget = budget;
    rec.budget.seed = split_seed(cfg.solver.seed, 9000 + i++);
    rec.result = nonvanishing_infimum(make_F_field(cfg.model, lambda, cfg.samples), w, rec.budget);
    certs.push_back(std::move(rec));
  }
  return certs;
}

}  // namespace detail

inline int cmd_solve(const SolveOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load_run_config(opt.config_path);
  detail::apply_overrides(cfg, opt.seed_override, opt.window_override, opt.samples_override,
                          opt.out_dir);

  DiagonalQuadratic diag_storage;
  if (const DiagonalQuadratic* q = as_diagonal(cfg.hamiltonian_json, diag_storage))
    check_admissible(*q, cfg.lambda0);  // throws naming the clashing plane

  ModeWindow w = symmetric_window(cfg.window, cfg.model.dim());
  auto certs = detail::endpoint_certificates(cfg, w);
  double inf_min = std::min(certs[0].result.value, certs[1].result.value);

  double eps;
  std::string eps_provenance;
  if (cfg.eps) {
    eps = *cfg.eps;
    eps_provenance = "config";
  } else {
    if (inf_min <= 1e-6)
      throw config_error("cannot select eps: endpoint infimum estimate " +
                         format_double17(inf_min) + " is consistent with zero (lambda0 " +
                         "inadmissible?)");
    eps = std::min(0.1, 0.5 * inf_min);
    eps_provenance = "auto: min(0.1, infimum/2), infimum=" + format_double17(inf_min);
  }
  ChiProfile chi = make_chi(cfg.lambda0, eps);

  auto t_solve = std::chrono::steady_clock::now();
  CountReport rep = arnold_count(cfg.model, chi, w, cfg.solver, cfg.samples);
  double solve_ms = detail::elapsed_ms(t_solve);

  std::vector<double> action_values;
  for (const auto& f : rep.families)
    action_values.push_back(
        action_value(cfg.model, chi, {f.representative.x, f.lambda}, cfg.samples));

  RunMeta meta;
  meta.label = cfg.label;
  meta.hamiltonian = cfg.hamiltonian_json;
  meta.n = cfg.n;
  meta.window = cfg.window;
  meta.samples = cfg.samples;
  meta.lambda0 = cfg.lambda0;
  meta.eps = eps;
  meta.eps_provenance = eps_provenance;
  meta.seed = cfg.solver.seed;

  fs::create_directories(cfg.out_dir);
  std::vector<std::pair<std::string, double>> timings = {
      {"solve", solve_ms}, {"total", detail::elapsed_ms(t0)}};
  ordered_json report = run_report_json(meta, rep, action_values, certs, timings);
  write_text_file((fs::path(cfg.out_dir) / "families.json").string(), dump_json17(report));

  ordered_json cert_file;
  cert_file["schema_version"] = 1;
  cert_file["certificates"] = ordered_json::array();
  for (const auto& c : certs) cert_file["certificates"].push_back(infimum_certificate_json(c));
  cert_file["timestamps"] = timestamps_block({});
  write_text_file((fs::path(cfg.out_dir) / "certificates.json").string(), dump_json17(cert_file));

  write_text_file((fs::path(cfg.out_dir) / "summary.txt").string(), run_summary_text(meta, rep));
  std::printf("%s", run_summary_text(meta, rep).c_str());

  if (!rep.pass) return 2;
  return rep.warnings.empty() ? 0 : 1;
}

struct HomotopyOptions {
  std::string config_path;
  std::string out_dir;
  std::string step;  // 1, 2, 3, 4, c0small
  std::optional<std::uint64_t> seed_override;
  std::optional<int> window_override;
  std::optional<int> samples_override;
};

inline int cmd_homotopy(const HomotopyOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load_run_config(opt.config_path);
  detail::apply_overrides(cfg, opt.seed_override, opt.window_override, opt.samples_override,
                          opt.out_dir);
  if (opt.step != "1" && opt.step != "2" && opt.step != "3" && opt.step != "4" &&
      opt.step != "c0small")
    throw config_error("homotopy step must be one of 1, 2, 3, 4, c0small");

  ModeWindow w = symmetric_window(cfg.window, cfg.model.dim());
  InfimumBudget budget;
  budget.random_starts = 16;
  budget.descent_iters = 40;
  budget.seed = cfg.solver.seed;
  std::vector<double> grid = uniform_grid(cfg.s_points);

  PositivityBudget pos_budget;
  pos_budget.ambient = w;
  pos_budget.random_samples = 32;
  pos_budget.seed = split_seed(cfg.solver.seed, 41);
  auto pick_N = [&]() {
    if (cfg.hom_N > 0) return cfg.hom_N;
    AdmissibleField f = make_admissible_F(cfg.model, cfg.lambda0, cfg.samples);
    for (int N = 1; N <= cfg.window - 2; ++N) {
      if (positivity_margin(f, symmetric_window(N, w.dim), pos_budget) > 0.0) return N;
    }
    throw config_error("no valid truncation N below the window; enlarge the window");
  };

  ordered_json out;
  out["schema_version"] = 1;
  out["step"] = opt.step;
  out["certificates"] = ordered_json::array();
  bool pass = true;

  if (opt.step == "1") {
    auto cert = verify_ia_homotopy(step1_path(cfg.model, cfg.lambda0, cfg.samples), grid, w,
                                   budget, cfg.tau, "1");
    pass = cert.pass;
    out["certificates"].push_back(homotopy_certificate_json(cert));
  } else if (opt.step == "2") {
    int N = pick_N();
    AdmissibleField f = make_admissible_F(cfg.model, cfg.lambda0, cfg.samples);
    AdmissibleField V = truncate_to_V(f, N, pos_budget);
    FieldPath path;
    path.at = [f, V](double s) { return field_lincomb(1.0 - s, f, s, V); };
    auto cert = verify_ia_homotopy(path, grid, w, budget, cfg.tau, "2");
    pass = cert.pass;
    out["N"] = N;
    out["positivity_margin"] =
        positivity_margin(f, symmetric_window(N, w.dim), pos_budget);
    out["certificates"].push_back(homotopy_certificate_json(cert));
  } else if (opt.step == "3") {
    int N = pick_N();
    if (cfg.window < N + 2)
      throw config_error("step 3 needs window >= N+2 for the unshift verification");
    AdmissibleField V =
        truncate_to_V(make_admissible_F(cfg.model, cfg.lambda0, cfg.samples), N, pos_budget);
    build_step3_field(V, N, w, split_seed(cfg.solver.seed, 3));  // throws on failure
    out["N"] = N;
    out["three_case_check"] = "exact";
    out["verified_modes"] = w.mode_count() * w.dim;
  } else if (opt.step == "4") {
    int N = pick_N();
    if (cfg.window < N + 2) throw config_error("step 4 needs window >= N+2");
    AdmissibleField V =
        truncate_to_V(make_admissible_F(cfg.model, cfg.lambda0, cfg.samples), N, pos_budget);
    ChiProfile chi = make_chi(cfg.lambda0, cfg.eps.value_or(0.1));
    out["N"] = N;
    ordered_json probes = ordered_json::array();
    for (double off : {0.25, 0.5, 0.75}) {
      double lambda = cfg.lambda0 + off;
      AdmissibleField T = product_field(V, N, lambda, cfg.lambda0);
      auto rep = g_deformation_check(T, chi, N, w, lambda, {0.0, 0.5, 1.0},
                                     split_seed(cfg.solver.seed, 4));
      pass = pass && rep.pass;
      for (const auto& p : rep.probes) {
        ordered_json pj;
        pj["lambda"] = lambda;
        pj["ray"] = p.ray;
        pj["s"] = p.s;
        pj["magnitudes"] = p.magnitudes;
        pj["grows"] = p.grows;
        probes.push_back(pj);
      }
    }
    out["probes"] = probes;
  } else {  // c0small
    for (double lambda : {cfg.lambda0, cfg.lambda0 + 1.0}) {
      auto cert = verify_ia_homotopy(scaled_hamiltonian_path(cfg.model, lambda, cfg.samples),
                                     grid, w, budget, cfg.tau_c0small, "c0small");
      pass = pass && cert.pass;
      out["certificates"].push_back(homotopy_certificate_json(cert));
    }
  }

  out["pass"] = pass;
  out["timestamps"] = timestamps_block({{"total", detail::elapsed_ms(t0)}});
  fs::create_directories(cfg.out_dir);
  write_text_file((fs::path(cfg.out_dir) / "certificates.json").string(), dump_json17(out));
  std::printf("homotopy step %s: %s\n", opt.step.c_str(), pass ? "PASS" : "FAIL");
  return pass ? 0 : 2;
}

struct CuplengthOptions {
  int fixture_n = 1;
  std::string out_dir;
  std::string prev_dir;  // optional earlier run for suspension bookkeeping
};

inline int cmd_cuplength(const CuplengthOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  if (opt.fixture_n < 0) throw config_error("cuplength: fixture n must be >= 0");
  IndexPairFixture fixture = small_case_fixture(opt.fixture_n);
  fixture.ring.validate();
  fixture.module.validate(fixture.ring);
  int cup = relative_cuplength(fixture.ring, fixture.module);
  int single = single_class_cuplength(fixture.ring, fixture.module);
  std::printf("fixture %s: relative cup-length = %d (expected %d)\n", fixture.label.c_str(),
              cup, fixture.expected_cuplength);

  // product formula checks in the spectrum-factor regime
  ordered_json product_checks = ordered_json::array();
  bool products_ok = true;
  auto check_pair = [&](const std::string& label, const GradedRing& A, const GradedModule& MA,
                        const GradedRing& B, const GradedModule& MB, int expect) {
    int got = product_cuplength(A, MA, B, MB);
    ordered_json c;
    c["label"] = label;
    c["computed"] = got;
    c["expected"] = expect;
    c["pass"] = (got == expect);
    products_ok = products_ok && (got == expect);
    product_checks.push_back(c);
    std::printf("  product %-28s computed=%d expected=%d %s\n", label.c_str(), got, expect,
                got == expect ? "ok" : "MISMATCH");
  };
  GradedRing sr = scalar_ring();
  GradedModule pm = point_module();
  check_pair("spectrum x cp0", sr, pm, cp_ring(0), cp_shifted_module(0), 1);
  check_pair("spectrum x cp1", sr, pm, cp_ring(1), cp_shifted_module(1), 2);
  check_pair("spectrum x cp2", sr, pm, cp_ring(2), cp_shifted_module(2), 3);
  check_pair("spectrum x cp4", sr, pm, cp_ring(4), cp_shifted_module(4), 5);
  check_pair("spectrum(deg3) x cp3", sr, point_module(3), cp_ring(3), cp_shifted_module(3), 4);
  GradedRing r2 = cp_ring(2);
  check_pair("anything x zero", r2, cp_shifted_module(2), r2, zero_module(r2), 0);

  // gate the latest solve report
  fs::path report_path = fs::path(opt.out_dir) / "families.json";
  if (!fs::exists(report_path))
    throw config_error("no solve report found at " + report_path.string());
  ordered_json report = parse_json_file(report_path.string());
  int count = report.value("count", 0);
  int report_n = report.value("n", -1);
  bool gate_pass = morse_lower_bound_check(cup, count);
  ordered_json gate;
  gate["count"] = count;
  gate["cuplength"] = cup;
  gate["pass"] = gate_pass;
  std::printf("gate: count=%d >= cuplength=%d: %s\n", count, cup, gate_pass ? "PASS" : "FAIL");

  ordered_json suspension;
  if (!opt.prev_dir.empty()) {
    ordered_json prev = parse_json_file((fs::path(opt.prev_dir) / "families.json").string());
    int n_prev = prev.value("n", -1);
    if (n_prev != report_n)
      throw config_error("suspension bookkeeping: window pair runs have different n");
    int l = prev.value("window", 0), lp = report.value("window", 0);
    if (l > lp) std::swap(l, lp);
    SuspensionReport sus = suspension_bookkeeping(l, lp, 2 * report_n + 2);
    suspension["l"] = sus.l;
    suspension["l_prime"] = sus.l_prime;
    suspension["suspension_dim"] = sus.suspension_dim;
    suspension["cuplength_unchanged"] = true;  // fixture depends only on n
    std::printf("suspension: [-%d,%d] -> [-%d,%d], dimension %d, cup-length unchanged\n",
                sus.l, sus.l, sus.l_prime, sus.l_prime, sus.suspension_dim);
  }

  ordered_json out = cuplength_report_json(opt.fixture_n, cup, single, product_checks, gate,
                                           suspension,
                                           {{"total", detail::elapsed_ms(t0)}});
  write_text_file((fs::path(opt.out_dir) / "cuplength_report.json").string(), dump_json17(out));

  bool fixture_ok = (cup == fixture.expected_cuplength) && (single == cup);
  if (!fixture_ok || !products_ok || !gate_pass) return 2;
  return 0;
}

struct ExportOptions {
  std::string out_dir;
};

inline int cmd_export_plots(const ExportOptions& opt) {
  fs::path fam_path = fs::path(opt.out_dir) / "families.json";
  fs::path cert_path = fs::path(opt.out_dir) / "certificates.json";
  if (!fs::exists(fam_path) && !fs::exists(cert_path))
    throw config_error("no reports found in " + opt.out_dir);
  if (fs::exists(fam_path)) {
    ordered_json report = parse_json_file(fam_path.string());
    write_text_file((fs::path(opt.out_dir) / "families.csv").string(), families_csv(report));
  }
  if (fs::exists(cert_path)) {
    ordered_json certs = parse_json_file(cert_path.string());
    write_text_file((fs::path(opt.out_dir) / "certificates.csv").string(),
                    certificates_csv(certs));
  }
  return 0;
}

}  // namespace arnold::cli
