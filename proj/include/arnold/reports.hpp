#pragma once

// Machine-readable run artifacts: families.json, certificates.json,
// summary.txt, cuplength_report.json and the CSV extracts. All JSON goes
// through dump_json17 (ordered keys, floats at 17 significant digits), so two
// runs with the same seed produce byte-identical files apart from the
// "timestamps" object, which callers exclude when comparing.

#include <chrono>
#include <string>
#include <vector>

#include "arnold/action.hpp"
#include "arnold/cuplength.hpp"
#include "arnold/homotopy.hpp"
#include "arnold/json_io.hpp"
#include "arnold/solver.hpp"

namespace arnold {

inline ordered_json timestamps_block(const std::vector<std::pair<std::string, double>>& timings) {
  ordered_json t;
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&tt));
  t["written_at"] = buf;
  ordered_json ms;
  for (const auto& [k, v] : timings) ms[k] = v;
  t["timings_ms"] = ms;
  return t;
}

struct InfimumCertificateRecord {
  double lambda = 0.0;
  InfimumResult result;
  InfimumBudget budget;
};

inline ordered_json infimum_certificate_json(const InfimumCertificateRecord& rec) {
  ordered_json j;
  j["lambda"] = rec.lambda;
  j["inf_estimate"] = rec.result.value;
  j["argmin_loop"] = loop_to_json(rec.result.argmin);
  ordered_json budget;
  budget["random_starts"] = rec.budget.random_starts;
  budget["descent_iters"] = rec.budget.descent_iters;
  j["budget"] = budget;
  j["seed"] = rec.budget.seed;
  return j;
}

inline ordered_json family_json(const CriticalFamily& fam, double action_val) {
  ordered_json j;
  j["lambda"] = fam.lambda;
  j["residual"] = fam.residual;
  j["action_value"] = action_val;
  j["multiplicity_hint"] = fam.multiplicity_hint;
  j["fingerprint"] = fam.fingerprint;
  j["loop"] = loop_to_json(fam.representative.x);
  return j;
}

struct RunMeta {
  std::string label;
  ordered_json hamiltonian;  // config echo
  int n = 0;
  int window = 0;
  int samples = 0;
  double lambda0 = 0.0;
  double eps = 0.0;
  std::string eps_provenance;
  std::uint64_t seed = 0;
};

inline ordered_json run_report_json(const RunMeta& meta, const CountReport& rep,
                                    const std::vector<double>& action_values,
                                    const std::vector<InfimumCertificateRecord>& certs,
                                    const std::vector<std::pair<std::string, double>>& timings) {
  ordered_json j;
  j["schema_version"] = 1;
  j["label"] = meta.label;
  j["hamiltonian"] = meta.hamiltonian;
  j["n"] = meta.n;
  j["window"] = meta.window;
  j["samples"] = meta.samples;
  j["lambda0"] = meta.lambda0;
  j["eps"] = meta.eps;
  j["eps_provenance"] = meta.eps_provenance;
  j["seed"] = meta.seed;
  j["families"] = ordered_json::array();
  for (std::size_t i = 0; i < rep.families.size(); ++i)
    j["families"].push_back(family_json(rep.families[i], action_values[i]));
  j["count"] = rep.count;
  j["expected_minimum"] = rep.expected_minimum;
  j["pass"] = rep.pass;
  j["warnings"] = rep.warnings;
  j["certificates"] = ordered_json::array();
  for (const auto& c : certs) j["certificates"].push_back(infimum_certificate_json(c));
  ordered_json diag;
  diag["starts"] = rep.diagnostics.starts;
  diag["converged"] = rep.diagnostics.converged;
  diag["abandoned"] = rep.diagnostics.abandoned;
  diag["outside_region"] = rep.diagnostics.outside_region;
  j["diagnostics"] = diag;
  j["timestamps"] = timestamps_block(timings);
  return j;
}

inline std::string run_summary_text(const RunMeta& meta, const CountReport& rep) {
  std::string s;
  s += "run: " + meta.label + " [" + meta.hamiltonian.value("type", std::string("?")) + "]\n";
  s += "window: [-" + std::to_string(meta.window) + "," + std::to_string(meta.window) +
       "]  samples: " + std::to_string(meta.samples) + "  seed: " + std::to_string(meta.seed) +
       "\n";
  s += "lambda0: " + format_double17(meta.lambda0) + "  eps: " + format_double17(meta.eps) +
       " (" + meta.eps_provenance + ")\n";
  s += "families: " + std::to_string(rep.count) +
       "  required: " + std::to_string(rep.expected_minimum) + "  gate: " +
       (rep.pass ? "PASS" : "FAIL") + "\n";
  for (const auto& f : rep.families)
    s += "  lambda=" + format_double17(f.lambda) + "  residual=" + format_double17(f.residual) +
         "  multiplicity_hint=" + std::to_string(f.multiplicity_hint) + "\n";
  for (const auto& w : rep.warnings) s += "warning: " + w + "\n";
  return s;
}

inline ordered_json homotopy_certificate_json(const HomotopyCertificate& cert) {
  ordered_json j;
  j["step"] = cert.step;
  j["s_grid"] = cert.s_grid;
  j["infima"] = cert.infima;
  j["tau"] = cert.tau;
  j["margin"] = cert.margin;
  j["pass"] = cert.pass;
  j["worst_s"] = cert.worst_s;
  j["witness"] = loop_to_json(cert.witness);
  return j;
}

inline ordered_json cuplength_report_json(int fixture_n, int cuplength, int single_class,
                                          const ordered_json& product_checks,
                                          const ordered_json& gate,
                                          const ordered_json& suspension,
                                          const std::vector<std::pair<std::string, double>>& timings) {
  ordered_json j;
  j["schema_version"] = 1;
  j["fixture_n"] = fixture_n;
  j["cuplength"] = cuplength;
  j["single_class_cuplength"] = single_class;
  j["product_checks"] = product_checks;
  j["gate"] = gate;
  j["suspension"] = suspension;
  j["timestamps"] = timestamps_block(timings);
  return j;
}

// --- CSV extracts -----------------------------------------------------------------

inline std::string families_csv(const ordered_json& report) {
  std::string out = "lambda,action_value,residual,label\n";
  std::string label = report.value("label", std::string());
  if (report.contains("families"))
    for (const auto& f : report["families"]) {
      out += format_double17(f["lambda"].get<double>()) + ",";
      out += format_double17(f["action_value"].get<double>()) + ",";
      out += format_double17(f["residual"].get<double>()) + ",";
      out += label + "\n";
    }
  return out;
}

inline std::string certificates_csv(const ordered_json& certs_file) {
  std::string out = "step,s,infimum\n";
  if (!certs_file.contains("certificates")) return out;
  for (const auto& c : certs_file["certificates"]) {
    if (c.contains("s_grid")) {
      const auto& grid = c["s_grid"];
      const auto& inf = c["infima"];
      for (std::size_t i = 0; i < grid.size(); ++i) {
        out += c.value("step", std::string("path")) + ",";
        out += format_double17(grid[i].get<double>()) + ",";
        out += format_double17(inf[i].get<double>()) + "\n";
      }
    } else if (c.contains("lambda")) {
      out += "lambda_cert,";
      out += format_double17(c["lambda"].get<double>()) + ",";
      out += format_double17(c["inf_estimate"].get<double>()) + "\n";
    }
  }
  return out;
}

}  // namespace arnold
