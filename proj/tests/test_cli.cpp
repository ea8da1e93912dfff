#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "arnold/cli.hpp"

using namespace arnold;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("arnold_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p);
  f << content;
}

std::string oracle_ham_json() {
  ordered_json h = {{"type", "diagonal_quadratic"},
                    {"n", 1},
                    {"a", {0.2 * kPi, 0.7 * kPi}}};
  return h.dump();
}

std::string oracle_config_json(const std::string& ham_file, std::uint64_t seed,
                               int window = 4, double lambda0 = -0.5,
                               const std::string& label = "oracle") {
  ordered_json c;
  c["schema_version"] = 1;
  c["label"] = label;
  c["hamiltonian"] = ham_file;
  c["n"] = 1;
  c["window"] = window;
  c["samples"] = 8 * window + 1;
  c["lambda0"] = lambda0;
  c["solver"] = {{"starts", 80}, {"newton_tol", 1e-10}, {"max_iter", 60}, {"seed", seed}};
  return c.dump();
}

ordered_json load(const fs::path& p) { return parse_json_file(p.string()); }

}  // namespace

TEST_CASE("run config validation") {
  TempDir dir("cfg");
  write_file(dir.path / "ham.json", oracle_ham_json());
  write_file(dir.path / "good.json", oracle_config_json("ham.json", 11));
  cli::RunConfig cfg = cli::load_run_config((dir.path / "good.json").string());
  CHECK(cfg.n == 1);
  CHECK(cfg.solver.seed == 11);

  CHECK_THROWS_AS(cli::load_run_config((dir.path / "missing.json").string()), config_error);

  ordered_json bad = ordered_json::parse(oracle_config_json("ham.json", 11));
  bad["mystery"] = 1;
  write_file(dir.path / "unknown.json", bad.dump());
  CHECK_THROWS_AS(cli::load_run_config((dir.path / "unknown.json").string()), config_error);

  ordered_json noseed = ordered_json::parse(oracle_config_json("ham.json", 11));
  noseed["solver"].erase("seed");
  write_file(dir.path / "noseed.json", noseed.dump());
  CHECK_THROWS_AS(cli::load_run_config((dir.path / "noseed.json").string()), config_error);

  ordered_json badn = ordered_json::parse(oracle_config_json("ham.json", 11));
  badn["n"] = 3;
  write_file(dir.path / "badn.json", badn.dump());
  CHECK_THROWS_AS(cli::load_run_config((dir.path / "badn.json").string()), config_error);

  ordered_json lowM = ordered_json::parse(oracle_config_json("ham.json", 11));
  lowM["samples"] = 8;
  write_file(dir.path / "lowM.json", lowM.dump());
  CHECK_THROWS_AS(cli::load_run_config((dir.path / "lowM.json").string()), config_error);

  ordered_json badeps = ordered_json::parse(oracle_config_json("ham.json", 11));
  badeps["eps"] = 0.5;
  write_file(dir.path / "badeps.json", badeps.dump());
  CHECK_THROWS_AS(cli::load_run_config((dir.path / "badeps.json").string()), config_error);
}

TEST_CASE("solve command writes reports and passes the oracle gate") {
  TempDir dir("solve");
  write_file(dir.path / "ham.json", oracle_ham_json());
  write_file(dir.path / "config.json", oracle_config_json("ham.json", 42));
  cli::SolveOptions opt;
  opt.config_path = (dir.path / "config.json").string();
  opt.out_dir = (dir.path / "out").string();
  int code = cli::cmd_solve(opt);
  CHECK(code == 0);

  ordered_json report = load(dir.path / "out" / "families.json");
  CHECK(report["schema_version"] == 1);
  CHECK(report["count"] == 2);
  CHECK(report["pass"] == true);
  REQUIRE(report["families"].size() == 2);
  CHECK(report["families"][0]["lambda"].get<double>() == doctest::Approx(-0.3).epsilon(1e-8));
  CHECK(report["families"][1]["lambda"].get<double>() == doctest::Approx(0.2).epsilon(1e-8));
  for (const auto& f : report["families"]) CHECK(f["residual"].get<double>() <= 1e-9);

  CHECK(fs::exists(dir.path / "out" / "certificates.json"));
  std::string summary = read_text_file((dir.path / "out" / "summary.txt").string());
  CHECK(summary.find("gate: PASS") != std::string::npos);
}

TEST_CASE("inadmissible lambda0 is a config error naming the clash") {
  TempDir dir("inadm");
  write_file(dir.path / "ham.json", oracle_ham_json());
  // lambda0 = 0.2 collides with a_0/pi = 0.2 mod 1
  write_file(dir.path / "config.json", oracle_config_json("ham.json", 1, 4, 0.2));
  cli::SolveOptions opt;
  opt.config_path = (dir.path / "config.json").string();
  opt.out_dir = (dir.path / "out").string();
  CHECK_THROWS_WITH_AS(static_cast<void>(cli::cmd_solve(opt)), doctest::Contains("plane 0"),
                       config_error);
}

TEST_CASE("degenerate Hamiltonian passes with warnings: exit code 1") {
  TempDir dir("degen");
  ordered_json h = {{"type", "diagonal_quadratic"}, {"n", 1}, {"a", {0.0, 0.0}}};
  write_file(dir.path / "ham.json", h.dump());
  ordered_json c = ordered_json::parse(oracle_config_json("ham.json", 3, 2));
  c["label"] = "free";
  write_file(dir.path / "config.json", c.dump());
  cli::SolveOptions opt;
  opt.config_path = (dir.path / "config.json").string();
  opt.out_dir = (dir.path / "out").string();
  int code = cli::cmd_solve(opt);
  CHECK(code == 1);
  ordered_json report = load(dir.path / "out" / "families.json");
  CHECK(report["pass"] == true);
  CHECK(report["warnings"].size() >= 1);
}

TEST_CASE("homotopy step 3 writes an exact-check certificate") {
  TempDir dir("hom3");
  write_file(dir.path / "ham.json", oracle_ham_json());
  ordered_json c = ordered_json::parse(oracle_config_json("ham.json", 5));
  c["homotopy"] = {{"N", 2}};
  write_file(dir.path / "config.json", c.dump());
  cli::HomotopyOptions opt;
  opt.config_path = (dir.path / "config.json").string();
  opt.out_dir = (dir.path / "out").string();
  opt.step = "3";
  CHECK(cli::cmd_homotopy(opt) == 0);
  ordered_json certs = load(dir.path / "out" / "certificates.json");
  CHECK(certs["step"] == "3");
  CHECK(certs["three_case_check"] == "exact");
  CHECK(certs["pass"] == true);

  cli::HomotopyOptions bad = opt;
  bad.step = "5";
  CHECK_THROWS_AS(static_cast<void>(cli::cmd_homotopy(bad)), config_error);
}

TEST_CASE("cuplength command gates counts and reports undercounts") {
  TempDir dir("cup");
  write_file(dir.path / "ham.json", oracle_ham_json());
  write_file(dir.path / "config.json", oracle_config_json("ham.json", 42));
  cli::SolveOptions sopt;
  sopt.config_path = (dir.path / "config.json").string();
  sopt.out_dir = (dir.path / "out").string();
  REQUIRE(cli::cmd_solve(sopt) == 0);

  cli::CuplengthOptions copt;
  copt.fixture_n = 1;
  copt.out_dir = (dir.path / "out").string();
  CHECK(cli::cmd_cuplength(copt) == 0);
  ordered_json rep = load(dir.path / "out" / "cuplength_report.json");
  CHECK(rep["cuplength"] == 2);
  CHECK(rep["gate"]["pass"] == true);
  CHECK(rep["product_checks"].size() == 6);

  // injected undercount: rewrite the report with count = 1
  ordered_json tampered = load(dir.path / "out" / "families.json");
  tampered["count"] = 1;
  write_text_file((dir.path / "out" / "families.json").string(), dump_json17(tampered));
  CHECK(cli::cmd_cuplength(copt) == 2);

  cli::CuplengthOptions missing = copt;
  missing.out_dir = (dir.path / "nowhere").string();
  CHECK_THROWS_AS(static_cast<void>(cli::cmd_cuplength(missing)), config_error);
}

TEST_CASE("export-plots: empty report, one family, unicode label") {
  TempDir dir("export");
  // hand-built empty report
  ordered_json empty;
  empty["schema_version"] = 1;
  empty["label"] = "";
  empty["families"] = ordered_json::array();
  fs::create_directories(dir.path / "out");
  write_text_file((dir.path / "out" / "families.json").string(), dump_json17(empty));
  cli::ExportOptions e;
  e.out_dir = (dir.path / "out").string();
  CHECK(cli::cmd_export_plots(e) == 0);
  CHECK(read_text_file((dir.path / "out" / "families.csv").string()) ==
        "lambda,action_value,residual,label\n");

  ordered_json one = empty;
  one["label"] = "λ-familie β";  // unicode survives the round trip
  one["families"].push_back({{"lambda", 0.25}, {"action_value", -1.5}, {"residual", 1e-12}});
  write_text_file((dir.path / "out" / "families.json").string(), dump_json17(one));
  CHECK(cli::cmd_export_plots(e) == 0);
  std::string csv = read_text_file((dir.path / "out" / "families.csv").string());
  CHECK(csv.find("0.25,-1.5,") != std::string::npos);
  CHECK(csv.find("λ-familie β") != std::string::npos);

  cli::ExportOptions nowhere;
  nowhere.out_dir = (dir.path / "void").string();
  CHECK_THROWS_AS(static_cast<void>(cli::cmd_export_plots(nowhere)), config_error);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  TempDir dir("determ");
  write_file(dir.path / "ham.json", oracle_ham_json());
  write_file(dir.path / "config.json", oracle_config_json("ham.json", 2024));
  for (const char* run : {"a", "b"}) {
    // results must not depend on the parallelism cap either
    if (std::string(run) == "b") setenv("ARNOLD_THREADS", "1", 1);
    cli::SolveOptions opt;
    opt.config_path = (dir.path / "config.json").string();
    opt.out_dir = (dir.path / run).string();
    REQUIRE(cli::cmd_solve(opt) == 0);
    unsetenv("ARNOLD_THREADS");
  }
  for (const char* file : {"families.json", "certificates.json"}) {
    ordered_json a = load(dir.path / "a" / file);
    ordered_json b = load(dir.path / "b" / file);
    a.erase("timestamps");
    b.erase("timestamps");
    CHECK(dump_json17(a) == dump_json17(b));
  }
  CHECK(read_text_file((dir.path / "a" / "summary.txt").string()) ==
        read_text_file((dir.path / "b" / "summary.txt").string()));
}

TEST_CASE("binary exit codes through the real CLI") {
  const char* bin = std::getenv("ARNOLD_BIN");
  if (!bin) {
    MESSAGE("ARNOLD_BIN not set; skipping subprocess checks");
    return;
  }
  TempDir dir("bin");
  write_file(dir.path / "ham.json", oracle_ham_json());
  write_file(dir.path / "config.json", oracle_config_json("ham.json", 9));
  std::string base = std::string("\"") + bin + "\"";

  auto run = [&](const std::string& args) {
    std::string cmd = base + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("solve --config " + (dir.path / "config.json").string() + " --out " +
            (dir.path / "out").string()) == 0);
  CHECK(run("solve --config " + (dir.path / "does_not_exist.json").string()) == 3);
  CHECK(run("cuplength --fixture 1 --out " + (dir.path / "out").string()) == 0);
  CHECK(run("cuplength --fixture 1 --out " + (dir.path / "empty").string()) == 3);
  CHECK(run("export-plots --out " + (dir.path / "out").string()) == 0);

  // gate failure propagates as exit code 2 through the binary
  ordered_json tampered = load(dir.path / "out" / "families.json");
  tampered["count"] = 0;
  write_text_file((dir.path / "out" / "families.json").string(), dump_json17(tampered));
  CHECK(run("cuplength --fixture 1 --out " + (dir.path / "out").string()) == 2);
}
