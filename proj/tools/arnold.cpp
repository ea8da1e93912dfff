#include "CLI11.hpp"
#include "arnold/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral loop-space toolkit: S^1-families of twisted Hamiltonian "
               "orbits on CP^n, homotopy certificates and cup-length gates"};
  app.require_subcommand(1);

  arnold::cli::SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "find critical families and write reports");
  solve->add_option("--config", solve_opts.config_path, "run config JSON")->required();
  solve->add_option("--out", solve_opts.out_dir, "output directory");
  solve->add_option("--seed", solve_opts.seed_override, "override solver seed");
  solve->add_option("--window", solve_opts.window_override, "override window half-width K");
  solve->add_option("--samples", solve_opts.samples_override, "override sample count M");

  arnold::cli::HomotopyOptions hom_opts;
  auto* hom = app.add_subcommand("homotopy", "verify a homotopy step, write certificates");
  hom->add_option("--config", hom_opts.config_path, "run config JSON")->required();
  hom->add_option("--out", hom_opts.out_dir, "output directory");
  hom->add_option("--step", hom_opts.step, "one of 1,2,3,4,c0small")->required();
  hom->add_option("--seed", hom_opts.seed_override, "override seed");
  hom->add_option("--window", hom_opts.window_override, "override window half-width K");
  hom->add_option("--samples", hom_opts.samples_override, "override sample count M");

  arnold::cli::CuplengthOptions cup_opts;
  auto* cup = app.add_subcommand("cuplength", "cup-length fixture, product formula, count gate");
  cup->add_option("--fixture", cup_opts.fixture_n, "fixture parameter n")->required();
  cup->add_option("--out", cup_opts.out_dir, "directory holding families.json")->required();
  cup->add_option("--prev", cup_opts.prev_dir, "earlier run for suspension bookkeeping");

  arnold::cli::ExportOptions exp_opts;
  auto* expo = app.add_subcommand("export-plots", "CSV extracts from report files");
  expo->add_option("--out", exp_opts.out_dir, "directory holding the reports")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return arnold::cli::cmd_solve(solve_opts);
    if (*hom) return arnold::cli::cmd_homotopy(hom_opts);
    if (*cup) return arnold::cli::cmd_cuplength(cup_opts);
    if (*expo) return arnold::cli::cmd_export_plots(exp_opts);
  } catch (const arnold::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 3;
}
