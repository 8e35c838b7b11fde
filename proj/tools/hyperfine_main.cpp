#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hyperfine/report.hpp"

namespace fs = std::filesystem;
using namespace hyperfine;

namespace {

struct CliArgs {
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::uint64_t rng_seed = 0;
  bool seed_given = false;
};

int run_main(const CliArgs& args) {
  json cfg;
  {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigInvalid("cannot open config file '" + args.config_path + "'");
    try {
      in >> cfg;
    } catch (const json::parse_error& e) {
      throw ConfigInvalid("config is not valid JSON: " + std::string(e.what()));
    }
  }

  RunConfig rc = parse_config(cfg, args.command);
  if (args.seed_given) rc.rng_seed = args.rng_seed;
  if (!args.out_dir.empty()) rc.out_dir = args.out_dir;

  const RunOutput out = run(rc);
  const json rep = report_json(out);
  std::cout << rep.dump(2) << "\n";

  if (!rc.out_dir.empty()) {
    fs::create_directories(rc.out_dir);
    std::ofstream(fs::path(rc.out_dir) / "report.json") << rep.dump(2) << "\n";
    if (rc.command == "s-spectrum")
      std::ofstream(fs::path(rc.out_dir) / "spectrum.csv") << spectrum_csv(out.spheres);
    if (rc.command == "quadrature-study")
      std::ofstream(fs::path(rc.out_dir) / "quadrature.csv") << quadrature_csv(out.quad_rows);
  }
  return out.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"numerical laboratory for slice-function fine structures and the S-functional "
               "calculus"};
  app.require_subcommand(1);

  CliArgs args;
  const std::pair<const char*, const char*> commands[] = {
      {"verify-fueter-sce", "second-extension outputs are killed by the Dirac operator"},
      {"verify-chains", "factorization chains land in the advertised function spaces"},
      {"verify-kernels", "closed-form kernels against the jet route"},
      {"s-spectrum", "spectral spheres of a commuting operator tuple (CSV output)"},
      {"calculus-compare", "contour functional calculus against direct evaluation"},
      {"quadrature-study", "quadrature error versus node count (CSV output)"},
  };
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config_path, "path to the run config (JSON)")
        ->required();
    sub->add_option("--out", args.out_dir, "directory for report.json and CSV output");
    auto* seed = sub->add_option("--rng-seed", args.rng_seed, "override the config rng seed");
    sub->callback([&args, seed, name = std::string(name)] {
      args.command = name;
      args.seed_given = seed->count() > 0;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run_main(args);
  } catch (const ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
