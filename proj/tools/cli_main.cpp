#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "commands.hpp"
#include "heisfock/io.hpp"

namespace heisfock::cli {

namespace {

nlohmann::json default_selftest_config() {
  return nlohmann::json{
      {"structure", {{"kind", "standard_heisenberg"}, {"n_pairs", 1}}},
      {"t", {1.0}},
      {"mc", {{"steps", 10}, {"samples", 2000}, {"seed", 7}, {"streams", 2}}},
  };
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"heisfock: Fock norms, heat-kernel Monte Carlo and horizontal "
               "geometry on complex Heisenberg-like groups"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  bool have_seed = false;

  const std::vector<std::string> names = {"isometry", "projection", "fejer",
                                          "geometry", "fernique",  "martingale",
                                          "selftest"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment configuration (JSON)");
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format, "csv|json");
    sub->add_option("--seed", seed, "Monte Carlo seed override")
        ->each([&](const std::string&) { have_seed = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigFailure;
  }

  try {
    nlohmann::json doc;
    if (!config_path.empty())
      doc = nlohmann::json::parse(read_file(config_path));
    else if (app.get_subcommands().front()->get_name() == "selftest")
      doc = default_selftest_config();
    else
      throw std::invalid_argument("--config is required for this subcommand");

    RunConfig cfg = parse_run_config(doc);
    // precedence: config < --seed flag < HEISFOCK_SEED environment variable
    if (have_seed) cfg.mc.seed = seed;
    if (const char* env = std::getenv("HEISFOCK_SEED")) {
      cfg.mc.seed = std::strtoull(env, nullptr, 10);
    }
    if (!out_path.empty()) cfg.out = out_path;
    if (!format.empty()) cfg.format = format;

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "isometry") return cmd_isometry(cfg, out);
    if (name == "projection") return cmd_projection(cfg, out);
    if (name == "fejer") return cmd_fejer(cfg, out);
    if (name == "geometry") return cmd_geometry(cfg, out);
    if (name == "fernique") return cmd_fernique(cfg, out);
    if (name == "martingale") return cmd_martingale(cfg, out);
    if (name == "selftest") return cmd_selftest(cfg, out);
    throw std::invalid_argument("unknown subcommand");
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const structural_error& e) {
    err << "structural error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigFailure;
  }
}

}  // namespace heisfock::cli
