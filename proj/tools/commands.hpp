#pragma once

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "heisfock/montecarlo.hpp"
#include "heisfock/structure.hpp"

namespace heisfock::cli {

/// Exit code contract: 0 = all assertions pass, 2 = statistical failure,
/// 3 = invariant/config failure.
enum ExitCode : int { kOk = 0, kStatFailure = 2, kConfigFailure = 3 };

/// Column-ordered result table; renders to CSV or a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t);

/// One experiment run: structure, polynomial literals, times, and the
/// Monte Carlo plan.  The structure is validated on construction.
struct RunConfig {
  StructurePtr structure;
  std::vector<std::string> polynomials;
  std::vector<double> ts{1.0};
  McConfig mc;
  std::vector<double> epsilons{0.0, 0.05, 10.0};
  double z_threshold = 3.0;
  int grid_segments = 256;
  std::string out;            // empty writes to stdout
  std::string format = "csv"; // csv | json
  std::string witness_csv;    // geometry: optimized witness path export
  std::string bracket_json;   // geometry: distance bracket export
};

/// Parses the config document; flag overrides are applied by the caller and
/// the HEISFOCK_SEED environment variable takes highest precedence.
RunConfig parse_run_config(const nlohmann::json& doc);

std::string render(const Table& t, const std::string& format);
void emit(const RunConfig& cfg, const Table& t, std::ostream& stdout_stream);

int cmd_isometry(const RunConfig& cfg, std::ostream& out);
int cmd_projection(const RunConfig& cfg, std::ostream& out);
int cmd_fejer(const RunConfig& cfg, std::ostream& out);
int cmd_geometry(const RunConfig& cfg, std::ostream& out);
int cmd_fernique(const RunConfig& cfg, std::ostream& out);
int cmd_martingale(const RunConfig& cfg, std::ostream& out);
int cmd_selftest(const RunConfig& cfg, std::ostream& out);

/// Full command-line entry point (subcommand dispatch, flag overrides,
/// error-to-exit-code mapping).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace heisfock::cli
