#pragma once

// Command implementations behind the `stap` executable. Each returns the
// process exit code and reports problems on `err`.

#include "stap/config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

namespace stap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct CommandOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides [run] seed
  std::optional<int> trials;          // overrides [run] trials
};

/// scenario_report.txt and eigenvalues.csv.
int cmd_scenario_report(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// sweep_<kind>.csv with header abscissa,method,mean_scnr_loss_db,std_db,trials,failures.
int cmd_sweep(const CommandOptions& options, SweepKind kind, std::ostream& out, std::ostream& err);

/// weight_map.csv: header row of beam offsets, then N rows of |w~| with the
/// target cell written as -1.
int cmd_weight_map(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Every command also writes resolved.ini (the configuration with all
/// defaults filled, reusable as --config), manifest.json (deterministic) and
/// timing.json (wall-clock duration).

/// printf-style %.12g, the numeric format of every CSV.
std::string format_csv_number(double value);

std::string_view tool_version();

}  // namespace stap
