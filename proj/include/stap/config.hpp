#pragma once

// INI-style run configuration. Sections:
//
//   [scenario]          num_elements, num_pulses, carrier_freq, prf, platform_velocity
//                       and cnr_db are required; element_spacing, platform_altitude,
//                       noise_power, clutter_patches are optional
//   [array_error]       enabled, gain_std, phase_std (radians), seed
//   [target]            fs, fd
//   [run]               seed, trials, methods
//   [sweep]             snapshots, dopplers (comma-separated lists)
//   [algorithms.<name>] snapshots for every trained method, plus
//                         jdl:         loading, beams, dopplers
//                         stmb:        loading, doppler_arm, beam_arm
//                         acr:         loading, cells
//                         scbds:       p, kappa, max_iter, rel_change_tol,
//                                      prune_threshold, inner_solver, cg_tol
//                         l1gsc:       as scbds without p
//   [weight_map]        snapshots
//
// Unknown sections and keys are errors. Lines are `key = value`; `#` and `;`
// start comments.

#include "stap/experiments.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stap {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

struct RunConfig {
  RadarConfig scenario;
  int clutter_patches = kDefaultClutterPatches;
  double target_fs = 0.0;
  double target_fd = -0.1667;
  std::uint64_t seed = 1;
  int trials = 50;
  std::vector<Method> methods{Method::Clairvoyant, Method::Jdl, Method::Stmb, Method::Scbds, Method::L1Gsc};
  std::map<Method, MethodSpec> algorithms;  // every method, defaults filled
  std::vector<double> snapshot_grid{10, 20, 30, 40, 60, 80, 100};
  std::vector<double> doppler_grid;         // -0.5 : 0.05 : 0.45
  long weight_map_snapshots = 30;

  RunConfig();

  ExperimentSpec experiment(SweepKind kind) const;
  const MethodSpec& algorithm(Method method) const { return algorithms.at(method); }
};

/// Parses configuration text; `source` names it in error messages.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration in the same format; parsing it back yields an
/// identical RunConfig.
std::string render_config(const RunConfig& config);

}  // namespace stap
