#pragma once

// SCNR-loss evaluation and the Monte Carlo sweeps over training-set size and
// target Doppler, plus the beam-Doppler weight map of a sparse design.

#include "stap/solvers.hpp"

#include <cstdint>
#include <vector>

namespace stap {

/// 10 log10( sigma^2 |w^H s|^2 / (NM w^H R w) ). Throws on a zero w.
double scnr_loss_db(const CVector& w, const CVector& steering, const CMatrix& covariance, double noise_power);

/// Per-method settings. `snapshots` is the training size L used by the
/// Doppler sweep; the snapshot sweep takes L from its abscissa.
struct MethodSpec {
  Method method = Method::Scbds;
  long snapshots = 30;
  SparseSolverConfig sparse;     // scbds, l1gsc
  double loading = 1.0;          // reduced MVDR, in units of sigma^2
  int jdl_beams = 3;
  int jdl_dopplers = 3;
  int stmb_doppler_arm = 8;
  int stmb_beam_arm = 4;
  int acr_cells = 9;
};

enum class SweepKind { Snapshots, Doppler };

std::string_view to_string(SweepKind kind);

struct ExperimentSpec {
  RadarConfig scenario;
  double target_fs = 0.0;
  double target_fd = -0.1667;       // fixed target Doppler of the snapshot sweep
  std::vector<MethodSpec> methods;
  SweepKind kind = SweepKind::Snapshots;
  std::vector<double> abscissa;     // snapshot counts or target Dopplers
  int num_trials = 50;
  std::uint64_t master_seed = 1;
  int num_patches = kDefaultClutterPatches;

  void validate() const;
};

/// Per-trial seed, distinct for distinct trials (splitmix64 of the pair).
std::uint64_t trial_seed(std::uint64_t master_seed, int trial);

struct MethodCurve {
  Method method = Method::Clairvoyant;
  std::vector<double> mean_db;
  std::vector<double> std_db;
  std::vector<int> trials;      // successful trials per abscissa
  std::vector<int> failures;
  std::vector<std::vector<double>> samples_db;  // [abscissa][trial], NaN where the trial failed
};

struct SweepResult {
  SweepKind kind = SweepKind::Snapshots;
  std::vector<double> abscissa;
  std::vector<MethodCurve> curves;  // in ExperimentSpec::methods order
  std::vector<std::uint64_t> seeds; // one per trial
  int num_trials = 0;

  const MethodCurve& curve(Method method) const;
};

/// Designs one filter trained on every column of `snapshots` (ignored by the
/// clairvoyant method).
FilterWeights design_filter(const MethodSpec& spec, const CMatrix& snapshots, const BeamDopplerBasis& basis,
                            const ClairvoyantCovariance& cov, double ridge_slope);

/// Trials run in parallel. Every trial draws one snapshot batch, and all
/// methods and abscissae use prefixes of it, so the curves share their random
/// numbers. Results do not depend on the thread count.
SweepResult run_snapshot_sweep(const ExperimentSpec& spec);
SweepResult run_doppler_sweep(const ExperimentSpec& spec);
SweepResult run_sweep(const ExperimentSpec& spec);

struct WeightMap {
  RMatrix grid;             // N x M, |w~| at (Doppler offset, beam offset); target entry 0
  Cell target{0, 0};        // main channel, not a w~ entry
  double max_amplitude = 0;
};

/// Places |w~_i| at the cell of aux column i. Requires Scbds weights.
WeightMap export_weight_map(const FilterWeights& weights, const BeamDopplerBasis& basis);

/// Fraction of entries with |w_i| > rel * max|w|; 0 for a zero vector.
double significant_fraction(const CVector& w, double rel = 1e-3);

/// Fraction of the support whose cells lie within one cell (Chebyshev, cyclic)
/// of a cell crossed by the clutter ridge. Requires Scbds weights.
double ridge_overlap(const FilterWeights& weights, const BeamDopplerBasis& basis, double ridge_slope);

}  // namespace stap
