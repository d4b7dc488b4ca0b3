#pragma once

// Side-looking airborne radar scenario: steering vectors, the clutter ridge,
// the exact (clairvoyant) clutter-plus-noise covariance and training snapshots
// drawn from it.

#include "stap/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stap {

inline constexpr double kSpeedOfLight = 3.0e8;

/// Per-element gain/phase perturbation applied to clutter returns only. The
/// filters keep assuming the nominal steering.
struct ArrayErrorModel {
  double gain_std = 0.03;
  double phase_std = 3.0 * kPi / 180.0;  // radians
  std::uint64_t seed = 0;

  /// Multipliers (1 + dg_m) * exp(j dphi_m), m = 0..M-1. Fixed per scenario.
  std::vector<cplx> realize(int num_elements) const;
};

struct RadarConfig {
  int num_elements = 12;             // M
  int num_pulses = 12;               // N
  double carrier_freq = 1.2e9;       // Hz
  double prf = 2000.0;               // Hz
  std::optional<double> element_spacing;  // m, half wavelength when unset
  double platform_velocity = 125.0;  // m/s
  double platform_altitude = 8000.0; // m
  double cnr_db = 45.0;              // -inf disables clutter
  double noise_power = 1.0;          // sigma^2
  std::optional<ArrayErrorModel> array_error;

  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double spacing() const { return element_spacing.value_or(0.5 * wavelength()); }
  int dimension() const { return num_elements * num_pulses; }
  double cnr_linear() const;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  /// 12x12 side-looking ULA, L-band, 2 kHz PRF, 125 m/s, 8 km, 45 dB CNR.
  static RadarConfig reference_scenario();
};

struct ClairvoyantCovariance {
  CMatrix matrix;        // R, NM x NM
  CMatrix factor;        // F with F F^H = R
  RVector eigenvalues;   // of R, descending
  double noise_power = 1.0;
  std::vector<std::string> warnings;

  long dimension() const { return matrix.rows(); }
};

struct SnapshotBatch {
  CMatrix data;  // NM x L
  std::uint64_t seed = 0;

  long count() const { return data.cols(); }
};

CVector spatial_steering(double fs, int num_elements);
CVector doppler_steering(double fd, int num_pulses);

/// doppler_steering(fd, N) kron spatial_steering(fs, M).
CVector space_time_steering(double fs, double fd, int num_elements, int num_pulses);
CVector space_time_steering(double fs, double fd, const RadarConfig& config);

/// beta = 2 v / (d f_r); the clutter ridge is f_d = beta * f_s.
double clutter_ridge_slope(const RadarConfig& config);

inline constexpr int kDefaultClutterPatches = 361;

/// Discrete-patch clutter ring over azimuth [-pi/2, pi/2], equal patch power,
/// scaled so that trace(R - sigma^2 I) = NM * sigma^2 * CNR.
ClairvoyantCovariance build_clairvoyant_covariance(const RadarConfig& config,
                                                   int num_patches = kDefaultClutterPatches);

/// X = F G with G standard complex Gaussian, filled column by column from a
/// stream seeded by `seed`. A batch of L columns is a prefix of any longer
/// batch drawn with the same seed.
SnapshotBatch generate_snapshots(const ClairvoyantCovariance& cov, long count, std::uint64_t seed);

/// Number of eigenvalues above threshold_factor * sigma^2.
int clutter_rank(const RVector& eigenvalues, double noise_power, double threshold_factor = 10.0);

}  // namespace stap
