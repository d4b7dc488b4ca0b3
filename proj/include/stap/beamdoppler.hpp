#pragma once

// Beam-Doppler domain: the NM x NM shifted-DFT transform T = [s | T_aux], the
// main/auxiliary channel split, and the fixed localized-processing regions
// used by the JDL, STMB and ACR baselines.

#include "stap/scene.hpp"

#include <compare>
#include <vector>

namespace stap {

/// Beam-Doppler cell as (Doppler offset k, beam offset m) from the target
/// cell, reduced to k in [0, N), m in [0, M).
struct Cell {
  int doppler = 0;
  int beam = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

class BeamDopplerBasis {
 public:
  BeamDopplerBasis(double target_fs, double target_fd, int num_elements, int num_pulses);

  int num_elements() const { return num_elements_; }
  int num_pulses() const { return num_pulses_; }
  long dimension() const { return full_.rows(); }
  long aux_count() const { return aux_.cols(); }
  double target_fs() const { return target_fs_; }
  double target_fd() const { return target_fd_; }

  const CMatrix& full_matrix() const { return full_; }
  const CMatrix& aux_matrix() const { return aux_; }
  auto target_steering() const { return full_.col(0); }

  /// Wraps arbitrary signed offsets onto the grid.
  Cell normalize(int doppler_offset, int beam_offset) const;

  /// Column of T; the target cell is column 0. Aux columns follow in
  /// Doppler-major order, beam offsets ascending, skipping (0, 0).
  long column_index(Cell cell) const;
  /// Aux column index, or -1 for the target cell.
  long aux_index(Cell cell) const { return column_index(cell) - 1; }
  Cell aux_cell(long aux_index) const;

 private:
  int num_elements_;
  int num_pulses_;
  double target_fs_;
  double target_fd_;
  CMatrix full_;
  CMatrix aux_;
};

BeamDopplerBasis build_basis(double target_fs, double target_fd, const RadarConfig& config);

/// d = s^H x.
cplx main_channel(const CVector& x, const BeamDopplerBasis& basis);

/// X~ = T_aux^H X, (NM-1) x L.
CMatrix aux_channels(const CMatrix& snapshots, const BeamDopplerBasis& basis);

struct LPRegion {
  std::vector<Cell> cells;
  CMatrix selection;  // NM x D, columns of T in `cells` order

  long size() const { return static_cast<long>(cells.size()); }
};

/// Builds a region from explicit cells; rejects duplicates after wrapping.
LPRegion make_region(const BeamDopplerBasis& basis, std::vector<Cell> cells);

/// Rectangular n_dopplers x n_beams block centred on the target. Odd sizes only.
LPRegion jdl_region(const BeamDopplerBasis& basis, int n_beams = 3, int n_dopplers = 3);

/// Cross: doppler_arm cells along the Doppler axis at the target beam, beam_arm
/// cells along the beam axis at the target Doppler, plus the target. Even arms.
LPRegion stmb_region(const BeamDopplerBasis& basis, int doppler_arm = 8, int beam_arm = 4);

/// Distinct cells crossed by the clutter ridge f_d = beta * f_s, one per beam
/// (|beta| M <= N) or one per Doppler bin, ordered by distance from the target.
std::vector<Cell> ridge_cells(const BeamDopplerBasis& basis, double beta);

/// Target cell plus the cells nearest the clutter ridge f_d = beta * f_s,
/// taken in order of distance from the target.
LPRegion acr_region(const BeamDopplerBasis& basis, double beta, int num_cells);

}  // namespace stap
