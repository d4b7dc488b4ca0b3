#include "stap/beamdoppler.hpp"

#include "stap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stap {

namespace {

int wrap(int value, int period) {
  const int r = value % period;
  return r < 0 ? r + period : r;
}

// Signed representative of a wrapped offset, in (-period/2, period/2].
int signed_offset(int value, int period) {
  const int r = wrap(value, period);
  return 2 * r > period ? r - period : r;
}

}  // namespace

BeamDopplerBasis::BeamDopplerBasis(double target_fs, double target_fd, int num_elements, int num_pulses)
    : num_elements_(num_elements), num_pulses_(num_pulses), target_fs_(target_fs), target_fd_(target_fd) {
  if (num_elements < 1 || num_pulses < 1) throw std::invalid_argument("basis needs M, N >= 1");
  const long dim = static_cast<long>(num_elements) * num_pulses;
  full_.resize(dim, dim);
  for (int k = 0; k < num_pulses; ++k) {
    for (int m = 0; m < num_elements; ++m) {
      full_.col(static_cast<long>(k) * num_elements + m) =
          space_time_steering(target_fs + static_cast<double>(m) / num_elements,
                              target_fd + static_cast<double>(k) / num_pulses, num_elements, num_pulses);
    }
  }
  aux_ = full_.rightCols(dim - 1);
}

Cell BeamDopplerBasis::normalize(int doppler_offset, int beam_offset) const {
  return Cell{wrap(doppler_offset, num_pulses_), wrap(beam_offset, num_elements_)};
}

long BeamDopplerBasis::column_index(Cell cell) const {
  const Cell c = normalize(cell.doppler, cell.beam);
  return static_cast<long>(c.doppler) * num_elements_ + c.beam;
}

Cell BeamDopplerBasis::aux_cell(long aux_index) const {
  if (aux_index < 0 || aux_index >= aux_count()) throw std::out_of_range("aux index out of range");
  const long column = aux_index + 1;
  return Cell{static_cast<int>(column / num_elements_), static_cast<int>(column % num_elements_)};
}

BeamDopplerBasis build_basis(double target_fs, double target_fd, const RadarConfig& config) {
  config.validate();
  return BeamDopplerBasis(target_fs, target_fd, config.num_elements, config.num_pulses);
}

cplx main_channel(const CVector& x, const BeamDopplerBasis& basis) {
  require_same(x.size(), basis.dimension(), "main_channel input length");
  return basis.target_steering().dot(x);
}

CMatrix aux_channels(const CMatrix& snapshots, const BeamDopplerBasis& basis) {
  require_same(snapshots.rows(), basis.dimension(), "aux_channels snapshot length");
  return kernels::adjoint_product(basis.aux_matrix(), snapshots);
}

LPRegion make_region(const BeamDopplerBasis& basis, std::vector<Cell> cells) {
  if (static_cast<long>(cells.size()) > basis.dimension()) {
    throw std::invalid_argument("region larger than the beam-Doppler grid");
  }
  std::set<Cell> seen;
  for (auto& c : cells) {
    c = basis.normalize(c.doppler, c.beam);
    if (!seen.insert(c).second) {
      throw std::invalid_argument("region cells overlap after wrapping onto the grid");
    }
  }
  LPRegion region;
  region.selection.resize(basis.dimension(), static_cast<long>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    region.selection.col(static_cast<long>(i)) = basis.full_matrix().col(basis.column_index(cells[i]));
  }
  region.cells = std::move(cells);
  return region;
}

LPRegion jdl_region(const BeamDopplerBasis& basis, int n_beams, int n_dopplers) {
  if (n_beams < 1 || n_dopplers < 1 || n_beams % 2 == 0 || n_dopplers % 2 == 0) {
    throw std::invalid_argument("JDL block sizes must be odd and positive");
  }
  if (n_beams > basis.num_elements() || n_dopplers > basis.num_pulses()) {
    throw std::invalid_argument("JDL block exceeds the grid");
  }
  const int hb = n_beams / 2;
  const int hd = n_dopplers / 2;
  std::vector<Cell> cells;
  for (int k = -hd; k <= hd; ++k) {
    for (int m = -hb; m <= hb; ++m) cells.push_back({k, m});
  }
  return make_region(basis, std::move(cells));
}

LPRegion stmb_region(const BeamDopplerBasis& basis, int doppler_arm, int beam_arm) {
  if (doppler_arm < 0 || beam_arm < 0 || doppler_arm % 2 != 0 || beam_arm % 2 != 0) {
    throw std::invalid_argument("STMB arm lengths must be even and non-negative");
  }
  if (doppler_arm + 1 > basis.num_pulses() || beam_arm + 1 > basis.num_elements()) {
    throw std::invalid_argument("STMB arm exceeds the grid");
  }
  std::vector<Cell> cells{{0, 0}};
  for (int k = -doppler_arm / 2; k <= doppler_arm / 2; ++k) {
    if (k != 0) cells.push_back({k, 0});
  }
  for (int m = -beam_arm / 2; m <= beam_arm / 2; ++m) {
    if (m != 0) cells.push_back({0, m});
  }
  return make_region(basis, std::move(cells));
}

std::vector<Cell> ridge_cells(const BeamDopplerBasis& basis, double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("ridge slope must be finite");
  const int m_count = basis.num_elements();
  const int n_count = basis.num_pulses();
  const double fs_t = basis.target_fs();
  const double fd_t = basis.target_fd();

  // One ridge cell per beam when the ridge is shallower than the grid
  // diagonal, otherwise one per Doppler bin.
  std::vector<Cell> ridge;
  if (std::abs(beta) * m_count <= n_count) {
    for (int m = 0; m < m_count; ++m) {
      const double fd = beta * (fs_t + static_cast<double>(m) / m_count);
      const int k = static_cast<int>(std::lround(n_count * (fd - fd_t)));
      ridge.push_back(basis.normalize(k, m));
    }
  } else {
    for (int k = 0; k < n_count; ++k) {
      const double fd = fd_t + static_cast<double>(k) / n_count;
      // Doppler is ambiguous modulo 1; take the ridge branch nearest the target beam.
      const double j = std::round(beta * fs_t - fd);
      const double fs = (fd + j) / beta;
      const int m = static_cast<int>(std::lround(m_count * (fs - fs_t)));
      ridge.push_back(basis.normalize(k, m));
    }
  }

  auto distance = [&](const Cell& c) {
    const double dk = signed_offset(c.doppler, n_count);
    const double dm = signed_offset(c.beam, m_count);
    return dk * dk + dm * dm;
  };
  std::stable_sort(ridge.begin(), ridge.end(),
                   [&](const Cell& a, const Cell& b) { return distance(a) < distance(b); });
  std::set<Cell> seen;
  std::vector<Cell> out;
  for (const auto& c : ridge) {
    if (seen.insert(c).second) out.push_back(c);
  }
  return out;
}

LPRegion acr_region(const BeamDopplerBasis& basis, double beta, int num_cells) {
  if (num_cells < 1 || num_cells > basis.dimension()) {
    throw std::invalid_argument("ACR cell count must be in [1, NM]");
  }
  std::vector<Cell> cells{{0, 0}};
  for (const auto& c : ridge_cells(basis, beta)) {
    if (static_cast<int>(cells.size()) == num_cells) break;
    if (c != Cell{0, 0}) cells.push_back(c);
  }
  if (static_cast<int>(cells.size()) < num_cells) {
    throw std::invalid_argument("clutter ridge crosses only " + std::to_string(cells.size()) +
                                " distinct cells; requested " + std::to_string(num_cells));
  }
  return make_region(basis, std::move(cells));
}

}  // namespace stap
