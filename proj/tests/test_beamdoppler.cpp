#include "doctest.h"

#include "stap/beamdoppler.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

using namespace stap;

namespace {

// Cell of the ridge nearest to beam m, found by scanning every Doppler bin.
int nearest_ridge_doppler(double fs_t, double fd_t, double beta, int m, int n_count, int m_count) {
  const double target = beta * (fs_t + static_cast<double>(m) / m_count);
  int best = 0;
  double best_gap = 1e9;
  for (int k = 0; k < n_count; ++k) {
    const double fd = fd_t + static_cast<double>(k) / n_count;
    double gap = std::fmod(std::abs(fd - target), 1.0);
    gap = std::min(gap, 1.0 - gap);
    if (gap < best_gap - 1e-12) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("beamdoppler") {

TEST_CASE("transform orthogonality") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (auto [m, n] : {std::pair{12, 12}, {2, 2}, {3, 5}, {8, 4}}) {
    for (int rep = 0; rep < 3; ++rep) {
      const BeamDopplerBasis basis(u(rng), u(rng), m, n);
      const double nm = m * n;
      const CMatrix& t = basis.full_matrix();
      CHECK((t.adjoint() * t - nm * CMatrix::Identity(m * n, m * n)).norm() / nm < 1e-10);
      CHECK(t.colwise().squaredNorm().maxCoeff() == doctest::Approx(nm));
    }
  }
}

TEST_CASE("2x2 basis at the origin is the Kronecker DFT") {
  const BeamDopplerBasis basis(0.0, 0.0, 2, 2);
  const double expected[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 4; ++i) CHECK(std::abs(basis.full_matrix()(i, c) - expected[c][i]) < 1e-12);
  }
  CHECK((basis.full_matrix().adjoint() * basis.full_matrix() - 4.0 * CMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("columns are shifted steering vectors") {
  const BeamDopplerBasis basis(0.07, -0.1667, 5, 4);
  CHECK(basis.target_steering() == space_time_steering(0.07, -0.1667, 5, 4));
  for (int k = 0; k < 4; ++k) {
    for (int m = 0; m < 5; ++m) {
      const CVector col = basis.full_matrix().col(basis.column_index({k, m}));
      CHECK((col - space_time_steering(0.07 + m / 5.0, -0.1667 + k / 4.0, 5, 4)).norm() < 1e-12);
    }
  }
}

TEST_CASE("aux index map is a bijection") {
  const BeamDopplerBasis basis(0.0, 0.0, 12, 12);
  CHECK(basis.aux_count() == 143);
  CHECK(basis.aux_index({0, 0}) == -1);
  std::set<Cell> seen;
  for (long i = 0; i < basis.aux_count(); ++i) {
    const Cell c = basis.aux_cell(i);
    CHECK(basis.aux_index(c) == i);
    CHECK(c != Cell{0, 0});
    seen.insert(c);
    CHECK((basis.aux_matrix().col(i) - basis.full_matrix().col(i + 1)).norm() == 0.0);
  }
  CHECK(seen.size() == 143);
  CHECK(basis.aux_cell(0) == Cell{0, 1});
  CHECK(basis.aux_cell(11) == Cell{1, 0});
  CHECK(basis.column_index({-1, -1}) == basis.column_index({11, 11}));
  CHECK_THROWS_AS(basis.aux_cell(143), std::out_of_range);
}

TEST_CASE("main channel") {
  const BeamDopplerBasis basis(0.1, 0.2, 4, 3);
  const CVector s = basis.target_steering();
  CHECK(std::abs(main_channel(s, basis) - 12.0) < 1e-12);
  CHECK(std::abs(main_channel(basis.aux_matrix().col(4), basis)) < 1e-12);
  CHECK(std::abs(main_channel(s + basis.aux_matrix().col(7), basis) - 12.0) < 1e-12);
  CHECK_THROWS_AS(main_channel(CVector::Ones(5), basis), DimensionError);
}

TEST_CASE("aux channels") {
  const BeamDopplerBasis basis(-0.2, 0.3, 4, 3);
  const CMatrix s = basis.target_steering();
  CHECK(aux_channels(s, basis).norm() < 1e-12);

  const CMatrix col = basis.aux_matrix().col(6);
  CMatrix expected = CMatrix::Zero(11, 1);
  expected(6, 0) = 12.0;
  CHECK((aux_channels(col, basis) - expected).norm() < 1e-12);

  const CMatrix x = test::random_complex(12, 7, 3);
  const CMatrix aux = aux_channels(x, basis);
  const CMatrix rebuilt = (s * (s.adjoint() * x) + basis.aux_matrix() * aux) / 12.0;
  CHECK((rebuilt - x).norm() / x.norm() < 1e-9);
  CHECK_THROWS_AS(aux_channels(CMatrix::Ones(5, 2), basis), DimensionError);
}

TEST_CASE("JDL region") {
  const BeamDopplerBasis basis(0.0, -0.1667, 12, 12);
  const LPRegion jdl = jdl_region(basis);
  CHECK(jdl.size() == 9);
  CHECK(std::find(jdl.cells.begin(), jdl.cells.end(), Cell{0, 0}) != jdl.cells.end());
  for (const Cell& c : jdl.cells) {
    const int dk = c.doppler > 6 ? c.doppler - 12 : c.doppler;
    const int dm = c.beam > 6 ? c.beam - 12 : c.beam;
    CHECK(std::abs(dk) <= 1);
    CHECK(std::abs(dm) <= 1);
  }
  for (long j = 0; j < jdl.size(); ++j) {
    CHECK(jdl.selection.col(j) == basis.full_matrix().col(basis.column_index(jdl.cells[j])));
  }
  CHECK(jdl_region(basis, 1, 1).size() == 1);
  CHECK_THROWS_AS(jdl_region(basis, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(jdl_region(basis, 3, 4), std::invalid_argument);

  // Offsets wrap: at a grid edge all 9 cells stay distinct.
  const BeamDopplerBasis edge(0.49, 0.49, 3, 3);
  const LPRegion wrapped = jdl_region(edge);
  CHECK(std::set<Cell>(wrapped.cells.begin(), wrapped.cells.end()).size() == 9);
  CHECK_THROWS_AS(jdl_region(BeamDopplerBasis(0, 0, 2, 2), 3, 3), std::invalid_argument);
}

TEST_CASE("STMB region") {
  const BeamDopplerBasis basis(0.0, -0.1667, 12, 12);
  const LPRegion stmb = stmb_region(basis);
  CHECK(stmb.size() == 13);
  int doppler_axis = 0;
  int beam_axis = 0;
  for (const Cell& c : stmb.cells) {
    if (c == Cell{0, 0}) continue;
    if (c.beam == 0) ++doppler_axis;
    if (c.doppler == 0) ++beam_axis;
  }
  CHECK(doppler_axis == 8);
  CHECK(beam_axis == 4);
  CHECK(stmb_region(basis, 0, 0).size() == 1);

  const LPRegion plus = stmb_region(basis, 2, 2);
  const std::set<Cell> expected{{0, 0}, {1, 0}, {11, 0}, {0, 1}, {0, 11}};
  CHECK(std::set<Cell>(plus.cells.begin(), plus.cells.end()) == expected);

  CHECK_THROWS_AS(stmb_region(basis, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(stmb_region(basis, 12, 2), std::invalid_argument);
  CHECK_THROWS_AS(stmb_region(BeamDopplerBasis(0, 0, 4, 12), 2, 4), std::invalid_argument);
}

TEST_CASE("ACR region follows the ridge") {
  // beta = 1, M = N, target at the origin: the ridge is the grid diagonal.
  const BeamDopplerBasis origin(0.0, 0.0, 12, 12);
  const LPRegion diag = acr_region(origin, 1.0, 12);
  for (const Cell& c : diag.cells) CHECK(c.doppler == c.beam);
  CHECK(acr_region(origin, 1.0, 1).cells == std::vector<Cell>{{0, 0}});

  // Off-grid targets: every ridge cell matches a brute-force nearest-bin scan.
  for (auto [fs, fd, beta] : {std::tuple{0.0, -0.1667, 1.0}, {0.03, 0.21, 0.6}, {-0.1, 0.4, 0.8}}) {
    const BeamDopplerBasis basis(fs, fd, 12, 12);
    const auto ridge = ridge_cells(basis, beta);
    for (const Cell& c : ridge) {
      CHECK(c.doppler == nearest_ridge_doppler(fs, fd, beta, c.beam, 12, 12));
    }
    const LPRegion acr = acr_region(basis, beta, 9);
    CHECK(acr.cells.front() == Cell{0, 0});
    CHECK(acr.size() == 9);
  }

  // Steep ridge: cells collapse onto the target beam column.
  const BeamDopplerBasis basis(0.0, -0.1667, 12, 12);
  for (const Cell& c : acr_region(basis, 1e6, 12).cells) CHECK(c.beam == 0);

  // Flat ridge through the target: only M cells exist.
  CHECK(acr_region(origin, 0.0, 12).size() == 12);
  CHECK_THROWS_AS(acr_region(origin, 0.0, 13), std::invalid_argument);
  CHECK_THROWS_AS(acr_region(origin, std::nan(""), 3), std::invalid_argument);
  CHECK_THROWS_AS(acr_region(origin, 1.0, 0), std::invalid_argument);
}

TEST_CASE("explicit regions reject duplicates") {
  const BeamDopplerBasis basis(0.0, 0.0, 4, 4);
  CHECK_THROWS_AS(make_region(basis, {{0, 0}, {4, 0}}), std::invalid_argument);
  const LPRegion r = make_region(basis, {{-1, -1}, {0, 0}});
  CHECK(r.cells.front() == Cell{3, 3});
}

}  // TEST_SUITE
