#include "doctest.h"

#include "stap/numerics.hpp"
#include "stap/scene.hpp"

#include <cmath>
#include <limits>

using namespace stap;

namespace {

bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("spatial steering entries") {
  const CVector dc = spatial_steering(0.0, 4);
  for (int m = 0; m < 4; ++m) CHECK(close(dc(m), 1.0));

  const CVector half = spatial_steering(0.5, 2);
  CHECK(close(half(0), 1.0));
  CHECK(close(half(1), -1.0));

  const CVector quarter = spatial_steering(0.25, 4);
  const cplx j(0.0, 1.0);
  CHECK(close(quarter(0), 1.0));
  CHECK(close(quarter(1), j));
  CHECK(close(quarter(2), -1.0));
  CHECK(close(quarter(3), -j));

  CHECK_THROWS_AS(spatial_steering(0.1, 0), std::invalid_argument);
}

TEST_CASE("doppler steering entries") {
  const CVector dc = doppler_steering(0.0, 3);
  for (int n = 0; n < 3; ++n) CHECK(close(dc(n), 1.0));

  const CVector v = doppler_steering(-0.1667, 2);
  CHECK(close(v(0), 1.0));
  CHECK(close(v(1), std::polar(1.0, -2.0 * kPi * 0.1667)));

  const CVector wrapped = doppler_steering(1.0, 5);
  for (int n = 0; n < 5; ++n) CHECK(close(wrapped(n), 1.0, 1e-12));
  CHECK_THROWS_AS(doppler_steering(0.0, 0), std::invalid_argument);
}

TEST_CASE("space-time steering is Doppler kron spatial") {
  const CVector ones = space_time_steering(0.0, 0.0, 2, 2);
  for (int i = 0; i < 4; ++i) CHECK(close(ones(i), 1.0));

  const CVector alt = space_time_steering(0.5, 0.0, 2, 2);
  const double expected[] = {1, -1, 1, -1};
  for (int i = 0; i < 4; ++i) CHECK(close(alt(i), expected[i]));

  for (double fs : {-0.37, 0.0, 0.123, 0.49}) {
    for (double fd : {-0.5, -0.1667, 0.3}) {
      const CVector v = space_time_steering(fs, fd, 12, 12);
      CHECK(v.squaredNorm() == doctest::Approx(144.0).epsilon(1e-14));
      for (int n = 0; n < 12; ++n) {
        for (int m = 0; m < 12; ++m) {
          const cplx e = std::polar(1.0, 2.0 * kPi * (n * fd + m * fs));
          CHECK(close(v(n * 12 + m), e, 1e-12));
        }
      }
    }
  }
}

TEST_CASE("clutter ridge slope") {
  RadarConfig cfg = RadarConfig::reference_scenario();
  CHECK(cfg.wavelength() == doctest::Approx(0.25));
  CHECK(cfg.spacing() == doctest::Approx(0.125));
  CHECK(clutter_ridge_slope(cfg) == doctest::Approx(1.0).epsilon(1e-15));

  cfg.platform_velocity = 0;
  CHECK(clutter_ridge_slope(cfg) == 0.0);

  RadarConfig fast = RadarConfig::reference_scenario();
  fast.platform_velocity *= 2;
  CHECK(clutter_ridge_slope(fast) == doctest::Approx(2.0 * clutter_ridge_slope(RadarConfig::reference_scenario())));
}

TEST_CASE("config validation") {
  RadarConfig cfg;
  cfg.num_elements = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RadarConfig{};
  cfg.prf = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RadarConfig{};
  cfg.noise_power = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RadarConfig{};
  cfg.carrier_freq = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RadarConfig{};
  cfg.cnr_db = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(build_clairvoyant_covariance(cfg), std::invalid_argument);
}

TEST_CASE("clutter disabled gives white noise") {
  RadarConfig cfg;
  cfg.num_elements = 4;
  cfg.num_pulses = 3;
  cfg.noise_power = 2.5;
  cfg.cnr_db = -std::numeric_limits<double>::infinity();
  const auto cov = build_clairvoyant_covariance(cfg);
  CHECK((cov.matrix - 2.5 * CMatrix::Identity(12, 12)).norm() == 0.0);
  CHECK(clutter_rank(cov.eigenvalues, cov.noise_power) == 0);
}

TEST_CASE("reference covariance properties") {
  const RadarConfig cfg = RadarConfig::reference_scenario();
  const auto cov = build_clairvoyant_covariance(cfg);
  const CMatrix& r = cov.matrix;
  const double nm = 144;

  CHECK((r - r.adjoint()).norm() / r.norm() < 1e-12);
  CHECK(cov.warnings.empty());

  const double cnr = (r.trace().real() - nm) / nm;
  CHECK(std::abs(cnr - cfg.cnr_linear()) / cfg.cnr_linear() < 1e-9);
  CHECK(std::abs(r.trace().real() - nm * (1 + cfg.cnr_linear())) / (nm * (1 + cfg.cnr_linear())) < 1e-9);

  // Independent eigendecomposition of R.
  const auto eig = eig_hermitian(r);
  CHECK(eig.values.minCoeff() >= 1.0 - 1e-9);
  const int rank = clutter_rank(eig.values, 1.0);
  CHECK(rank >= 22);
  CHECK(rank <= 24);
  CHECK(clutter_rank(cov.eigenvalues, 1.0) == rank);

  CHECK((cov.factor * cov.factor.adjoint() - r).norm() / r.norm() < 1e-10);
}

TEST_CASE("few patches warn") {
  RadarConfig cfg;
  cfg.num_elements = 4;
  cfg.num_pulses = 4;
  const auto cov = build_clairvoyant_covariance(cfg, 20);
  CHECK(cov.warnings.size() == 1);
}

TEST_CASE("array errors perturb clutter only") {
  RadarConfig cfg;
  cfg.num_elements = 6;
  cfg.num_pulses = 4;
  const auto nominal = build_clairvoyant_covariance(cfg);
  cfg.array_error = ArrayErrorModel{};
  cfg.array_error->seed = 11;
  const auto perturbed = build_clairvoyant_covariance(cfg);
  CHECK((nominal.matrix - perturbed.matrix).norm() > 1e-3 * nominal.matrix.norm());
  // The CNR calibration absorbs the gain errors.
  CHECK(perturbed.matrix.trace().real() == doctest::Approx(nominal.matrix.trace().real()).epsilon(1e-12));

  const auto gains = cfg.array_error->realize(6);
  CHECK(gains == cfg.array_error->realize(6));
  ArrayErrorModel none{0.0, 0.0, 5};
  for (const auto& g : none.realize(6)) CHECK(g == cplx(1.0, 0.0));
}

TEST_CASE("snapshots are deterministic prefixes") {
  RadarConfig cfg;
  cfg.num_elements = 4;
  cfg.num_pulses = 4;
  const auto cov = build_clairvoyant_covariance(cfg);
  const auto a = generate_snapshots(cov, 25, 42);
  const auto b = generate_snapshots(cov, 25, 42);
  const auto longer = generate_snapshots(cov, 40, 42);
  const auto other = generate_snapshots(cov, 25, 43);
  CHECK(a.count() == 25);
  CHECK(a.data == b.data);
  CHECK(longer.data.leftCols(25) == a.data);
  CHECK(other.data != a.data);
  CHECK_THROWS_AS(generate_snapshots(cov, 0, 1), std::invalid_argument);
}

TEST_CASE("white-noise snapshot power") {
  RadarConfig cfg;
  cfg.num_elements = 4;
  cfg.num_pulses = 4;
  cfg.noise_power = 3.0;
  cfg.cnr_db = -std::numeric_limits<double>::infinity();
  const auto cov = build_clairvoyant_covariance(cfg);
  const auto one = generate_snapshots(cov, 1, 9);
  CHECK(one.count() == 1);
  const auto many = generate_snapshots(cov, 4000, 9);
  const double power = many.data.squaredNorm() / (16.0 * 4000.0);
  CHECK(power == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("sample covariance converges to R") {
  RadarConfig cfg;
  cfg.num_elements = 4;
  cfg.num_pulses = 4;
  cfg.cnr_db = 20;
  const auto cov = build_clairvoyant_covariance(cfg);
  const long count = 10000;
  const auto batch = generate_snapshots(cov, count, 2024);
  const CMatrix sample = batch.data * batch.data.adjoint() / static_cast<double>(count);
  CHECK((sample - cov.matrix).norm() / cov.matrix.norm() < 0.05);
}

}  // TEST_SUITE
