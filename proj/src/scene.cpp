#include "stap/scene.hpp"

#include "stap/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace stap {

std::vector<cplx> ArrayErrorModel::realize(int num_elements) const {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gain(0.0, gain_std);
  std::normal_distribution<double> phase(0.0, phase_std);
  std::vector<cplx> out(static_cast<std::size_t>(num_elements));
  for (auto& g : out) {
    const double dg = gain_std > 0 ? gain(gen) : 0.0;
    const double dp = phase_std > 0 ? phase(gen) : 0.0;
    g = (1.0 + dg) * std::polar(1.0, dp);
  }
  return out;
}

double RadarConfig::cnr_linear() const {
  if (std::isinf(cnr_db) && cnr_db < 0) return 0.0;
  return std::pow(10.0, cnr_db / 10.0);
}

void RadarConfig::validate() const {
  if (num_elements < 1) throw std::invalid_argument("num_elements must be >= 1");
  if (num_pulses < 1) throw std::invalid_argument("num_pulses must be >= 1");
  if (!(prf > 0) || !std::isfinite(prf)) throw std::invalid_argument("prf must be > 0");
  if (!(carrier_freq > 0) || !std::isfinite(carrier_freq)) {
    throw std::invalid_argument("carrier_freq must be > 0");
  }
  if (!(noise_power > 0) || !std::isfinite(noise_power)) {
    throw std::invalid_argument("noise_power must be > 0");
  }
  if (element_spacing && (!(*element_spacing > 0) || !std::isfinite(*element_spacing))) {
    throw std::invalid_argument("element_spacing must be > 0");
  }
  if (!std::isfinite(platform_velocity)) throw std::invalid_argument("platform_velocity must be finite");
  if (std::isnan(cnr_db) || (std::isinf(cnr_db) && cnr_db > 0)) {
    throw std::invalid_argument("cnr_db must be finite or -inf");
  }
  if (array_error && (array_error->gain_std < 0 || array_error->phase_std < 0)) {
    throw std::invalid_argument("array error standard deviations must be >= 0");
  }
}

RadarConfig RadarConfig::reference_scenario() { return RadarConfig{}; }

CVector spatial_steering(double fs, int num_elements) {
  if (num_elements < 1) throw std::invalid_argument("steering vector length must be >= 1");
  CVector v(num_elements);
  for (int m = 0; m < num_elements; ++m) v(m) = std::polar(1.0, 2.0 * kPi * m * fs);
  return v;
}

CVector doppler_steering(double fd, int num_pulses) { return spatial_steering(fd, num_pulses); }

CVector space_time_steering(double fs, double fd, int num_elements, int num_pulses) {
  const CVector vs = spatial_steering(fs, num_elements);
  const CVector vd = doppler_steering(fd, num_pulses);
  CVector out(static_cast<Eigen::Index>(num_elements) * num_pulses);
  for (int n = 0; n < num_pulses; ++n) out.segment(n * num_elements, num_elements) = vd(n) * vs;
  return out;
}

CVector space_time_steering(double fs, double fd, const RadarConfig& config) {
  return space_time_steering(fs, fd, config.num_elements, config.num_pulses);
}

double clutter_ridge_slope(const RadarConfig& config) {
  return 2.0 * config.platform_velocity / (config.spacing() * config.prf);
}

ClairvoyantCovariance build_clairvoyant_covariance(const RadarConfig& config, int num_patches) {
  config.validate();
  const int m_count = config.num_elements;
  const int n_count = config.num_pulses;
  const long dim = config.dimension();
  const double sigma2 = config.noise_power;
  const double cnr = config.cnr_linear();

  ClairvoyantCovariance cov;
  cov.noise_power = sigma2;
  cov.matrix = CMatrix::Identity(dim, dim) * sigma2;

  if (cnr > 0) {
    if (num_patches < 1) throw std::invalid_argument("num_patches must be >= 1 when clutter is enabled");
    if (num_patches < 2 * dim) {
      cov.warnings.push_back("num_patches = " + std::to_string(num_patches) +
                             " is below 2*NM = " + std::to_string(2 * dim));
    }
    const double beta = clutter_ridge_slope(config);
    const double d_over_lambda = config.spacing() / config.wavelength();
    std::vector<cplx> errors;
    if (config.array_error) errors = config.array_error->realize(m_count);

    // Row p holds conj(v_p)^T so that gram(rows) = sum_p v_p v_p^H.
    CMatrix rows(num_patches, dim);
    for (int p = 0; p < num_patches; ++p) {
      const double phi = num_patches == 1 ? 0.0 : -0.5 * kPi + kPi * p / (num_patches - 1);
      const double fs = d_over_lambda * std::sin(phi);
      CVector vs = spatial_steering(fs, m_count);
      for (std::size_t m = 0; m < errors.size(); ++m) vs(static_cast<Eigen::Index>(m)) *= errors[m];
      const CVector vd = doppler_steering(beta * fs, n_count);
      for (int n = 0; n < n_count; ++n) {
        rows.row(p).segment(n * m_count, m_count) = (vd(n) * vs).conjugate().transpose();
      }
    }
    CMatrix clutter = kernels::gram(rows);
    const double trace = clutter.diagonal().real().sum();
    clutter *= (static_cast<double>(dim) * sigma2 * cnr) / trace;
    cov.matrix += clutter;
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov.matrix);
  if (eig.info() != Eigen::Success) throw SingularMatrixError("covariance eigendecomposition failed");
  const RVector ascending = eig.eigenvalues();
  cov.eigenvalues = ascending.reverse();
  CMatrix vectors = eig.eigenvectors().rowwise().reverse();
  RVector scale = cov.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  cov.factor = vectors * scale.asDiagonal();
  return cov;
}

SnapshotBatch generate_snapshots(const ClairvoyantCovariance& cov, long count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("snapshot count must be >= 1");
  const long rank = cov.factor.cols();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  SnapshotBatch batch;
  batch.seed = seed;
  batch.data.resize(cov.factor.rows(), count);
  CVector g(rank);
  for (long l = 0; l < count; ++l) {
    for (long i = 0; i < rank; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      g(i) = cplx(re, im);
    }
    batch.data.col(l).noalias() = cov.factor * g;
  }
  return batch;
}

int clutter_rank(const RVector& eigenvalues, double noise_power, double threshold_factor) {
  return static_cast<int>((eigenvalues.array() > threshold_factor * noise_power).count());
}

}  // namespace stap
