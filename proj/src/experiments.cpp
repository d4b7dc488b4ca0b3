#include "stap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int cyclic_distance(int a, int b, int period) {
  const int d = std::abs(a - b) % period;
  return std::min(d, period - d);
}

void summarize(MethodCurve& curve) {
  const std::size_t n_abscissa = curve.samples_db.size();
  curve.mean_db.assign(n_abscissa, kNaN);
  curve.std_db.assign(n_abscissa, kNaN);
  curve.trials.assign(n_abscissa, 0);
  curve.failures.assign(n_abscissa, 0);
  for (std::size_t a = 0; a < n_abscissa; ++a) {
    // Accumulate about the first sample so identical samples give exactly zero spread.
    double shift = kNaN;
    double sum = 0;
    double sum_sq = 0;
    int n = 0;
    for (double v : curve.samples_db[a]) {
      if (!std::isfinite(v)) {
        ++curve.failures[a];
        continue;
      }
      if (n == 0) shift = v;
      const double d = v - shift;
      sum += d;
      sum_sq += d * d;
      ++n;
    }
    curve.trials[a] = n;
    if (n == 0) continue;
    curve.mean_db[a] = shift + sum / n;
    curve.std_db[a] = n > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1))) : 0.0;
  }
}

}  // namespace

double scnr_loss_db(const CVector& w, const CVector& steering, const CMatrix& covariance, double noise_power) {
  require_same(w.size(), steering.size(), "scnr_loss_db weight length");
  require_same(covariance.rows(), w.size(), "scnr_loss_db covariance size");
  if (w.norm() == 0) throw std::invalid_argument("scnr_loss_db: zero weight vector");
  if (!(noise_power > 0)) throw std::invalid_argument("scnr_loss_db: noise power must be > 0");
  const double gain = std::norm(w.dot(steering));
  const double output = w.dot(covariance * w).real();
  if (!(output > 0)) throw SingularMatrixError("scnr_loss_db: covariance is not positive definite along w");
  return 10.0 * std::log10(noise_power * gain / (static_cast<double>(w.size()) * output));
}

std::string_view to_string(SweepKind kind) { return kind == SweepKind::Snapshots ? "snapshots" : "doppler"; }

void ExperimentSpec::validate() const {
  scenario.validate();
  if (num_trials < 1) throw std::invalid_argument("num_trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("no methods selected");
  if (abscissa.empty()) throw std::invalid_argument("sweep grid is empty");
  if (num_patches < 1) throw std::invalid_argument("num_patches must be >= 1");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (methods[i].snapshots < 1) throw std::invalid_argument("per-method snapshot count must be >= 1");
    methods[i].sparse.validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (methods[j].method == methods[i].method) {
        throw std::invalid_argument("method listed twice: " + std::string(to_string(methods[i].method)));
      }
    }
  }
  for (double x : abscissa) {
    if (kind == SweepKind::Snapshots) {
      if (!(x >= 1) || x != std::floor(x)) throw std::invalid_argument("snapshot counts must be integers >= 1");
    } else if (!(x >= -0.5 && x < 0.5)) {
      throw std::invalid_argument("target Dopplers must lie in [-0.5, 0.5)");
    }
  }
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
  return splitmix64(splitmix64(master_seed) ^ static_cast<std::uint64_t>(trial));
}

const MethodCurve& SweepResult::curve(Method method) const {
  for (const auto& c : curves) {
    if (c.method == method) return c;
  }
  throw std::out_of_range("no curve for method " + std::string(to_string(method)));
}

FilterWeights design_filter(const MethodSpec& spec, const CMatrix& snapshots, const BeamDopplerBasis& basis,
                            const ClairvoyantCovariance& cov, double ridge_slope) {
  const CVector s = basis.target_steering();
  const double loading = spec.loading * cov.noise_power;
  switch (spec.method) {
    case Method::Clairvoyant:
      return mvdr_clairvoyant(cov.matrix, s);
    case Method::Jdl:
      return mvdr_reduced(jdl_region(basis, spec.jdl_beams, spec.jdl_dopplers), snapshots, s, loading, Method::Jdl);
    case Method::Stmb:
      return mvdr_reduced(stmb_region(basis, spec.stmb_doppler_arm, spec.stmb_beam_arm), snapshots, s, loading,
                          Method::Stmb);
    case Method::Acr:
      return mvdr_reduced(acr_region(basis, ridge_slope, spec.acr_cells), snapshots, s, loading, Method::Acr);
    case Method::Scbds:
      return scbds_design(snapshots, basis, spec.sparse).weights;
    case Method::L1Gsc:
      return l1_gsc_design(snapshots, s, spec.sparse).weights;
  }
  throw std::invalid_argument("unknown method");
}

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const RadarConfig& scenario = spec.scenario;
  const ClairvoyantCovariance cov = build_clairvoyant_covariance(scenario, spec.num_patches);
  const double beta = clutter_ridge_slope(scenario);
  const bool by_snapshots = spec.kind == SweepKind::Snapshots;
  const std::size_t n_abscissa = spec.abscissa.size();
  const std::size_t n_methods = spec.methods.size();
  const int n_trials = spec.num_trials;

  std::vector<BeamDopplerBasis> bases;
  if (by_snapshots) {
    bases.emplace_back(spec.target_fs, spec.target_fd, scenario.num_elements, scenario.num_pulses);
  } else {
    for (double fd : spec.abscissa) {
      bases.emplace_back(spec.target_fs, fd, scenario.num_elements, scenario.num_pulses);
    }
  }
  auto basis_at = [&](std::size_t a) -> const BeamDopplerBasis& { return bases[by_snapshots ? 0 : a]; };
  auto snapshots_for = [&](std::size_t m, std::size_t a) {
    return by_snapshots ? static_cast<long>(spec.abscissa[a]) : spec.methods[m].snapshots;
  };

  long max_snapshots = 1;
  for (std::size_t m = 0; m < n_methods; ++m) {
    if (spec.methods[m].method == Method::Clairvoyant) continue;
    for (std::size_t a = 0; a < n_abscissa; ++a) max_snapshots = std::max(max_snapshots, snapshots_for(m, a));
  }

  SweepResult result;
  result.kind = spec.kind;
  result.abscissa = spec.abscissa;
  result.num_trials = n_trials;
  for (int t = 0; t < n_trials; ++t) result.seeds.push_back(trial_seed(spec.master_seed, t));
  result.curves.resize(n_methods);
  for (std::size_t m = 0; m < n_methods; ++m) {
    result.curves[m].method = spec.methods[m].method;
    result.curves[m].samples_db.assign(n_abscissa, std::vector<double>(static_cast<std::size_t>(n_trials), kNaN));
  }

  // The clairvoyant filter needs no training data; evaluate it once per abscissa.
  for (std::size_t m = 0; m < n_methods; ++m) {
    if (spec.methods[m].method != Method::Clairvoyant) continue;
    for (std::size_t a = 0; a < n_abscissa; ++a) {
      double loss = kNaN;
      try {
        const FilterWeights w = design_filter(spec.methods[m], CMatrix(), basis_at(a), cov, beta);
        loss = scnr_loss_db(w.full, basis_at(a).target_steering(), cov.matrix, cov.noise_power);
      } catch (const std::exception&) {
      }
      std::fill(result.curves[m].samples_db[a].begin(), result.curves[m].samples_db[a].end(), loss);
    }
  }

#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < n_trials; ++t) {
    CMatrix data;
    try {
      data = generate_snapshots(cov, max_snapshots, result.seeds[static_cast<std::size_t>(t)]).data;
    } catch (const std::exception&) {
      continue;
    }
    for (std::size_t a = 0; a < n_abscissa; ++a) {
      const BeamDopplerBasis& basis = basis_at(a);
      for (std::size_t m = 0; m < n_methods; ++m) {
        if (spec.methods[m].method == Method::Clairvoyant) continue;
        double loss = kNaN;
        try {
          const FilterWeights w =
              design_filter(spec.methods[m], data.leftCols(snapshots_for(m, a)), basis, cov, beta);
          loss = scnr_loss_db(w.full, basis.target_steering(), cov.matrix, cov.noise_power);
        } catch (const std::exception&) {
        }
        result.curves[m].samples_db[a][static_cast<std::size_t>(t)] = loss;
      }
    }
  }

  for (auto& c : result.curves) summarize(c);
  return result;
}

SweepResult run_snapshot_sweep(const ExperimentSpec& spec) {
  if (spec.kind != SweepKind::Snapshots) throw std::invalid_argument("run_snapshot_sweep: sweep is not over snapshots");
  return run_sweep(spec);
}

SweepResult run_doppler_sweep(const ExperimentSpec& spec) {
  if (spec.kind != SweepKind::Doppler) throw std::invalid_argument("run_doppler_sweep: sweep is not over Doppler");
  return run_sweep(spec);
}

WeightMap export_weight_map(const FilterWeights& weights, const BeamDopplerBasis& basis) {
  if (weights.method != Method::Scbds) throw std::invalid_argument("weight map requires SCBDS weights");
  require_same(weights.reduced.size(), basis.aux_count(), "export_weight_map weight length");
  WeightMap map;
  map.grid = RMatrix::Zero(basis.num_pulses(), basis.num_elements());
  for (long i = 0; i < weights.reduced.size(); ++i) {
    const Cell c = basis.aux_cell(i);
    map.grid(c.doppler, c.beam) = std::abs(weights.reduced(i));
  }
  map.max_amplitude = map.grid.maxCoeff();
  return map;
}

double significant_fraction(const CVector& w, double rel) {
  if (w.size() == 0) return 0.0;
  const double peak = w.cwiseAbs().maxCoeff();
  if (peak == 0) return 0.0;
  const auto count = (w.cwiseAbs().array() > rel * peak).count();
  return static_cast<double>(count) / static_cast<double>(w.size());
}

double ridge_overlap(const FilterWeights& weights, const BeamDopplerBasis& basis, double ridge_slope) {
  if (weights.method != Method::Scbds) throw std::invalid_argument("ridge overlap requires SCBDS weights");
  if (weights.support.empty()) return 0.0;
  const std::vector<Cell> ridge = ridge_cells(basis, ridge_slope);
  int near = 0;
  for (long i : weights.support) {
    const Cell c = basis.aux_cell(i);
    const bool hit = std::any_of(ridge.begin(), ridge.end(), [&](const Cell& r) {
      return cyclic_distance(c.doppler, r.doppler, basis.num_pulses()) <= 1 &&
             cyclic_distance(c.beam, r.beam, basis.num_elements()) <= 1;
    });
    if (hit) ++near;
  }
  return static_cast<double>(near) / static_cast<double>(weights.support.size());
}

}  // namespace stap
