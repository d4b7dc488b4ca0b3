#include "stap/solvers.hpp"

#include "stap/kernels.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace stap {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames{{
    {Method::Clairvoyant, "clairvoyant"},
    {Method::Jdl, "jdl"},
    {Method::Stmb, "stmb"},
    {Method::Acr, "acr"},
    {Method::Scbds, "scbds"},
    {Method::L1Gsc, "l1gsc"},
}};

enum class Form { SmallerGram, ExplicitPrimal };

// CG iteration cap for an n-dimensional inner system. Exact arithmetic needs
// at most n steps; the slack absorbs rounding on ill-conditioned systems.
int cg_cap(long n) { return static_cast<int>(4 * n + 10); }

std::uint64_t u64(long v) { return static_cast<std::uint64_t>(v); }

// Cholesky-based solves are counted as n^3/6 + n^2 complex MACs.
std::uint64_t cholesky_cost(long n) { return u64(n) * u64(n) * u64(n) / 6 + u64(n) * u64(n); }

struct Update {
  CVector w;  // on the active set
  int inner_iterations = 0;
  bool incomplete = false;
};

// One reweighted ridge step on the active columns `as` (L x D):
//   w = Pi as^H (as Pi as^H + kappa I)^-1 b = (as^H as + kappa Pi^-1)^-1 as^H b.
Update reweighted_update(const CMatrix& as, const CVector& b, const RVector& pi, double kappa,
                         const SparseSolverConfig& config, Form form, FlopCounter& fc) {
  const long rows = as.rows();
  const long d = as.cols();
  const RVector sqrt_pi = pi.cwiseSqrt();
  const bool dual = form == Form::SmallerGram && d >= rows;
  Update out;

  // The normal matrix has rank <= min(D, L) plus the ridge, so CG terminates
  // in about that many steps whichever form is solved.
  const int cap = cg_cap(std::min(d, rows));

  if (config.inner_solver == InnerSolver::Cholesky) {
    const CMatrix scaled = as * sqrt_pi.asDiagonal();
    if (dual) {
      const CMatrix g = kernels::gram(scaled.adjoint());
      fc.add(u64(rows) * u64(rows + 1) / 2 * u64(d));
      const CVector z = hermitian_solve({g, b, kappa});
      fc.add(cholesky_cost(rows));
      out.w = pi.asDiagonal() * (as.adjoint() * z);
      fc.add(u64(d) * u64(rows));
    } else {
      const CMatrix g = kernels::gram(scaled);
      fc.add(u64(d) * u64(d + 1) / 2 * u64(rows));
      const CVector rhs = scaled.adjoint() * b;
      fc.add(u64(d) * u64(rows));
      const CVector u = hermitian_solve({g, rhs, kappa});
      fc.add(cholesky_cost(d));
      out.w = sqrt_pi.asDiagonal() * u;
    }
    return out;
  }

  if (form == Form::ExplicitPrimal) {
    const CMatrix scaled = as * sqrt_pi.asDiagonal();
    const CMatrix g = kernels::gram(scaled);
    fc.add(u64(d) * u64(d + 1) / 2 * u64(rows));
    const CVector rhs = scaled.adjoint() * b;
    fc.add(u64(d) * u64(rows));
    HermitianOperator op = [&](const CVector& x, CVector& y) {
      y.noalias() = g * x;
      fc.add(u64(d) * u64(d));
    };
    const CgResult cg = cg_regularized_solve(op, rhs, kappa, config.cg_tol, cap, &fc);
    out.w = sqrt_pi.asDiagonal() * cg.x;
    out.inner_iterations = cg.iterations;
    out.incomplete = !cg.converged;
    return out;
  }

  const std::uint64_t apply_cost = 2 * u64(d) * u64(rows);
  if (dual) {
    CVector tmp(d);
    HermitianOperator op = [&](const CVector& x, CVector& y) {
      tmp.noalias() = as.adjoint() * x;
      tmp = pi.asDiagonal() * tmp;
      y.noalias() = as * tmp;
      fc.add(apply_cost);
    };
    const CgResult cg = cg_regularized_solve(op, b, kappa, config.cg_tol, cap, &fc);
    out.w = pi.asDiagonal() * (as.adjoint() * cg.x);
    fc.add(u64(d) * u64(rows));
    out.inner_iterations = cg.iterations;
    out.incomplete = !cg.converged;
  } else {
    CVector tmp(rows);
    HermitianOperator op = [&](const CVector& x, CVector& y) {
      tmp.noalias() = as * (sqrt_pi.asDiagonal() * x);
      y.noalias() = as.adjoint() * tmp;
      y = sqrt_pi.asDiagonal() * y;
      fc.add(apply_cost);
    };
    const CVector rhs = sqrt_pi.asDiagonal() * (as.adjoint() * b);
    fc.add(u64(d) * u64(rows));
    const CgResult cg = cg_regularized_solve(op, rhs, kappa, config.cg_tol, cap, &fc);
    out.w = sqrt_pi.asDiagonal() * cg.x;
    out.inner_iterations = cg.iterations;
    out.incomplete = !cg.converged;
  }
  return out;
}

SparseSolution reweighted_ridge(const CMatrix& a, const CVector& b, const SparseSolverConfig& config, double p,
                                Form form) {
  config.validate();
  require_same(a.rows(), b.size(), "rfocuss: rows of A vs length of b");
  if (a.size() == 0) throw DimensionError("rfocuss: empty sensing matrix");
  if (!a.allFinite() || !b.allFinite()) throw std::invalid_argument("rfocuss: non-finite input");

  const long n = a.cols();
  SparseSolution sol;
  auto& diag = sol.diagnostics;

  if (config.kappa == 0) {
    sol.w = a.completeOrthogonalDecomposition().solve(b);
    diag.iterations_used = 1;
    diag.active_set_history.push_back(n);
    diag.objective_history.push_back((b - a * sol.w).squaredNorm());
    diag.cmacs_history.push_back(0);
    diag.inner_iterations.push_back(0);
    diag.converged = true;
    return sol;
  }

  std::vector<long> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), 0L);
  RVector pi = RVector::Ones(n);
  CVector w = CVector::Zero(n);
  CMatrix as(a.rows(), n);

  for (int q = 1; q <= config.max_iter; ++q) {
    const long d = static_cast<long>(active.size());
    as.resize(a.rows(), d);
    for (long j = 0; j < d; ++j) as.col(j) = a.col(active[static_cast<std::size_t>(j)]);

    FlopCounter fc;
    const Update step = reweighted_update(as, b, pi, config.kappa, config, form, fc);

    CVector next = CVector::Zero(n);
    for (long j = 0; j < d; ++j) next(active[static_cast<std::size_t>(j)]) = step.w(j);
    const double next_norm = next.norm();
    const double rel_change = next_norm > 0 ? (next - w).norm() / next_norm : 0.0;
    w = std::move(next);

    const double threshold = config.prune_threshold * w.cwiseAbs().maxCoeff();
    std::vector<long> kept;
    kept.reserve(active.size());
    for (long idx : active) {
      const double mag = std::abs(w(idx));
      if (mag > 0 && mag >= threshold) {
        kept.push_back(idx);
      } else {
        w(idx) = 0;
      }
    }

    diag.iterations_used = q;
    diag.active_set_history.push_back(d);
    diag.cmacs_history.push_back(fc.cmacs);
    diag.inner_iterations.push_back(step.inner_iterations);
    if (step.incomplete) ++diag.incomplete_inner_solves;
    diag.objective_history.push_back(rfocuss_objective(a, b, w, config.kappa, p));
    diag.final_rel_change = rel_change;

    if (kept.empty()) {
      diag.all_pruned = true;
      w.setZero();
      break;
    }
    active = std::move(kept);
    pi.resize(static_cast<long>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) {
      pi(static_cast<long>(j)) = std::pow(std::abs(w(active[j])), 2.0 - p);
    }
    if (q >= 2 && rel_change <= config.rel_change_tol) {
      diag.converged = true;
      break;
    }
  }
  sol.w = std::move(w);
  return sol;
}

std::vector<long> support_of(const CVector& w) {
  std::vector<long> out;
  for (long i = 0; i < w.size(); ++i) {
    if (w(i) != cplx(0.0, 0.0)) out.push_back(i);
  }
  return out;
}

// Conjugated main-channel outputs d_l^* = x_l^H s, scaled.
CVector main_channel_rhs(const CMatrix& snapshots, const CVector& steering, double scale) {
  return (snapshots.adjoint() * steering) * scale;
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

std::optional<Method> method_from_string(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

void SparseSolverConfig::validate() const {
  if (!(p > 0 && p <= 1)) throw std::invalid_argument("p must lie in (0, 1]");
  if (!(kappa >= 0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(rel_change_tol > 0)) throw std::invalid_argument("rel_change_tol must be > 0");
  if (!(prune_threshold > 0 && prune_threshold < 1)) {
    throw std::invalid_argument("prune_threshold must lie in (0, 1)");
  }
  if (!(cg_tol > 0)) throw std::invalid_argument("cg_tol must be > 0");
}

FilterWeights mvdr_clairvoyant(const CMatrix& covariance, const CVector& steering) {
  require_same(covariance.rows(), steering.size(), "mvdr_clairvoyant steering length");
  if (steering.norm() == 0) throw std::invalid_argument("mvdr_clairvoyant: zero steering vector");
  const CVector u = hermitian_solve({covariance, steering, 0.0});
  FilterWeights out;
  out.full = u / steering.dot(u);
  out.reduced = out.full;
  out.support = support_of(out.reduced);
  out.method = Method::Clairvoyant;
  return out;
}

FilterWeights mvdr_reduced(const LPRegion& region, const CMatrix& snapshots, const CVector& steering,
                           double loading, Method tag) {
  require_same(snapshots.rows(), region.selection.rows(), "mvdr_reduced snapshot length");
  require_same(steering.size(), region.selection.rows(), "mvdr_reduced steering length");
  if (snapshots.cols() < 1) throw std::invalid_argument("mvdr_reduced: no training snapshots");
  if (!(loading >= 0)) throw std::invalid_argument("mvdr_reduced: loading must be >= 0");

  const CMatrix reduced = kernels::adjoint_product(region.selection, snapshots);
  CMatrix cov = kernels::gram(reduced.adjoint()) / static_cast<double>(snapshots.cols());
  cov.diagonal().real() += loading * region.selection.colwise().squaredNorm().transpose();
  const CVector s_red = region.selection.adjoint() * steering;

  const CVector u = hermitian_solve({cov, s_red, 0.0});
  FilterWeights out;
  out.reduced = u / s_red.dot(u);
  out.full = region.selection * out.reduced;
  out.support = support_of(out.reduced);
  out.method = tag;
  return out;
}

double rfocuss_objective(const CMatrix& a, const CVector& b, const CVector& w, double kappa, double p) {
  const double fit = (b - a * w).squaredNorm();
  if (kappa == 0) return fit;
  const double penalty = w.cwiseAbs().array().pow(p).sum();
  return fit + 2.0 * kappa / p * penalty;
}

SparseSolution rfocuss(const CMatrix& a, const CVector& b, const SparseSolverConfig& config) {
  return reweighted_ridge(a, b, config, config.p, Form::SmallerGram);
}

DesignResult scbds_design(const CMatrix& snapshots, const BeamDopplerBasis& basis,
                          const SparseSolverConfig& config) {
  require_same(snapshots.rows(), basis.dimension(), "scbds_design snapshot length");
  if (snapshots.cols() < 1) throw std::invalid_argument("scbds_design: no training snapshots");
  const CVector s = basis.target_steering();
  const double scale = 1.0 / s.norm();

  const CMatrix sensing = aux_channels(snapshots, basis).adjoint() * scale;
  const CVector rhs = main_channel_rhs(snapshots, s, scale);
  SparseSolution sol = rfocuss(sensing, rhs, config);

  DesignResult out;
  out.weights.full = s - basis.aux_matrix() * sol.w;
  out.weights.reduced = std::move(sol.w);
  out.weights.support = support_of(out.weights.reduced);
  out.weights.method = Method::Scbds;
  out.diagnostics = std::move(sol.diagnostics);
  return out;
}

CMatrix blocking_matrix(const CVector& steering) {
  const long n = steering.size();
  const double norm = steering.norm();
  if (n < 2 || norm == 0) throw std::invalid_argument("blocking_matrix: need a nonzero vector of length >= 2");
  const Eigen::HouseholderQR<CMatrix> qr{CMatrix(steering)};
  const CMatrix q = qr.householderQ();
  return q.rightCols(n - 1) * norm;
}

DesignResult l1_gsc_design(const CMatrix& snapshots, const CVector& steering, const SparseSolverConfig& config) {
  require_same(snapshots.rows(), steering.size(), "l1_gsc_design snapshot length");
  if (snapshots.cols() < 1) throw std::invalid_argument("l1_gsc_design: no training snapshots");
  const double scale = 1.0 / steering.norm();
  const CMatrix blocking = blocking_matrix(steering);

  const CMatrix sensing = kernels::adjoint_product(blocking, snapshots).adjoint() * scale;
  const CVector rhs = main_channel_rhs(snapshots, steering, scale);
  SparseSolverConfig l1 = config;
  l1.p = 1.0;
  SparseSolution sol = reweighted_ridge(sensing, rhs, l1, 1.0, Form::ExplicitPrimal);

  DesignResult out;
  out.weights.full = steering - blocking * sol.w;
  out.weights.reduced = std::move(sol.w);
  out.weights.support = support_of(out.weights.reduced);
  out.weights.method = Method::L1Gsc;
  out.diagnostics = std::move(sol.diagnostics);
  return out;
}

}  // namespace stap
