#pragma once

// Filter designers: clairvoyant MVDR, reduced-dimension MVDR over a fixed
// beam-Doppler region, the sparse beam-Doppler selection designer (R-FOCUSS
// on the auxiliary channels) and the l1 generalized sidelobe canceller.

#include "stap/beamdoppler.hpp"
#include "stap/numerics.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace stap {

enum class Method { Clairvoyant, Jdl, Stmb, Acr, Scbds, L1Gsc };

std::string_view to_string(Method method);
std::optional<Method> method_from_string(std::string_view name);

enum class InnerSolver {
  ConjugateGradient,  // matrix-free, on the smaller of the two normal-equation forms
  Cholesky,           // explicit normal matrix of the smaller form
};

struct SparseSolverConfig {
  double p = 0.8;                 // l_p exponent, (0, 1]
  double kappa = 3.0;             // penalty weight, in units of the per-channel noise power
  int max_iter = 500;
  double rel_change_tol = 1e-4;   // ||w_q - w_{q-1}|| / ||w_q||
  double prune_threshold = 0.05;  // fraction of max |w| below which entries leave the active set
  InnerSolver inner_solver = InnerSolver::ConjugateGradient;
  double cg_tol = 1e-10;

  void validate() const;
};

struct FilterWeights {
  CVector reduced;            // w~ in the designer's reduced domain
  CVector full;               // NM antenna-pulse weights
  std::vector<long> support;  // indices i with reduced(i) != 0
  Method method = Method::Clairvoyant;
};

struct SolveDiagnostics {
  int iterations_used = 0;
  std::vector<long> active_set_history;      // D_q: active entries entering iteration q
  std::vector<double> objective_history;     // after each iteration
  std::vector<std::uint64_t> cmacs_history;  // complex MACs spent in each update step
  std::vector<int> inner_iterations;         // CG iterations per update (0 for Cholesky)
  double final_rel_change = 0;
  bool converged = false;
  bool all_pruned = false;
  int incomplete_inner_solves = 0;           // CG runs that hit their iteration cap
};

struct SparseSolution {
  CVector w;
  SolveDiagnostics diagnostics;
};

struct DesignResult {
  FilterWeights weights;
  SolveDiagnostics diagnostics;
};

/// w = R^-1 s / (s^H R^-1 s).
FilterWeights mvdr_clairvoyant(const CMatrix& covariance, const CVector& steering);

/// Sample-matrix MVDR in the span of `region`. The diagonal load is
/// loading * ||t_j||^2 on channel j, i.e. `loading` is referred to the
/// antenna-pulse domain (sigma^2 gives noise-floor loading).
FilterWeights mvdr_reduced(const LPRegion& region, const CMatrix& snapshots, const CVector& steering,
                           double loading, Method tag = Method::Jdl);

/// Objective minimized by rfocuss: ||b - A w||^2 + (2 kappa / p) sum_i |w_i|^p.
double rfocuss_objective(const CMatrix& a, const CVector& b, const CVector& w, double kappa, double p);

/// Regularized FOCUSS. Each iteration solves the reweighted ridge
///   w = Pi A^H (A Pi A^H + kappa I)^-1 b,   Pi = diag(|w_prev|^(2-p))
/// on the active set, then permanently drops entries below
/// prune_threshold * max|w|. The first iterate (Pi = I) is the ridge
/// minimum-norm solution. With kappa = 0 there is no sparsity term and the
/// minimum-norm least-squares solution is returned directly.
SparseSolution rfocuss(const CMatrix& a, const CVector& b, const SparseSolverConfig& config);

/// Sparse beam-Doppler selection: d_l = s^H x_l against the auxiliary
/// channels T_aux^H X, both on unit-norm beams, solved by rfocuss. The
/// antenna-domain filter is s - T_aux w~.
DesignResult scbds_design(const CMatrix& snapshots, const BeamDopplerBasis& basis,
                          const SparseSolverConfig& config);

/// Orthogonal complement of s scaled to column norm ||s||: B^H s = 0,
/// B^H B = ||s||^2 I. Built from a Householder reflection of s.
CMatrix blocking_matrix(const CVector& steering);

/// l1-regularized GSC on the blocked channels B^H X. Runs the p = 1
/// reweighted ridge in the primal (NM-1)-dimensional form: the weighted
/// normal matrix is formed explicitly every iteration, as covariance-domain
/// sparsity-aware beamformers do, then solved by CG (or Cholesky).
/// `config.p` is ignored.
DesignResult l1_gsc_design(const CMatrix& snapshots, const CVector& steering, const SparseSolverConfig& config);

}  // namespace stap
