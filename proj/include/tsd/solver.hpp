#pragma once

#include "tsd/core.hpp"
#include "tsd/graph.hpp"
#include "tsd/types.hpp"

#include <string>
#include <vector>

namespace tsd {

/// sign(v) * max(|v| - t, 0), elementwise.
double soft_threshold(double v, double t);
Matrix soft_threshold(const Matrix& v, double t);
Vector soft_threshold(const Vector& v, double t);

/// Block-ADMM state in scaled-dual form. W carries one l1 split; D and A
/// each carry a nonnegativity split (z*_1) and an l1 split (z*_2), matching
/// the five penalties rho_w, rho_d1, rho_d2, rho_a1, rho_a2.
struct AdmmState {
  Vector w, z_w, u_w;
  Matrix d, z_d1, u_d1, z_d2, u_d2;
  Matrix a, z_a1, u_a1, z_a2, u_a2;

  int iterations = 0;
  std::vector<double> objective_trace;

  // Frobenius norms of the primal residuals after the latest iteration.
  double r_w = 0.0, r_d1 = 0.0, r_d2 = 0.0, r_a1 = 0.0, r_a2 = 0.0;

  // Worst stationarity ratio ||grad|| / (1 + ||RHS||) seen per block
  // (filled when FitOptions.check_stationarity is on).
  double stat_w = 0.0, stat_d = 0.0, stat_a = 0.0;

  std::vector<std::string> notes;

  static AdmmState init(const Matrix& d0, const Matrix& a0, int k_sources);
};

struct FitOptions {
  bool fit_w = true;             // false freezes W = 0 (decompose mode)
  bool check_stationarity = false;
  double cg_rel_tol = 1e-10;     // must stay <= 1e-8
  int cg_max_iters = 0;          // 0 -> 10 * N
};

struct FitReport {
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  double train_rmse = 0.0;
  double test_rmse = -1.0;  // < 0 when no held-out evaluation was run

  // Final primal residual norms and the matching block norms.
  double residual_w = 0.0, residual_d1 = 0.0, residual_d2 = 0.0;
  double residual_a1 = 0.0, residual_a2 = 0.0;
  double norm_w = 0.0, norm_d = 0.0, norm_a = 0.0;

  double max_stationarity_ratio = 0.0;
  std::vector<double> source_similarities;  // synthetic runs only
  Hyperparams hyperparams;
  double wall_time_sec = 0.0;  // console-only; never serialized
  std::vector<std::string> notes;
};

/// One W block pass: closed-form ridge solve against the current A, then
/// the l1 proximal step on z_w and the scaled dual update.
void update_w(AdmmState& state, const Matrix& a, const Vector& y,
              const Hyperparams& h, bool check_stationarity = false);

/// One D block pass: a shared K x K factorization applied to all M columns,
/// then the nonnegativity and l1 proximal steps and dual updates.
void update_d(AdmmState& state, const Matrix& a, const Matrix& x,
              const Hyperparams& h, bool check_stationarity = false);

/// One A block pass. Stationarity is the Sylvester equation
///   (2 ls Ls + 2 lt Lt) A + A (W W' + lx D D' + c I) = RHS,
/// solved by eigendecomposition of the K x K right matrix and K independent
/// sparse SPD conjugate-gradient solves, then the proximal and dual steps.
void update_a(AdmmState& state, const Matrix& d, const Vector& w,
              const Matrix& x, const Vector& y,
              const GraphLaplacian& laplacian_s,
              const GraphLaplacian& laplacian_t, const Hyperparams& h,
              const FitOptions& options = {});

// Analytic gradients of the smooth block subobjectives (the quadratics each
// closed-form solve minimizes), exposed for finite-difference verification.
Vector grad_w_subobjective(const Vector& w, const Matrix& a, const Vector& y,
                           const Hyperparams& h, const Vector& z_w,
                           const Vector& u_w);
Matrix grad_d_subobjective(const Matrix& d, const Matrix& a, const Matrix& x,
                           const Hyperparams& h, const Matrix& z_d1,
                           const Matrix& u_d1, const Matrix& z_d2,
                           const Matrix& u_d2);
Matrix grad_a_subobjective(const Matrix& a, const Matrix& d, const Vector& w,
                           const Matrix& x, const Vector& y,
                           const GraphLaplacian& laplacian_s,
                           const GraphLaplacian& laplacian_t,
                           const Hyperparams& h, const Matrix& z_a1,
                           const Matrix& u_a1, const Matrix& z_a2,
                           const Matrix& u_a2);

/// Farthest-point row selection on X (seeded first pick, then max-min
/// Euclidean distance, ties to the lowest row index).
std::vector<int> farthest_point_rows(const Matrix& x, int k,
                                     std::uint64_t seed);

/// Full block-ADMM fit of the joint objective. Initializes D from
/// farthest-point rows of X, A by one nonnegative least-squares pass, W = 0;
/// loops update_w, update_d, update_a until the relative objective change
/// stays below tol for 3 consecutive iterations and all primal residuals
/// are below 1e-4 * (1 + ||block||), or until max_iters. The returned A and
/// D are the exactly nonnegative auxiliary copies.
std::pair<Factorization, FitReport> fit(const ChemDataset& ds,
                                        const Hyperparams& h,
                                        const GraphLaplacian& laplacian_s,
                                        const GraphLaplacian& laplacian_t,
                                        const FitOptions& options = {});

}  // namespace tsd
