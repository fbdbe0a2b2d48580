#include "tsd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsd {

namespace {

constexpr double kResidualTol = 1e-4;   // primal residual bound at convergence
constexpr double kCondReport = 1e12;    // conditioning report threshold
constexpr int kConsecutiveForStop = 3;  // objective-change streak

void note_once(AdmmState& state, const std::string& msg) {
  if (std::find(state.notes.begin(), state.notes.end(), msg) == state.notes.end()) {
    state.notes.push_back(msg);
  }
}

void report_conditioning(AdmmState& state, const Matrix& system,
                         const char* block) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(system, Eigen::EigenvaluesOnly);
  double lo = eig.eigenvalues().minCoeff();
  double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > kCondReport) {
    note_once(state, std::string(block) +
                         "-update system condition estimate exceeds 1e12");
  }
}

struct CgOutcome {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Solves (lap + shift I) x = b for a sparse symmetric PSD lap and shift > 0,
// starting from the incoming x.
CgOutcome conjugate_gradient(const SparseMatrix& lap, double shift,
                             const Vector& b, Vector& x, double rel_tol,
                             int max_iters) {
  CgOutcome out;
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    x.setZero();
    out.converged = true;
    return out;
  }
  const double threshold = rel_tol * b_norm;
  Vector r = b - (lap * x + shift * x);
  double rs = r.squaredNorm();
  if (std::sqrt(rs) <= threshold) {
    out.rel_residual = std::sqrt(rs) / b_norm;
    out.converged = true;
    return out;
  }
  Vector p = r;
  Vector ap(b.size());
  while (out.iterations < max_iters) {
    ++out.iterations;
    ap.noalias() = lap * p;
    ap += shift * p;
    const double alpha = rs / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    const double rs_new = r.squaredNorm();
    if (std::sqrt(rs_new) <= threshold) {
      rs = rs_new;
      break;
    }
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  out.rel_residual = std::sqrt(rs) / b_norm;
  out.converged = std::sqrt(rs) <= threshold;
  return out;
}

}  // namespace

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

Matrix soft_threshold(const Matrix& v, double t) {
  return v.unaryExpr([t](double e) { return soft_threshold(e, t); });
}

Vector soft_threshold(const Vector& v, double t) {
  return v.unaryExpr([t](double e) { return soft_threshold(e, t); });
}

AdmmState AdmmState::init(const Matrix& d0, const Matrix& a0, int k_sources) {
  AdmmState st;
  st.w = Vector::Zero(k_sources);
  st.z_w = st.w;
  st.u_w = st.w;
  st.d = d0;
  st.z_d1 = d0;
  st.z_d2 = d0;
  st.u_d1 = Matrix::Zero(d0.rows(), d0.cols());
  st.u_d2 = st.u_d1;
  st.a = a0;
  st.z_a1 = a0;
  st.z_a2 = a0;
  st.u_a1 = Matrix::Zero(a0.rows(), a0.cols());
  st.u_a2 = st.u_a1;
  return st;
}

void update_w(AdmmState& state, const Matrix& a, const Vector& y,
              const Hyperparams& h, bool check_stationarity) {
  Matrix system = a.transpose() * a;
  system.diagonal().array() += h.lambda_w_l2 + h.rho_w;
  Vector rhs = a.transpose() * y + h.rho_w * (state.z_w - state.u_w);
  state.w = Eigen::LDLT<Matrix>(system).solve(rhs);
  report_conditioning(state, system, "w");
  if (check_stationarity) {
    double ratio = (system * state.w - rhs).norm() / (1.0 + rhs.norm());
    state.stat_w = std::max(state.stat_w, ratio);
  }

  state.z_w = soft_threshold((state.w + state.u_w).eval(), h.lambda_w_l1 / h.rho_w);
  Vector r = state.w - state.z_w;
  state.r_w = r.norm();
  state.u_w += r;
}

void update_d(AdmmState& state, const Matrix& a, const Matrix& x,
              const Hyperparams& h, bool check_stationarity) {
  Matrix system = h.lambda_x * (a.transpose() * a);
  system.diagonal().array() += h.lambda_d_l2 + h.rho_d1 + h.rho_d2;
  Matrix rhs = h.lambda_x * (a.transpose() * x) +
               h.rho_d1 * (state.z_d1 - state.u_d1) +
               h.rho_d2 * (state.z_d2 - state.u_d2);
  state.d = Eigen::LDLT<Matrix>(system).solve(rhs);
  report_conditioning(state, system, "d");
  if (check_stationarity) {
    double ratio = (system * state.d - rhs).norm() / (1.0 + rhs.norm());
    state.stat_d = std::max(state.stat_d, ratio);
  }

  state.z_d1 = (state.d + state.u_d1).cwiseMax(0.0);
  Matrix r1 = state.d - state.z_d1;
  state.r_d1 = r1.norm();
  state.u_d1 += r1;

  state.z_d2 = soft_threshold((state.d + state.u_d2).eval(), h.lambda_d_l1 / h.rho_d2);
  Matrix r2 = state.d - state.z_d2;
  state.r_d2 = r2.norm();
  state.u_d2 += r2;
}

void update_a(AdmmState& state, const Matrix& d, const Vector& w,
              const Matrix& x, const Vector& y,
              const GraphLaplacian& laplacian_s,
              const GraphLaplacian& laplacian_t, const Hyperparams& h,
              const FitOptions& options) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(d.rows());
  const double diag = h.lambda_a_l2 + h.rho_a1 + h.rho_a2;

  Matrix m_right = w * w.transpose();
  if (h.lambda_x != 0.0) m_right.noalias() += h.lambda_x * (d * d.transpose());
  m_right.diagonal().array() += diag;

  Matrix rhs = y * w.transpose() + h.rho_a1 * (state.z_a1 - state.u_a1) +
               h.rho_a2 * (state.z_a2 - state.u_a2);
  if (h.lambda_x != 0.0) rhs.noalias() += h.lambda_x * (x * d.transpose());

  const bool has_graph = h.lambda_s != 0.0 || h.lambda_t != 0.0;
  if (!has_graph) {
    // A m_right = rhs; no row coupling, a single K x K solve.
    state.a = Eigen::LDLT<Matrix>(m_right).solve(rhs.transpose()).transpose();
    report_conditioning(state, m_right, "a");
  } else {
    SparseMatrix lap(n, n);
    if (h.lambda_s != 0.0) lap += (2.0 * h.lambda_s) * laplacian_s.laplacian;
    if (h.lambda_t != 0.0) lap += (2.0 * h.lambda_t) * laplacian_t.laplacian;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(m_right);
    const Matrix& q = eig.eigenvectors();
    const Vector& eigenvalues = eig.eigenvalues();
    report_conditioning(state, m_right, "a");

    Matrix b = rhs * q;
    Matrix a_tilde = state.a * q;  // warm start in the rotated basis
    const int cg_cap = options.cg_max_iters > 0 ? options.cg_max_iters : 10 * n;

    std::vector<int> fallback_cols;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int col = 0; col < k; ++col) {
      Vector sol = a_tilde.col(col);
      auto out = conjugate_gradient(lap, eigenvalues[col], b.col(col), sol,
                                    options.cg_rel_tol, cg_cap);
      if (!out.converged) {
        // Nudge the diagonal and retry from the best iterate.
        out = conjugate_gradient(lap, eigenvalues[col] + 1e-10, b.col(col), sol,
                                 options.cg_rel_tol, cg_cap);
#ifdef _OPENMP
#pragma omp critical
#endif
        fallback_cols.push_back(col);
      }
      a_tilde.col(col) = sol;
    }
    for (int col : fallback_cols) {
      note_once(state, "a-update CG column " + std::to_string(col) +
                           " needed a 1e-10 diagonal shift");
    }
    state.a = a_tilde * q.transpose();

    if (options.check_stationarity) {
      Matrix grad = lap * state.a + state.a * m_right - rhs;
      state.stat_a =
          std::max(state.stat_a, grad.norm() / (1.0 + rhs.norm()));
    }
  }
  if (!has_graph && options.check_stationarity) {
    Matrix grad = state.a * m_right - rhs;
    state.stat_a = std::max(state.stat_a, grad.norm() / (1.0 + rhs.norm()));
  }

  state.z_a1 = (state.a + state.u_a1).cwiseMax(0.0);
  Matrix r1 = state.a - state.z_a1;
  state.r_a1 = r1.norm();
  state.u_a1 += r1;

  state.z_a2 = soft_threshold((state.a + state.u_a2).eval(), h.lambda_a_l1 / h.rho_a2);
  Matrix r2 = state.a - state.z_a2;
  state.r_a2 = r2.norm();
  state.u_a2 += r2;
}

Vector grad_w_subobjective(const Vector& w, const Matrix& a, const Vector& y,
                           const Hyperparams& h, const Vector& z_w,
                           const Vector& u_w) {
  return a.transpose() * (a * w - y) + h.lambda_w_l2 * w +
         h.rho_w * (w - z_w + u_w);
}

Matrix grad_d_subobjective(const Matrix& d, const Matrix& a, const Matrix& x,
                           const Hyperparams& h, const Matrix& z_d1,
                           const Matrix& u_d1, const Matrix& z_d2,
                           const Matrix& u_d2) {
  return h.lambda_x * (a.transpose() * (a * d - x)) + h.lambda_d_l2 * d +
         h.rho_d1 * (d - z_d1 + u_d1) + h.rho_d2 * (d - z_d2 + u_d2);
}

Matrix grad_a_subobjective(const Matrix& a, const Matrix& d, const Vector& w,
                           const Matrix& x, const Vector& y,
                           const GraphLaplacian& laplacian_s,
                           const GraphLaplacian& laplacian_t,
                           const Hyperparams& h, const Matrix& z_a1,
                           const Matrix& u_a1, const Matrix& z_a2,
                           const Matrix& u_a2) {
  Matrix grad = (a * w - y) * w.transpose() + h.lambda_a_l2 * a +
                h.rho_a1 * (a - z_a1 + u_a1) + h.rho_a2 * (a - z_a2 + u_a2);
  if (h.lambda_x != 0.0) {
    grad.noalias() += h.lambda_x * ((a * d - x) * d.transpose());
  }
  if (h.lambda_s != 0.0) {
    grad += (2.0 * h.lambda_s) * (laplacian_s.laplacian * a);
  }
  if (h.lambda_t != 0.0) {
    grad += (2.0 * h.lambda_t) * (laplacian_t.laplacian * a);
  }
  return grad;
}

std::vector<int> farthest_point_rows(const Matrix& x, int k,
                                     std::uint64_t seed) {
  const int n = static_cast<int>(x.rows());
  if (k > n) {
    throw InputError("cannot select " + std::to_string(k) +
                     " distinct rows from " + std::to_string(n) + " samples");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> selected;
  selected.reserve(k);
  std::vector<bool> used(n, false);
  int first = static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
  selected.push_back(first);
  used[first] = true;

  Vector min_dist(n);
  for (int i = 0; i < n; ++i) {
    min_dist[i] = (x.row(i) - x.row(first)).squaredNorm();
  }
  while (static_cast<int>(selected.size()) < k) {
    int best = -1;
    double best_dist = -1.0;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (min_dist[i] > best_dist) {  // strict: ties keep the lowest index
        best_dist = min_dist[i];
        best = i;
      }
    }
    selected.push_back(best);
    used[best] = true;
    for (int i = 0; i < n; ++i) {
      min_dist[i] = std::min(min_dist[i], (x.row(i) - x.row(best)).squaredNorm());
    }
  }
  return selected;
}

namespace {

bool residuals_within(const AdmmState& st) {
  auto ok = [](double r, double norm) { return r <= kResidualTol * (1.0 + norm); };
  const double wn = st.w.norm();
  const double dn = st.d.norm();
  const double an = st.a.norm();
  return ok(st.r_w, wn) && ok(st.r_d1, dn) && ok(st.r_d2, dn) &&
         ok(st.r_a1, an) && ok(st.r_a2, an);
}

}  // namespace

std::pair<Factorization, FitReport> fit(const ChemDataset& ds,
                                        const Hyperparams& h,
                                        const GraphLaplacian& laplacian_s,
                                        const GraphLaplacian& laplacian_t,
                                        const FitOptions& options) {
  const auto t_start = std::chrono::steady_clock::now();
  h.validate();
  ds.validate();
  const int n = ds.n_samples();
  const int k = h.k_sources;
  const Matrix& x = ds.features;
  const Vector& y = ds.target;
  if (laplacian_s.n != n || laplacian_t.n != n) {
    throw InputError("Laplacian size disagrees with the dataset");
  }

  // Data-anchored init: D from farthest-point rows of X, A by one
  // nonnegative least-squares pass, W = 0.
  std::vector<int> anchor = farthest_point_rows(x, k, h.seed);
  Matrix d0(k, x.cols());
  for (int j = 0; j < k; ++j) d0.row(j) = x.row(anchor[j]);
  Matrix a0(n, k);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    a0.row(i) = nnls_row(d0, x.row(i).transpose()).transpose();
  }

  AdmmState st = AdmmState::init(d0, a0, k);
  FitReport report;
  report.hyperparams = h;

  double prev_objective = std::numeric_limits<double>::infinity();
  int streak = 0;
  bool converged = false;
  for (int iter = 1; iter <= h.max_iters; ++iter) {
    if (options.fit_w) {
      update_w(st, st.a, y, h, options.check_stationarity);
    }
    update_d(st, st.a, x, h, options.check_stationarity);
    update_a(st, st.d, st.w, x, y, laplacian_s, laplacian_t, h, options);

    Factorization current{st.d, st.a, st.w};
    double value = objective(x, y, current, h, laplacian_s, laplacian_t);
    if (!std::isfinite(value)) {
      throw SolverError("objective became non-finite at iteration " +
                        std::to_string(iter) +
                        " (check hyperparameter scales)");
    }
    st.objective_trace.push_back(value);
    st.iterations = iter;

    double rel = std::abs(value - prev_objective) /
                 std::max(1.0, std::abs(prev_objective));
    streak = rel < h.tol ? streak + 1 : 0;
    prev_objective = value;
    if (streak >= kConsecutiveForStop && residuals_within(st)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    st.notes.push_back("stopped at max_iters=" + std::to_string(h.max_iters) +
                       " before reaching convergence");
  }

  report.objective_trace = st.objective_trace;
  report.iterations = st.iterations;
  report.converged = converged;
  report.residual_w = st.r_w;
  report.residual_d1 = st.r_d1;
  report.residual_d2 = st.r_d2;
  report.residual_a1 = st.r_a1;
  report.residual_a2 = st.r_a2;
  report.norm_w = st.w.norm();
  report.norm_d = st.d.norm();
  report.norm_a = st.a.norm();
  report.max_stationarity_ratio = std::max({st.stat_w, st.stat_d, st.stat_a});
  report.notes = st.notes;

  // Exactly feasible final factors: the nonnegative auxiliary copies.
  Factorization result{st.z_d1, st.z_a1, st.w};
  report.train_rmse =
      std::sqrt((result.A * result.W - y).squaredNorm() / double(n));
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return {std::move(result), report};
}

}  // namespace tsd
