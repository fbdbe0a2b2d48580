#include "tsd/core.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsd {

double objective(const Matrix& features, const Vector& target,
                 const Factorization& f, const Hyperparams& h,
                 const GraphLaplacian& laplacian_s,
                 const GraphLaplacian& laplacian_t) {
  const int n = static_cast<int>(features.rows());
  const int m = static_cast<int>(features.cols());
  f.validate_shapes(n, m);
  if (target.size() != n) throw InputError("target length mismatch");
  if (laplacian_s.n != n || laplacian_t.n != n) {
    throw InputError("Laplacian dimension mismatch");
  }
  if (!f.A.allFinite() || !f.D.allFinite() || !f.W.allFinite() ||
      !features.allFinite() || !target.allFinite()) {
    throw InputError("non-finite input to objective");
  }

  double value = 0.5 * (f.A * f.W - target).squaredNorm();
  if (h.lambda_x != 0.0) {
    value += 0.5 * h.lambda_x * (f.A * f.D - features).squaredNorm();
  }
  value += h.lambda_w_l1 * f.W.lpNorm<1>();
  value += 0.5 * h.lambda_w_l2 * f.W.squaredNorm();
  value += h.lambda_a_l1 * f.A.lpNorm<1>();
  value += 0.5 * h.lambda_a_l2 * f.A.squaredNorm();
  value += h.lambda_d_l1 * f.D.lpNorm<1>();
  value += 0.5 * h.lambda_d_l2 * f.D.squaredNorm();
  if (h.lambda_s != 0.0) value += h.lambda_s * laplacian_quadratic(laplacian_s, f.A);
  if (h.lambda_t != 0.0) value += h.lambda_t * laplacian_quadratic(laplacian_t, f.A);
  return value;
}

double objective(const ChemDataset& ds, const Factorization& f,
                 const Hyperparams& h, const GraphLaplacian& laplacian_s,
                 const GraphLaplacian& laplacian_t) {
  return objective(ds.features, ds.target, f, h, laplacian_s, laplacian_t);
}

Vector predict(const Factorization& f, const Matrix& a_new) {
  if (a_new.cols() != f.W.size()) {
    throw InputError("coefficient matrix has " + std::to_string(a_new.cols()) +
                     " columns, weight vector has " + std::to_string(f.W.size()));
  }
  return a_new * f.W;
}

namespace {

// Cyclic coordinate descent for one row of
//   min_{a>=0} lx/2 ||aD - x||^2 + l1 ||a||_1 + l2/2 ||a||^2.
// gram = lx * D D', lin = lx * D x. Returns the max KKT residual
// ||min(a, grad)||_inf reached.
double nnls_cd(const Matrix& gram, const Vector& lin, double l1, double l2,
               Vector& a, int max_sweeps, double kkt_tol) {
  const int k = static_cast<int>(a.size());
  double residual = 0.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int j = 0; j < k; ++j) {
      double denom = gram(j, j) + l2;
      double cross = gram.col(j).dot(a) - gram(j, j) * a[j];
      double numer = lin[j] - cross - l1;
      a[j] = denom > 0.0 ? std::max(0.0, numer / denom) : 0.0;
    }
    // KKT: grad >= -tol everywhere, and grad ~ 0 on the support.
    residual = 0.0;
    Vector grad = gram * a - lin + Vector::Constant(k, l1) + l2 * a;
    for (int j = 0; j < k; ++j) {
      residual = std::max(residual, std::abs(std::min(a[j], grad[j])));
    }
    if (residual <= kkt_tol) return residual;
  }
  return residual;
}

}  // namespace

Matrix encode(const Matrix& features_new, const Factorization& f,
              const Hyperparams& h, EncodeReport* report) {
  const int n = static_cast<int>(features_new.rows());
  const int k = f.k_sources();
  if (features_new.cols() != f.D.cols()) {
    throw InputError("new data has " + std::to_string(features_new.cols()) +
                     " analytes, dictionary has " + std::to_string(f.D.cols()));
  }

  const Matrix gram = h.lambda_x * (f.D * f.D.transpose());
  const Matrix lin_all = h.lambda_x * (features_new * f.D.transpose());  // N' x K

  constexpr double kKktTol = 1e-6;
  const int max_sweeps = 200 * std::max(1, k);

  Matrix a_out(n, k);
  int not_converged = 0;
  double worst = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : not_converged) \
    reduction(max : worst)
#endif
  for (int i = 0; i < n; ++i) {
    Vector a = Vector::Zero(k);
    double res = nnls_cd(gram, lin_all.row(i).transpose(), h.lambda_a_l1,
                         h.lambda_a_l2, a, max_sweeps, kKktTol);
    if (res > kKktTol) ++not_converged;
    worst = std::max(worst, res);
    a_out.row(i) = a.transpose();
  }
  if (report) {
    report->rows_not_converged = not_converged;
    report->converged = not_converged == 0;
    report->max_kkt_residual = worst;
  }
  return a_out;
}

Matrix encode(const ChemDataset& ds_new, const Factorization& f,
              const Hyperparams& h, EncodeReport* report) {
  return encode(ds_new.features, f, h, report);
}

Vector nnls_row(const Matrix& dictionary, const Vector& x) {
  const int k = static_cast<int>(dictionary.rows());
  Matrix gram = dictionary * dictionary.transpose();
  Vector lin = dictionary * x;
  Vector a = Vector::Zero(k);
  nnls_cd(gram, lin, 0.0, 0.0, a, 200 * std::max(1, k), 1e-10);
  return a;
}

}  // namespace tsd
