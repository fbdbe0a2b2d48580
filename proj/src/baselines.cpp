#include "tsd/baselines.hpp"

#include "tsd/core.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tsd {

namespace {

constexpr double kDenomFloor = 1e-12;

Matrix random_uniform(int rows, int cols, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = scale * unit(rng);
  }
  return m;
}

}  // namespace

NmfResult nmf(const Matrix& x, int k, int max_iters, double tol,
              std::uint64_t seed) {
  if ((x.array() < 0.0).any()) {
    throw InputError("nmf input must be elementwise nonnegative");
  }
  if (k < 1) throw InputError("nmf needs k >= 1");
  const int n = static_cast<int>(x.rows());
  const int m = static_cast<int>(x.cols());

  std::mt19937_64 rng(seed);
  const double scale = std::sqrt(std::max(0.0, x.mean()) / double(k));
  NmfResult res;
  res.A = random_uniform(n, k, scale, rng);
  res.D = random_uniform(k, m, scale, rng);

  double err = (x - res.A * res.D).norm();
  res.error_trace.push_back(err);
  const double err0 = std::max(err, kDenomFloor);

  for (int iter = 1; iter <= max_iters; ++iter) {
    // A <- A .* (X D') ./ (A D D')
    {
      Matrix numer = x * res.D.transpose();
      Matrix denom = res.A * (res.D * res.D.transpose());
      res.A = res.A.cwiseProduct(numer.cwiseQuotient(denom.cwiseMax(kDenomFloor)));
    }
    // D <- D .* (A' X) ./ (A' A D)
    {
      Matrix numer = res.A.transpose() * x;
      Matrix denom = (res.A.transpose() * res.A) * res.D;
      res.D = res.D.cwiseProduct(numer.cwiseQuotient(denom.cwiseMax(kDenomFloor)));
    }
    double err_new = (x - res.A * res.D).norm();
    res.error_trace.push_back(err_new);
    res.iterations = iter;
    if (std::abs(err - err_new) / err0 < tol) break;
    err = err_new;
  }
  return res;
}

namespace {

// Stacked design shared by both baselines: scaled target, features, and a
// constant analyte absorbing the intercept.
Matrix stack(const Matrix& x, const Vector& y_scaled) {
  Matrix s(x.rows(), x.cols() + 2);
  s.col(0) = y_scaled;
  s.middleCols(1, x.cols()) = x;
  s.col(x.cols() + 1).setOnes();
  return s;
}

Matrix append_constant(const Matrix& x) {
  Matrix out(x.rows(), x.cols() + 1);
  out.leftCols(x.cols()) = x;
  out.col(x.cols()).setOnes();
  return out;
}

void normalize_atoms(Matrix& d_tilde, Matrix& a) {
  for (int j = 0; j < d_tilde.rows(); ++j) {
    double norm = d_tilde.row(j).norm();
    if (norm > kDenomFloor) {
      d_tilde.row(j) /= norm;
      a.col(j) *= norm;
    }
  }
}

}  // namespace

Vector BaselineModel::predict_training() const {
  return (A * W).array() * y_range + y_min;
}

Vector BaselineModel::predict(const Matrix& features_new) const {
  if (features_new.cols() + 1 != D.cols()) {
    throw InputError("new data has " + std::to_string(features_new.cols()) +
                     " analytes, model expects " + std::to_string(D.cols() - 1));
  }
  Matrix x_aug = append_constant(features_new);
  const int n = static_cast<int>(x_aug.rows());
  Matrix codes(n, D.rows());
  if (mode == StackedMode::lr_nmf) {
    for (int i = 0; i < n; ++i) {
      codes.row(i) = nnls_row(D, x_aug.row(i).transpose()).transpose();
    }
  } else {
    Matrix gram = D * D.transpose();
    gram.diagonal().array() += encode_ridge;
    Eigen::LDLT<Matrix> ldlt(gram);
    codes = ldlt.solve(D * x_aug.transpose()).transpose();
  }
  return (codes * W).array() * y_range + y_min;
}

BaselineModel fit_stacked(const Matrix& x, const Vector& y, int k,
                          StackedMode mode, const Hyperparams& h) {
  if (x.rows() != y.size()) throw InputError("feature/target length mismatch");
  if (mode == StackedMode::lr_nmf && (x.array() < 0.0).any()) {
    throw InputError("lr_nmf needs nonnegative features");
  }
  const int m = static_cast<int>(x.cols());

  BaselineModel model;
  model.mode = mode;
  model.y_min = y.minCoeff();
  model.y_range = y.maxCoeff() - model.y_min;
  Vector y_scaled = model.y_range > 0.0
                        ? Vector(((y.array() - model.y_min) / model.y_range))
                        : Vector(Vector::Zero(y.size()));
  Matrix s = stack(x, y_scaled);

  if (mode == StackedMode::lr_nmf) {
    NmfResult res = nmf(s, k, h.max_iters, h.tol, h.seed);
    model.A = std::move(res.A);
    Matrix d_tilde = std::move(res.D);
    model.W = d_tilde.col(0);
    model.D = d_tilde.rightCols(m + 1);
    model.iterations = res.iterations;
    model.final_error = res.error_trace.back();
    return model;
  }

  // dksvd: SVD-initialized alternating least squares, unit-norm atoms,
  // no sign constraint.
  if (k > std::min<int>(s.rows(), s.cols())) {
    throw InputError("dksvd needs k <= min(n_samples, n_analytes + 2)");
  }
  Eigen::BDCSVD<Matrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix a = svd.matrixU().leftCols(k) *
             svd.singularValues().head(k).asDiagonal();
  Matrix d_tilde = svd.matrixV().leftCols(k).transpose();
  normalize_atoms(d_tilde, a);

  const double mu_a = std::max(h.lambda_a_l2, 1e-10);
  const double mu_d = std::max(h.lambda_d_l2, 1e-10);
  double err = (s - a * d_tilde).norm();
  const double err0 = std::max(err, kDenomFloor);
  int iters = 0;
  for (int iter = 1; iter <= h.max_iters; ++iter) {
    {
      Matrix gram = d_tilde * d_tilde.transpose();
      gram.diagonal().array() += mu_a;
      a = Eigen::LDLT<Matrix>(gram).solve(d_tilde * s.transpose()).transpose();
    }
    {
      Matrix gram = a.transpose() * a;
      gram.diagonal().array() += mu_d;
      d_tilde = Eigen::LDLT<Matrix>(gram).solve(a.transpose() * s);
    }
    normalize_atoms(d_tilde, a);
    iters = iter;
    double err_new = (s - a * d_tilde).norm();
    if (std::abs(err - err_new) / err0 < h.tol) {
      err = err_new;
      break;
    }
    err = err_new;
  }
  model.A = std::move(a);
  model.W = d_tilde.col(0);
  model.D = d_tilde.rightCols(m + 1);
  model.encode_ridge = mu_a;
  model.iterations = iters;
  model.final_error = err;
  return model;
}

Vector ridge(const Matrix& x, const Vector& y, double lambda_l2,
             bool* rank_deficient) {
  if (x.rows() != y.size()) throw InputError("feature/target length mismatch");
  if (lambda_l2 < 0.0) throw InputError("ridge lambda must be >= 0");
  const int m = static_cast<int>(x.cols());
  Matrix gram = x.transpose() * x;
  gram.diagonal().array() += lambda_l2;
  bool jittered = false;
  if (lambda_l2 == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if (qr.rank() < m) {
      gram.diagonal().array() += 1e-12;
      jittered = true;
    }
  }
  if (rank_deficient) *rank_deficient = jittered;
  return Eigen::LDLT<Matrix>(gram).solve(x.transpose() * y);
}

}  // namespace tsd
