#pragma once

#include "tsd/types.hpp"

#include <string>
#include <vector>

namespace tsd {

/// Multiplicative-update NMF minimizing ||X - AD||_F^2 with an epsilon
/// floor of 1e-12 in the denominators. The error trace (Frobenius residual
/// per iteration, leading entry at the initial point) is non-increasing.
struct NmfResult {
  Matrix A;  // N x K, >= 0
  Matrix D;  // K x M, >= 0
  std::vector<double> error_trace;
  int iterations = 0;
};

NmfResult nmf(const Matrix& x, int k, int max_iters, double tol,
              std::uint64_t seed);

enum class StackedMode { lr_nmf, dksvd };

/// Linear baseline learned on the stacked matrix [y_scaled | X | 1]:
/// lr_nmf factors it with nmf(); dksvd uses SVD-initialized regularized
/// alternating least squares with unit-norm atoms and no sign constraint.
/// The first dictionary column is the prediction weight vector W; the rest
/// (including the appended constant analyte) is the dictionary used to
/// encode new samples.
struct BaselineModel {
  StackedMode mode = StackedMode::lr_nmf;
  Matrix D;   // K x (M+1), last column is the constant-analyte atom weights
  Matrix A;   // N x K training codes
  Vector W;   // K, scaled-target weights
  double y_min = 0.0;
  double y_range = 0.0;  // 0 marks a constant training target
  double encode_ridge = 1e-10;  // dksvd encode regularization
  int iterations = 0;
  double final_error = 0.0;

  /// Training-set predictions, un-rescaled: (A W) * y_range + y_min.
  Vector predict_training() const;

  /// Encode new features (constant column appended internally) against D
  /// and un-rescale. lr_nmf encodes by nonnegative least squares, dksvd by
  /// a ridge solve.
  Vector predict(const Matrix& features_new) const;
};

BaselineModel fit_stacked(const Matrix& x, const Vector& y, int k,
                          StackedMode mode, const Hyperparams& h);

/// Ridge regression weights (X'X + lambda I)^{-1} X' y. When lambda = 0 and
/// X is rank-deficient a 1e-12 jitter is added and *rank_deficient is set.
Vector ridge(const Matrix& x, const Vector& y, double lambda_l2,
             bool* rank_deficient = nullptr);

}  // namespace tsd
