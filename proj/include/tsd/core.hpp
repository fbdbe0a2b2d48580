#pragma once

#include "tsd/graph.hpp"
#include "tsd/types.hpp"

namespace tsd {

/// Value of the full joint loss
///   1/2 ||AW - y||^2 + lx/2 ||AD - X||_F^2
///   + lw1 ||W||_1 + lw2/2 ||W||^2 + la1 ||A||_1 + la2/2 ||A||_F^2
///   + ld1 ||D||_1 + ld2/2 ||D||_F^2
///   + ls Tr(A' Ls A) + lt Tr(A' Lt A)
/// evaluated at the given factorization. Deterministic; throws InputError
/// on shape mismatch or non-finite input.
double objective(const Matrix& features, const Vector& target,
                 const Factorization& f, const Hyperparams& h,
                 const GraphLaplacian& laplacian_s,
                 const GraphLaplacian& laplacian_t);

double objective(const ChemDataset& ds, const Factorization& f,
                 const Hyperparams& h, const GraphLaplacian& laplacian_s,
                 const GraphLaplacian& laplacian_t);

/// Prediction head: y_hat = A_new * W.
Vector predict(const Factorization& f, const Matrix& a_new);

struct EncodeReport {
  bool converged = true;
  int rows_not_converged = 0;
  double max_kkt_residual = 0.0;
};

/// Out-of-sample coefficients: per sample solves
///   min_{a >= 0}  lx/2 ||aD - x||^2 + la1 ||a||_1 + la2/2 ||a||^2
/// by cyclic coordinate descent to KKT residual <= 1e-6. Held-out samples
/// carry no Laplacian terms. On hitting the sweep cap the best iterate is
/// returned and the report flags non-convergence.
Matrix encode(const Matrix& features_new, const Factorization& f,
              const Hyperparams& h, EncodeReport* report = nullptr);

Matrix encode(const ChemDataset& ds_new, const Factorization& f,
              const Hyperparams& h, EncodeReport* report = nullptr);

/// Single-row nonnegative least squares  min_{a>=0} 1/2||aD - x||^2
/// (the lx=1, l1=l2=0 case of encode); used for coefficient initialization.
Vector nnls_row(const Matrix& dictionary, const Vector& x);

}  // namespace tsd
