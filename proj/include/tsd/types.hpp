#pragma once

#include "tsd/common.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsd {

using Date = std::chrono::year_month_day;

/// Parses strict ISO-8601 `YYYY-MM-DD`. Throws InputError on malformed input.
Date parse_date(const std::string& s);
std::string format_date(const Date& d);

/// Day of year in [1, 365]; Feb-29 counts as its calendar position and
/// day 366 folds onto 365.
int day_of_year(const Date& d);

/// Circular distance between two days of year, wrapped at `period_days`.
int circular_day_distance(int doy_a, int doy_b, int period_days = 365);

enum class Scaling { minmax, log1p_minmax, none };
enum class MissingPolicy { drop_row, impute_median };

std::string to_string(Scaling s);
std::string to_string(MissingPolicy p);
Scaling scaling_from_string(const std::string& s);
MissingPolicy missing_policy_from_string(const std::string& s);

/// Preprocessing recipe plus the per-analyte parameters fitted by
/// `preprocess`, kept so that transforms can be inverted and re-applied to
/// new data at prediction time.
struct PreprocessSpec {
  Scaling scaling = Scaling::minmax;
  MissingPolicy missing = MissingPolicy::drop_row;

  // Fitted state (empty until preprocess() runs).
  struct AnalyteScale {
    double offset = 0.0;  // min of the (possibly log1p-ed) training column
    double range = 0.0;   // max - min; 0 marks a constant column
  };
  std::vector<AnalyteScale> scale_params;
  std::vector<double> medians;  // per-analyte, filled under impute_median

  bool fitted() const { return !scale_params.empty(); }

  /// Forward transform of one raw value in analyte column j.
  double transform(double v, int j) const;
  /// Inverse transform; round-trips within 1e-9 relative error.
  double inverse(double v, int j) const;
};

/// A preprocessed sample-by-analyte dataset. Immutable by convention once
/// built; all solver and evaluation entry points take it by const reference.
struct ChemDataset {
  Matrix features;  // N x M, nonnegative scaled concentrations
  Vector target;    // N, raw target-analyte concentration
  Vector latitude;  // N, decimal degrees
  Vector longitude; // N, decimal degrees
  std::vector<Date> timestamp;            // N
  std::vector<std::string> analyte_names; // M
  std::string target_name;
  std::vector<std::string> sample_ids;    // N
  PreprocessSpec preprocess;              // fitted spec used to build features

  int n_samples() const { return static_cast<int>(features.rows()); }
  int n_analytes() const { return static_cast<int>(features.cols()); }

  /// Enforces the dataset invariants (finite nonnegative features, vector
  /// lengths, no target leakage, N >= 2). Throws InputError.
  void validate() const;

  /// Row subset in the given order.
  ChemDataset subset(const std::vector<int>& indices) const;
};

/// The nine loss weights of the joint objective, the five ADMM penalties,
/// and solver controls.
struct Hyperparams {
  double lambda_x = 1.0;

  double lambda_w_l1 = 0.0;
  double lambda_w_l2 = 0.0;
  double lambda_a_l1 = 0.0;
  double lambda_a_l2 = 0.0;
  double lambda_d_l1 = 0.0;
  double lambda_d_l2 = 0.0;

  double lambda_s = 0.0;
  double lambda_t = 0.0;

  double rho_w = 1e-3;
  double rho_d1 = 1e-3;
  double rho_d2 = 1e-3;
  double rho_a1 = 1e-3;
  double rho_a2 = 1e-3;

  int k_sources = 3;
  int max_iters = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;  // lambdas >= 0, rhos > 0, K >= 1, tol > 0

  bool operator==(const Hyperparams&) const = default;
};

/// Learned model: source dictionary D (K x M), per-sample source
/// coefficients A (N x K), regression weights W (K).
struct Factorization {
  Matrix D;
  Matrix A;
  Vector W;

  int k_sources() const { return static_cast<int>(D.rows()); }

  /// Shape consistency against a dataset (or M/N counts); throws InputError.
  void validate_shapes(int n_samples, int n_analytes) const;
};

}  // namespace tsd
