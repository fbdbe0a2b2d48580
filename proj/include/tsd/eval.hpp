#pragma once

#include "tsd/solver.hpp"
#include "tsd/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tsd {

/// sqrt(mean((pred - truth)^2)); throws InputError on length mismatch.
double rmse(const Vector& y_pred, const Vector& y_true);

struct GraphParams {
  int k_neighbors = 10;
  int window_days = 30;
  int period_days = 365;
  std::optional<double> bandwidth;

  bool operator==(const GraphParams&) const = default;
};

struct CvOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  bool spatially_blocked = false;  // contiguous lat/lon blocks instead of random folds
  GraphParams graph;
};

struct CvResult {
  int best_index = -1;
  Hyperparams best;
  std::vector<double> mean_rmse;             // per grid config
  std::vector<int> fold_train_sizes;         // per fold
  std::vector<int> fold_laplacian_sizes;     // per fold; equals train size (no leakage)
  std::vector<std::string> notes;
};

/// Fold assignment over n samples: every sample lands in exactly one
/// validation fold. Random folds are a seeded shuffle; blocked folds are
/// contiguous chunks of the samples ordered by (latitude, longitude).
std::vector<int> make_folds(const ChemDataset& ds, int folds,
                            std::uint64_t seed, bool spatially_blocked);

/// Seeded k-fold search over a hyperparameter grid. Laplacians are built on
/// the training folds only; held-out samples are encoded against the fitted
/// dictionary and scored by RMSE. Diverging configs score +inf. Ties break
/// toward smaller l1 weights, then grid order.
CvResult cross_validate(const ChemDataset& ds,
                        const std::vector<Hyperparams>& grid,
                        const CvOptions& options);

struct ContinuityReport {
  struct MonthRow {
    int month = 0;  // 1..12
    int count = 0;
    double q25 = 0.0, q50 = 0.0, q75 = 0.0;  // undefined when count == 0
  };
  struct DistanceBin {
    double low_m = 0.0, high_m = 0.0;
    long count = 0;
    double mean_abs_diff = 0.0;
  };
  std::vector<MonthRow> months;   // always 12 rows
  std::vector<DistanceBin> bins;
  long pair_count = 0;
};

/// Per-month target quantiles plus binned pairwise |y_i - y_j| versus
/// haversine distance over a seeded subsample of at most `max_pairs` pairs.
ContinuityReport continuity_diagnostics(const ChemDataset& ds,
                                        std::uint64_t seed = 0,
                                        int distance_bins = 10,
                                        long max_pairs = 1000000);

struct CompareOptions {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  GraphParams graph;
};

struct MethodResult {
  std::string method;
  double train_rmse = 0.0;
  double test_rmse = 0.0;
  bool failed = false;
  std::string note;
};

/// One RMSE row per method on a shared seeded train/test split. Supported
/// methods: "tsdst", "lr_nmf", "dksvd", "ridge". A method failure is
/// recorded as +inf and the run continues.
std::vector<MethodResult> compare_methods(
    const ChemDataset& ds, const std::vector<std::string>& methods,
    const std::map<std::string, Hyperparams>& h_map,
    const CompareOptions& options);

}  // namespace tsd
