#include "tsd/eval.hpp"

#include "tsd/baselines.hpp"
#include "tsd/core.hpp"
#include "tsd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace tsd {

double rmse(const Vector& y_pred, const Vector& y_true) {
  if (y_pred.size() != y_true.size()) {
    throw InputError("rmse length mismatch: " + std::to_string(y_pred.size()) +
                     " vs " + std::to_string(y_true.size()));
  }
  if (y_pred.size() == 0) throw InputError("rmse needs at least one value");
  return std::sqrt((y_pred - y_true).squaredNorm() / double(y_pred.size()));
}

std::vector<int> make_folds(const ChemDataset& ds, int folds,
                            std::uint64_t seed, bool spatially_blocked) {
  const int n = ds.n_samples();
  if (folds < 2) throw InputError("cross-validation needs folds >= 2");
  if (folds > n) throw InputError("more folds than samples");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (spatially_blocked) {
    std::sort(order.begin(), order.end(), [&ds](int a, int b) {
      if (ds.latitude[a] != ds.latitude[b]) return ds.latitude[a] < ds.latitude[b];
      if (ds.longitude[a] != ds.longitude[b]) return ds.longitude[a] < ds.longitude[b];
      return a < b;
    });
  } else {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::vector<int> assignment(n, 0);
  for (int pos = 0; pos < n; ++pos) {
    // Random folds interleave; blocked folds take contiguous chunks of the
    // spatial ordering.
    int f = spatially_blocked
                ? std::min<int>(folds - 1, int(std::int64_t(pos) * folds / n))
                : pos % folds;
    assignment[order[pos]] = f;
  }
  return assignment;
}

namespace {

double l1_weight_sum(const Hyperparams& h) {
  return h.lambda_w_l1 + h.lambda_a_l1 + h.lambda_d_l1;
}

}  // namespace

CvResult cross_validate(const ChemDataset& ds,
                        const std::vector<Hyperparams>& grid,
                        const CvOptions& options) {
  if (grid.empty()) throw InputError("cross-validation grid is empty");
  ds.validate();
  const int n = ds.n_samples();
  std::vector<int> fold_of = make_folds(ds, options.folds, options.seed,
                                        options.spatially_blocked);

  CvResult result;
  result.mean_rmse.assign(grid.size(), 0.0);
  result.fold_train_sizes.assign(options.folds, 0);
  result.fold_laplacian_sizes.assign(options.folds, 0);

  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double total = 0.0;
    bool failed = false;
    for (int f = 0; f < options.folds && !failed; ++f) {
      std::vector<int> train_idx, val_idx;
      for (int i = 0; i < n; ++i) {
        (fold_of[i] == f ? val_idx : train_idx).push_back(i);
      }
      ChemDataset train = ds.subset(train_idx);
      ChemDataset val = ds.subset(val_idx);
      try {
        GraphLaplacian ls = spatial_laplacian(train.latitude, train.longitude,
                                              options.graph.k_neighbors,
                                              options.graph.bandwidth);
        GraphLaplacian lt = temporal_laplacian(train.timestamp,
                                               options.graph.window_days,
                                               options.graph.period_days);
        if (c == 0) {
          result.fold_train_sizes[f] = train.n_samples();
          result.fold_laplacian_sizes[f] = ls.n;
        }
        auto [model, report] = fit(train, grid[c], ls, lt);
        Matrix codes = encode(val.features, model, grid[c]);
        total += rmse(predict(model, codes), val.target);
      } catch (const std::exception& e) {
        failed = true;
        result.notes.push_back("config " + std::to_string(c) + " fold " +
                               std::to_string(f) + " failed: " + e.what());
      }
    }
    result.mean_rmse[c] = failed ? inf : total / options.folds;
  }

  result.best_index = 0;
  for (std::size_t c = 1; c < grid.size(); ++c) {
    double cur = result.mean_rmse[c];
    double best = result.mean_rmse[result.best_index];
    if (cur < best ||
        (cur == best &&
         l1_weight_sum(grid[c]) < l1_weight_sum(grid[result.best_index]))) {
      result.best_index = static_cast<int>(c);
    }
  }
  result.best = grid[result.best_index];
  return result;
}

ContinuityReport continuity_diagnostics(const ChemDataset& ds,
                                        std::uint64_t seed, int distance_bins,
                                        long max_pairs) {
  ds.validate();
  if (distance_bins < 1) throw InputError("need at least one distance bin");
  const int n = ds.n_samples();
  ContinuityReport report;

  // Per-month quantiles (type-7 interpolation).
  std::vector<std::vector<double>> by_month(13);
  for (int i = 0; i < n; ++i) {
    by_month[unsigned(ds.timestamp[i].month())].push_back(ds.target[i]);
  }
  auto quantile = [](std::vector<double>& values, double p) {
    double h = (values.size() - 1) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    double frac = h - double(lo);
    double v = values[lo];
    if (lo + 1 < values.size()) v += frac * (values[lo + 1] - values[lo]);
    return v;
  };
  for (int month = 1; month <= 12; ++month) {
    ContinuityReport::MonthRow row;
    row.month = month;
    auto& values = by_month[month];
    row.count = static_cast<int>(values.size());
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      row.q25 = quantile(values, 0.25);
      row.q50 = quantile(values, 0.50);
      row.q75 = quantile(values, 0.75);
    }
    report.months.push_back(row);
  }

  // Pairwise |y_i - y_j| against haversine distance, over all pairs or a
  // seeded subsample.
  std::vector<std::pair<double, double>> pairs;  // (distance, |dy|)
  const long total_pairs = long(n) * (n - 1) / 2;
  if (total_pairs <= max_pairs) {
    pairs.reserve(total_pairs);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double d = haversine_m(ds.latitude[i], ds.longitude[i], ds.latitude[j],
                               ds.longitude[j]);
        pairs.emplace_back(d, std::abs(ds.target[i] - ds.target[j]));
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    pairs.reserve(max_pairs);
    while (static_cast<long>(pairs.size()) < max_pairs) {
      int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      double d = haversine_m(ds.latitude[i], ds.longitude[i], ds.latitude[j],
                             ds.longitude[j]);
      pairs.emplace_back(d, std::abs(ds.target[i] - ds.target[j]));
    }
  }
  report.pair_count = static_cast<long>(pairs.size());

  double d_max = 0.0;
  for (const auto& p : pairs) d_max = std::max(d_max, p.first);
  std::vector<long> counts(distance_bins, 0);
  std::vector<double> sums(distance_bins, 0.0);
  for (const auto& p : pairs) {
    int b = d_max > 0.0
                ? std::min(distance_bins - 1, int(p.first / d_max * distance_bins))
                : 0;
    ++counts[b];
    sums[b] += p.second;
  }
  for (int b = 0; b < distance_bins; ++b) {
    ContinuityReport::DistanceBin bin;
    bin.low_m = d_max * b / distance_bins;
    bin.high_m = d_max * (b + 1) / distance_bins;
    bin.count = counts[b];
    bin.mean_abs_diff = counts[b] > 0 ? sums[b] / counts[b] : 0.0;
    report.bins.push_back(bin);
  }
  return report;
}

std::vector<MethodResult> compare_methods(
    const ChemDataset& ds, const std::vector<std::string>& methods,
    const std::map<std::string, Hyperparams>& h_map,
    const CompareOptions& options) {
  ds.validate();
  const int n = ds.n_samples();
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw InputError("train_fraction must be in (0, 1)");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  std::shuffle(order.begin(), order.end(), rng);
  int n_train = std::clamp(int(std::lround(options.train_fraction * n)), 1, n - 1);
  std::vector<int> train_idx(order.begin(), order.begin() + n_train);
  std::vector<int> test_idx(order.begin() + n_train, order.end());
  ChemDataset train = ds.subset(train_idx);
  ChemDataset test = ds.subset(test_idx);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<MethodResult> results;
  for (const auto& method : methods) {
    MethodResult res;
    res.method = method;
    Hyperparams h;
    if (auto it = h_map.find(method); it != h_map.end()) h = it->second;
    try {
      if (method == "tsdst") {
        GraphLaplacian ls = spatial_laplacian(train.latitude, train.longitude,
                                              options.graph.k_neighbors,
                                              options.graph.bandwidth);
        GraphLaplacian lt = temporal_laplacian(train.timestamp,
                                               options.graph.window_days,
                                               options.graph.period_days);
        auto [model, report] = fit(train, h, ls, lt);
        res.train_rmse = report.train_rmse;
        Matrix codes = encode(test.features, model, h);
        res.test_rmse = rmse(predict(model, codes), test.target);
        if (!report.converged) res.note = "fit stopped at max_iters";
      } else if (method == "lr_nmf" || method == "dksvd") {
        auto mode = method == "lr_nmf" ? StackedMode::lr_nmf : StackedMode::dksvd;
        BaselineModel model =
            fit_stacked(train.features, train.target, h.k_sources, mode, h);
        res.train_rmse = rmse(model.predict_training(), train.target);
        res.test_rmse = rmse(model.predict(test.features), test.target);
      } else if (method == "ridge") {
        Vector weights = ridge(train.features, train.target, h.lambda_w_l2);
        res.train_rmse = rmse(train.features * weights, train.target);
        res.test_rmse = rmse(test.features * weights, test.target);
      } else {
        throw InputError("unknown method '" + method + "'");
      }
    } catch (const std::exception& e) {
      res.failed = true;
      res.train_rmse = inf;
      res.test_rmse = inf;
      res.note = e.what();
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace tsd
