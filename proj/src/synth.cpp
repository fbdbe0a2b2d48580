#include "tsd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace tsd {

namespace {

double softplus(double v) { return v > 30.0 ? v : std::log1p(std::exp(v)); }

std::string zero_padded(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_samples < 2) throw InputError("synth needs n_samples >= 2");
  if (n_analytes < 1) throw InputError("synth needs n_analytes >= 1");
  if (k_sources < 1 || k_sources > std::min(n_samples, n_analytes)) {
    throw InputError("synth needs 1 <= k_sources <= min(n_samples, n_analytes)");
  }
  if (noise_std < 0.0) throw InputError("noise_std must be >= 0");
  if (!(smoothness > 0.0)) throw InputError("smoothness must be > 0");
  if (seasonal_amplitude < 0.0 || seasonal_amplitude > 1.0) {
    throw InputError("seasonal_amplitude must be in [0, 1]");
  }
  if (!(box_degrees > 0.0)) throw InputError("box_degrees must be > 0");
}

SynthData generate(const SynthSpec& spec) {
  spec.validate();
  const int n = spec.n_samples;
  const int m = spec.n_analytes;
  const int k = spec.k_sources;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Locations on the unit square, mapped into a small lat/lon box.
  Vector u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = unit(rng);
    v[i] = unit(rng);
  }

  // Sampling dates uniform over one (non-leap) year.
  std::uniform_int_distribution<int> day_offset(0, 364);
  std::vector<Date> dates;
  dates.reserve(n);
  const auto year_start =
      std::chrono::sys_days{std::chrono::year{2011} / std::chrono::January / 1};
  for (int i = 0; i < n; ++i) {
    dates.push_back(Date{year_start + std::chrono::days{day_offset(rng)}});
  }

  // Dictionary with disjoint dominant-analyte blocks: analyte j belongs to
  // source j*k/m, where its concentration is large; elsewhere small.
  Matrix d_true(k, m);
  for (int kk = 0; kk < k; ++kk) {
    for (int j = 0; j < m; ++j) {
      bool dominant = (j * k) / m == kk;
      d_true(kk, j) = dominant ? 1.0 + unit(rng) : 0.1 * unit(rng);
    }
  }

  // Smooth coefficient fields: a few signed Gaussian bumps per source,
  // pushed through softplus to stay strictly positive.
  constexpr int kBumps = 4;
  Matrix a_true(n, k);
  for (int kk = 0; kk < k; ++kk) {
    double cu[kBumps], cv[kBumps], coef[kBumps];
    for (int b = 0; b < kBumps; ++b) {
      cu[b] = unit(rng);
      cv[b] = unit(rng);
      coef[b] = -2.0 + 4.0 * unit(rng);
    }
    const double denom = 2.0 * spec.smoothness * spec.smoothness;
    for (int i = 0; i < n; ++i) {
      double field = 0.0;
      for (int b = 0; b < kBumps; ++b) {
        double du = u[i] - cu[b];
        double dv = v[i] - cv[b];
        field += coef[b] * std::exp(-(du * du + dv * dv) / denom);
      }
      a_true(i, kk) = softplus(field);
    }
  }

  // Seasonal modulation of source 0 over day of year.
  if (spec.seasonal_amplitude > 0.0) {
    for (int i = 0; i < n; ++i) {
      double phase = 2.0 * std::numbers::pi * day_of_year(dates[i]) / 365.0;
      a_true(i, 0) *= 1.0 + spec.seasonal_amplitude * std::sin(phase);
    }
  }

  // Mixed-sign prediction weights.
  Vector w_true(k);
  for (int kk = 0; kk < k; ++kk) {
    double magnitude = 0.5 + unit(rng);
    w_true[kk] = (kk % 2 == 0) ? magnitude : -magnitude;
  }

  Matrix x = a_true * d_true;
  Vector y = a_true * w_true;
  if (spec.noise_std > 0.0) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) x(i, j) += spec.noise_std * gauss(rng);
    }
    for (int i = 0; i < n; ++i) y[i] += spec.noise_std * gauss(rng);
    x = x.cwiseMax(0.0);  // keep the feature invariant under noise
  }

  SynthData data;
  data.a_true = std::move(a_true);
  data.d_true = std::move(d_true);
  data.w_true = std::move(w_true);

  ChemDataset& ds = data.dataset;
  ds.features = std::move(x);
  ds.target = std::move(y);
  ds.latitude = spec.lat_origin + spec.box_degrees * u.array();
  ds.longitude = spec.lon_origin + spec.box_degrees * v.array();
  ds.timestamp = std::move(dates);
  ds.target_name = "target";
  ds.analyte_names.reserve(m);
  const int name_width = m >= 100 ? 3 : 2;
  for (int j = 0; j < m; ++j) {
    ds.analyte_names.push_back("analyte_" + zero_padded(j + 1, name_width));
  }
  ds.sample_ids.reserve(n);
  const int id_width = std::max(4, static_cast<int>(std::to_string(n).size()));
  for (int i = 0; i < n; ++i) {
    ds.sample_ids.push_back("s" + zero_padded(i + 1, id_width));
  }
  // Generated features are already on a sane scale; record an identity
  // transform so downstream encode paths can re-apply it.
  ds.preprocess.scaling = Scaling::none;
  ds.preprocess.scale_params.assign(m, {0.0, 1.0});
  ds.validate();
  return data;
}

namespace {

// Assignment minimizing total cost, O(n^3) potentials formulation.
std::vector<int> min_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j]) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

}  // namespace

std::vector<int> max_assignment(const Matrix& score) {
  if (score.rows() != score.cols()) {
    throw InputError("assignment needs a square score matrix");
  }
  return min_assignment(-score);
}

SourceMatch match_sources(const Matrix& d_learned, const Matrix& d_true) {
  if (d_learned.rows() != d_true.rows() || d_learned.cols() != d_true.cols()) {
    throw InputError("match_sources needs equally shaped dictionaries");
  }
  const int k = static_cast<int>(d_learned.rows());
  Matrix cosine(k, k);
  for (int i = 0; i < k; ++i) {
    double ni = d_learned.row(i).norm();
    for (int j = 0; j < k; ++j) {
      double nj = d_true.row(j).norm();
      cosine(i, j) = (ni > 0.0 && nj > 0.0)
                         ? d_learned.row(i).dot(d_true.row(j)) / (ni * nj)
                         : 0.0;
    }
  }
  SourceMatch match;
  match.permutation = max_assignment(cosine);
  match.similarities.resize(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    match.similarities[i] = cosine(i, match.permutation[i]);
    total += match.similarities[i];
  }
  match.mean_similarity = k > 0 ? total / k : 0.0;
  return match;
}

}  // namespace tsd
