#include "tsd/synth.hpp"

#include <doctest.h>

#include "test_util.hpp"
#include "tsd/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace tsd;

TEST_CASE("generate: noiseless data reproduces X = A*D* and a zero loss") {
  SynthSpec spec;
  spec.n_samples = 60;
  spec.n_analytes = 9;
  spec.k_sources = 3;
  spec.noise_std = 0.0;
  spec.seed = 5;
  SynthData data = generate(spec);
  CHECK((data.dataset.features - data.a_true * data.d_true).norm() == 0.0);

  Hyperparams h;
  h.lambda_x = 0.0;  // prediction term only
  Factorization truth{data.d_true, data.a_true, data.w_true};
  double v = objective(data.dataset.features, data.dataset.target, truth, h,
                       tsd_test::zero_laplacian(60), tsd_test::zero_laplacian(60));
  CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("generate: factors are nonnegative, weights mix signs") {
  SynthSpec spec;
  spec.n_samples = 80;
  spec.n_analytes = 10;
  spec.k_sources = 3;
  spec.seed = 11;
  SynthData data = generate(spec);
  CHECK((data.a_true.array() >= 0.0).all());
  CHECK((data.d_true.array() >= 0.0).all());
  CHECK((data.dataset.features.array() >= 0.0).all());
  CHECK(data.w_true.maxCoeff() > 0.0);
  CHECK(data.w_true.minCoeff() < 0.0);
}

TEST_CASE("generate: zero amplitude leaves monthly coefficient means flat") {
  SynthSpec spec;
  spec.n_samples = 2000;
  spec.n_analytes = 8;
  spec.k_sources = 2;
  spec.noise_std = 0.0;
  spec.seasonal_amplitude = 0.0;
  spec.smoothness = 2.0;  // nearly constant fields isolate the seasonal term
  spec.seed = 13;
  SynthData data = generate(spec);

  double sums[13] = {0};
  int counts[13] = {0};
  for (int i = 0; i < spec.n_samples; ++i) {
    unsigned m = unsigned(data.dataset.timestamp[i].month());
    sums[m] += data.a_true(i, 0);
    counts[m] += 1;
  }
  std::vector<double> means;
  for (int m = 1; m <= 12; ++m) {
    REQUIRE(counts[m] > 0);
    means.push_back(sums[m] / counts[m]);
  }
  double lo = *std::min_element(means.begin(), means.end());
  double hi = *std::max_element(means.begin(), means.end());
  double mid = 0.5 * (lo + hi);
  CHECK((hi - lo) / mid <= 0.2);  // sampling noise only
}

TEST_CASE("generate: fixed seed reproduces the dataset exactly") {
  SynthSpec spec;
  spec.n_samples = 50;
  spec.n_analytes = 7;
  spec.k_sources = 2;
  spec.noise_std = 0.02;
  spec.seed = 99;
  SynthData a = generate(spec);
  SynthData b = generate(spec);
  CHECK(a.dataset.features == b.dataset.features);
  CHECK(a.dataset.target == b.dataset.target);
  CHECK(a.dataset.latitude == b.dataset.latitude);
  CHECK(a.a_true == b.a_true);
  CHECK(a.d_true == b.d_true);
  CHECK(a.w_true == b.w_true);
  for (int i = 0; i < 50; ++i) {
    CHECK(a.dataset.timestamp[i] == b.dataset.timestamp[i]);
  }
}

TEST_CASE("generate: nearby samples have closer targets than distant ones") {
  SynthSpec spec;
  spec.n_samples = 400;
  spec.n_analytes = 10;
  spec.k_sources = 3;
  spec.noise_std = 0.0;
  spec.seasonal_amplitude = 0.0;
  spec.seed = 17;
  SynthData data = generate(spec);
  const auto& ds = data.dataset;

  double near_sum = 0.0, far_sum = 0.0;
  long near_count = 0, far_count = 0;
  for (int i = 0; i < spec.n_samples; ++i) {
    double ui = (ds.latitude[i] - spec.lat_origin) / spec.box_degrees;
    double vi = (ds.longitude[i] - spec.lon_origin) / spec.box_degrees;
    for (int j = i + 1; j < spec.n_samples; ++j) {
      double uj = (ds.latitude[j] - spec.lat_origin) / spec.box_degrees;
      double vj = (ds.longitude[j] - spec.lon_origin) / spec.box_degrees;
      double dist = std::hypot(ui - uj, vi - vj);
      double dy = std::abs(ds.target[i] - ds.target[j]);
      if (dist < 0.1) {
        near_sum += dy;
        ++near_count;
      } else if (dist > 0.5) {
        far_sum += dy;
        ++far_count;
      }
    }
  }
  REQUIRE(near_count > 0);
  REQUIRE(far_count > 0);
  CHECK(near_sum / near_count < far_sum / far_count);
}

TEST_CASE("match_sources: permuted and rescaled rows all score 1") {
  std::mt19937_64 rng(19);
  Matrix d = tsd_test::random_matrix(4, 6, rng, 0.1, 1.0);
  std::vector<int> perm = {2, 0, 3, 1};
  Matrix shuffled(4, 6);
  for (int i = 0; i < 4; ++i) shuffled.row(i) = 3.7 * d.row(perm[i]);
  SourceMatch match = match_sources(shuffled, d);
  for (int i = 0; i < 4; ++i) {
    CHECK(match.permutation[i] == perm[i]);
    CHECK(match.similarities[i] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SourceMatch self = match_sources(d, d);
  for (int i = 0; i < 4; ++i) CHECK(self.permutation[i] == i);
  CHECK(self.mean_similarity == doctest::Approx(1.0));
}

TEST_CASE("match_sources: zero-norm rows score 0 by convention") {
  Matrix learned = Matrix::Zero(2, 3);
  learned(1, 0) = 1.0;
  Matrix truth = Matrix::Identity(2, 3);
  SourceMatch match = match_sources(learned, truth);
  double total = 0.0;
  for (double s : match.similarities) total += s;
  CHECK(total == doctest::Approx(1.0));  // the zero row contributes nothing
}

TEST_CASE("max_assignment: agrees with exhaustive enumeration up to K=6") {
  std::mt19937_64 rng(23);
  for (int k = 2; k <= 6; ++k) {
    for (int rep = 0; rep < 10; ++rep) {
      Matrix score = tsd_test::random_matrix(k, k, rng);
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      double best = -1e300;
      do {
        double total = 0.0;
        for (int i = 0; i < k; ++i) total += score(i, perm[i]);
        best = std::max(best, total);
      } while (std::next_permutation(perm.begin(), perm.end()));

      std::vector<int> got = max_assignment(score);
      double total = 0.0;
      for (int i = 0; i < k; ++i) total += score(i, got[i]);
      CHECK(total == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("synth spec validation") {
  SynthSpec spec;
  spec.k_sources = 50;
  spec.n_analytes = 10;
  spec.n_samples = 20;
  CHECK_THROWS_AS(generate(spec), InputError);
  spec = SynthSpec{};
  spec.seasonal_amplitude = 1.5;
  CHECK_THROWS_AS(generate(spec), InputError);
  spec = SynthSpec{};
  spec.noise_std = -0.1;
  CHECK_THROWS_AS(generate(spec), InputError);
}
