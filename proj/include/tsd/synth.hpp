#pragma once

#include "tsd/types.hpp"

#include <utility>
#include <vector>

namespace tsd {

/// Synthetic ground-truth generator: smooth spatial coefficient fields over
/// a unit square, a seasonal modulation on one source, and a dictionary
/// with disjoint dominant-analyte blocks (identifiable up to permutation
/// and scale).
struct SynthSpec {
  int n_samples = 500;
  int n_analytes = 20;
  int k_sources = 3;
  double noise_std = 0.01;        // on X and y
  double smoothness = 0.3;        // Gaussian-bump length-scale in the unit square
  double seasonal_amplitude = 0.5;  // in [0, 1]; sinusoidal over day-of-year
  std::uint64_t seed = 0;

  // Unit square -> lat/lon box mapping.
  double lat_origin = 41.0;
  double lon_origin = -78.0;
  double box_degrees = 0.5;

  void validate() const;
};

struct SynthData {
  ChemDataset dataset;
  Matrix a_true;  // N x K, >= 0
  Matrix d_true;  // K x M, >= 0
  Vector w_true;  // K, mixed signs
};

SynthData generate(const SynthSpec& spec);

/// Optimal one-to-one row matching between a learned and a true dictionary,
/// maximizing total cosine similarity (Hungarian assignment). Zero-norm rows
/// score 0 by convention.
struct SourceMatch {
  std::vector<int> permutation;      // learned row k matches true row permutation[k]
  std::vector<double> similarities;  // cosine of each matched pair
  double mean_similarity = 0.0;
};

SourceMatch match_sources(const Matrix& d_learned, const Matrix& d_true);

/// Maximum-total-score assignment on an arbitrary square score matrix
/// (exposed for oracle tests against exhaustive enumeration).
std::vector<int> max_assignment(const Matrix& score);

}  // namespace tsd
