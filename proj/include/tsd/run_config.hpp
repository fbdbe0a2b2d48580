#pragma once

#include "tsd/eval.hpp"
#include "tsd/synth.hpp"
#include "tsd/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tsd {

/// One config object drives every CLI command. Serialized as nested JSON;
/// command-line flags override file values. Round-trips unchanged through
/// to_json/from_json.
struct RunConfig {
  std::string input;
  std::string target;
  std::string out_dir = "out";
  std::string model_dir;  // predict only
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = resolve from TSD_THREADS, else 1

  PreprocessSpec preprocess;  // only scaling/missing are configuration
  Hyperparams hyperparams;
  GraphParams graph;

  struct SynthSection {
    int n_samples = 500;
    int n_analytes = 20;
    double noise_std = 0.01;
    double smoothness = 0.3;
    double seasonal_amplitude = 0.5;

    bool operator==(const SynthSection&) const = default;
  } synth;

  struct CvSection {
    int folds = 5;
    int grid_size = 64;
    bool spatially_blocked = false;

    bool operator==(const CvSection&) const = default;
  } cv;

  struct CompareSection {
    std::vector<std::string> methods = {"tsdst", "lr_nmf", "dksvd", "ridge"};
    double train_fraction = 0.8;

    bool operator==(const CompareSection&) const = default;
  } compare;

  bool operator==(const RunConfig& other) const;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  static RunConfig from_file(const std::string& path);

  SynthSpec synth_spec() const;
  CvOptions cv_options() const;
  CompareOptions compare_options() const;
};

/// The spec'd per-lambda candidate ladder {0, 1e-3, 1e-2, 1e-1, 1} sampled
/// into `grid_size` seeded random configs (rho, K, solver controls copied
/// from `base`).
std::vector<Hyperparams> random_lambda_grid(const Hyperparams& base,
                                            int grid_size,
                                            std::uint64_t seed);

}  // namespace tsd
