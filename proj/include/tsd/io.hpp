#pragma once

#include "tsd/eval.hpp"
#include "tsd/solver.hpp"
#include "tsd/synth.hpp"
#include "tsd/types.hpp"

#include <string>
#include <vector>

namespace tsd {

/// Writes content to `path` via a temp file and rename, so interrupted runs
/// never leave truncated artifacts.
void atomic_write_file(const std::string& path, const std::string& content);

/// Everything needed to reload and apply a fitted model.
struct ModelArtifacts {
  Factorization factorization;
  Hyperparams hyperparams;
  PreprocessSpec preprocess;
  std::vector<std::string> analyte_names;
  std::vector<std::string> sample_ids;
  std::string target_name;
  bool converged = false;
  int iterations = 0;
  double train_rmse = 0.0;
  FitReport report;
};

// Artifact file names under an output directory.
inline constexpr const char* kDictionaryFile = "D.csv";
inline constexpr const char* kCoefficientsFile = "A.csv";
inline constexpr const char* kWeightsFile = "W.csv";
inline constexpr const char* kMetadataFile = "metadata.json";
inline constexpr const char* kReportFile = "report.csv";

/// Writes D.csv / A.csv / W.csv / metadata.json / report.csv. The report
/// holds the objective trace; metadata carries hyperparameters, the fitted
/// preprocessing parameters, convergence status, and residuals. Wall time
/// is deliberately excluded so reruns are byte-identical.
void write_model(const std::string& out_dir, const ModelArtifacts& model);

/// Reloads D/W/metadata (A optional) from a model directory.
ModelArtifacts load_model(const std::string& model_dir);

std::string dataset_to_csv(const ChemDataset& ds);
std::string matrix_to_csv(const Matrix& m, const std::string& row_label,
                          const std::vector<std::string>& row_names,
                          const std::vector<std::string>& col_names);

std::string predictions_to_csv(const std::vector<std::string>& sample_ids,
                               const Vector& predictions);

std::string continuity_months_to_csv(const ContinuityReport& report);
std::string continuity_bins_to_csv(const ContinuityReport& report);
std::string comparison_to_csv(const std::vector<MethodResult>& results);

}  // namespace tsd
