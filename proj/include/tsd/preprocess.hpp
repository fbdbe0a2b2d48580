#pragma once

#include "tsd/csv.hpp"
#include "tsd/types.hpp"

namespace tsd {

// Reserved ingestion columns; every other column is treated as an analyte.
inline constexpr const char* kSampleIdColumn = "sample_id";
inline constexpr const char* kLatitudeColumn = "latitude";
inline constexpr const char* kLongitudeColumn = "longitude";
inline constexpr const char* kDateColumn = "date";

/// Turns a raw ingestion table into a ChemDataset: extracts the target
/// column, applies the missing-value policy, scales features per `spec`,
/// and records the fitted scale parameters on the returned dataset.
///
/// `target_name` may be empty (decompose-style runs): the target vector is
/// then all zeros and every numeric column becomes a feature.
ChemDataset preprocess(const csv::Table& raw, const PreprocessSpec& spec,
                       const std::string& target_name);

/// Applies an already-fitted spec to new data, matching analytes by column
/// name against `analyte_names`. Missing cells follow the fitted
/// missing-value policy (dropped rows are removed from `kept_sample_ids`).
/// Throws InputError listing missing/extra analytes on schema mismatch.
Matrix transform_like(const csv::Table& raw, const PreprocessSpec& fitted,
                      const std::vector<std::string>& analyte_names,
                      const std::string& target_name,
                      std::vector<std::string>& kept_sample_ids);

/// Inverse transform of a whole feature matrix (testing hook).
Matrix inverse_transform(const Matrix& features, const PreprocessSpec& fitted);

}  // namespace tsd
