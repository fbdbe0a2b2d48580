#pragma once

#include "tsd/run_config.hpp"

namespace tsd::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitSolverError = 2;

int cmd_fit(const RunConfig& config);
int cmd_predict(const RunConfig& config);
int cmd_decompose(const RunConfig& config);
int cmd_cv(const RunConfig& config);
int cmd_synth(const RunConfig& config);
int cmd_diagnose(const RunConfig& config);
int cmd_compare(const RunConfig& config);

/// Applies --threads / TSD_THREADS to OpenMP and Eigen.
void apply_thread_setting(int threads_flag);

}  // namespace tsd::cli
