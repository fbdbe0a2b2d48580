#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace tsd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Bad input data or configuration: maps to CLI exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside a solver: maps to CLI exit code 2.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal representation of a double.
/// All artifact files format numbers through this, so identical inputs
/// produce byte-identical outputs.
std::string format_double(double v);

/// Strict double parse; returns false on trailing garbage or empty input.
bool parse_double(const std::string& s, double& out);

}  // namespace tsd
