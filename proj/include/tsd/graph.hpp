#pragma once

#include "tsd/types.hpp"

#include <iosfwd>
#include <optional>

namespace tsd {

/// Sparse symmetric graph Laplacian L = Deg - Adj with nonnegative edge
/// weights and a zero adjacency diagonal. Row sums of L are zero and
/// x'Lx >= 0 for every x.
struct GraphLaplacian {
  int n = 0;
  SparseMatrix adjacency;  // symmetric, zero diagonal
  SparseMatrix laplacian;  // Deg - Adj

  /// Builds Deg - Adj from a symmetric adjacency with nonneg weights.
  static GraphLaplacian from_adjacency(SparseMatrix adj);

  /// Adjacency as `i j weight` triples (0-indexed, upper and lower half),
  /// one per line, for debugging.
  void write_adjacency_coo(std::ostream& out) const;
};

/// Great-circle distance in meters between two lat/lon points.
double haversine_m(double lat1_deg, double lon1_deg, double lat2_deg,
                   double lon2_deg);

/// k-nearest-neighbor graph under haversine distance with a Gaussian edge
/// kernel w_ij = exp(-d_ij^2 / sigma^2). sigma defaults to the median of
/// all directed neighbor distances; when every used distance is zero
/// (duplicate coordinates) weights fall back to 1. The directed kNN graph
/// is symmetrized by max(w_ij, w_ji).
GraphLaplacian spatial_laplacian(const Vector& lat, const Vector& lon,
                                 int k_neighbors,
                                 std::optional<double> kernel_bandwidth = {});

/// Circular-calendar graph: samples are connected when their day-of-year
/// distance (wrapped at `period_days`, so late December is near early
/// January) is below `window_days`, with weight 1 - delta/window. An empty
/// graph is valid; `*warning` is set when no pair falls inside the window.
GraphLaplacian temporal_laplacian(const std::vector<Date>& dates,
                                  int window_days, int period_days = 365,
                                  std::string* warning = nullptr);

/// Tr(A' L A) computed as the edge sum  sum_ij w_ij ||A_i - A_j||^2 / 2,
/// which is exactly nonnegative.
double laplacian_quadratic(const GraphLaplacian& graph, const Matrix& a);

}  // namespace tsd
