#include "tsd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

namespace tsd {

namespace {

constexpr double kEarthRadiusM = 6371000.0;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double haversine_m(double lat1_deg, double lon1_deg, double lat2_deg,
                   double lon2_deg) {
  const double lat1 = deg2rad(lat1_deg);
  const double lat2 = deg2rad(lat2_deg);
  const double dlat = lat2 - lat1;
  const double dlon = deg2rad(lon2_deg - lon1_deg);
  const double s1 = std::sin(0.5 * dlat);
  const double s2 = std::sin(0.5 * dlon);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

GraphLaplacian GraphLaplacian::from_adjacency(SparseMatrix adj) {
  GraphLaplacian g;
  g.n = static_cast<int>(adj.rows());
  if (adj.rows() != adj.cols()) {
    throw InputError("adjacency matrix must be square");
  }
  adj.makeCompressed();
  g.adjacency = std::move(adj);

  Vector degree = Vector::Zero(g.n);
  for (int k = 0; k < g.adjacency.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(g.adjacency, k); it; ++it) {
      degree[it.row()] += it.value();
    }
  }
  SparseMatrix lap = -g.adjacency;
  lap.reserve(Eigen::VectorXi::Constant(g.n, 1));
  for (int i = 0; i < g.n; ++i) {
    if (degree[i] != 0.0) lap.coeffRef(i, i) += degree[i];
  }
  lap.makeCompressed();
  g.laplacian = std::move(lap);
  return g;
}

void GraphLaplacian::write_adjacency_coo(std::ostream& out) const {
  for (int k = 0; k < adjacency.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(adjacency, k); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value())
          << '\n';
    }
  }
}

GraphLaplacian spatial_laplacian(const Vector& lat, const Vector& lon,
                                 int k_neighbors,
                                 std::optional<double> kernel_bandwidth) {
  const int n = static_cast<int>(lat.size());
  if (lon.size() != n) throw InputError("latitude/longitude length mismatch");
  if (k_neighbors < 1) throw InputError("k_neighbors must be >= 1");
  if (k_neighbors >= n) {
    throw InputError("k_neighbors (" + std::to_string(k_neighbors) +
                     ") must be smaller than the sample count (" +
                     std::to_string(n) + ")");
  }

  // Directed kNN edges; ties broken toward the lower index for determinism.
  std::vector<std::pair<int, int>> edges;  // (i, j), i -> j
  std::vector<double> edge_dist;
  edges.reserve(static_cast<std::size_t>(n) * k_neighbors);
  edge_dist.reserve(edges.capacity());

  std::vector<std::pair<double, int>> cand(n - 1);
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[c++] = {haversine_m(lat[i], lon[i], lat[j], lon[j]), j};
    }
    std::partial_sort(cand.begin(), cand.begin() + k_neighbors, cand.end());
    for (int t = 0; t < k_neighbors; ++t) {
      edges.emplace_back(i, cand[t].second);
      edge_dist.push_back(cand[t].first);
    }
  }

  double sigma;
  if (kernel_bandwidth) {
    sigma = *kernel_bandwidth;
    if (!(sigma > 0.0)) throw InputError("kernel bandwidth must be > 0");
  } else {
    std::vector<double> dists = edge_dist;
    auto mid = dists.begin() + dists.size() / 2;
    std::nth_element(dists.begin(), mid, dists.end());
    if (dists.size() % 2 == 1) {
      sigma = *mid;
    } else {
      double hi = *mid;
      double lo = *std::max_element(dists.begin(), mid);
      sigma = 0.5 * (lo + hi);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double d = edge_dist[e];
    // sigma == 0 means every picked neighbor is a duplicate coordinate;
    // fall back to uniform unit weights.
    double w = (d == 0.0 || sigma == 0.0) ? 1.0
                                          : std::exp(-(d * d) / (sigma * sigma));
    if (w == 0.0) continue;  // kernel underflow: not an edge
    triplets.emplace_back(edges[e].first, edges[e].second, w);
    triplets.emplace_back(edges[e].second, edges[e].first, w);
  }
  SparseMatrix adj(n, n);
  // Symmetrize by max: duplicates collapse to the largest weight.
  adj.setFromTriplets(triplets.begin(), triplets.end(),
                      [](double a, double b) { return std::max(a, b); });
  return GraphLaplacian::from_adjacency(std::move(adj));
}

GraphLaplacian temporal_laplacian(const std::vector<Date>& dates,
                                  int window_days, int period_days,
                                  std::string* warning) {
  const int n = static_cast<int>(dates.size());
  if (window_days < 1) throw InputError("window_days must be >= 1");
  if (2 * window_days >= period_days) {
    throw InputError("window_days must be < period_days / 2");
  }

  // Bucket samples by day of year so only day pairs inside the window are
  // visited.
  std::vector<std::vector<int>> by_day(period_days + 1);
  for (int i = 0; i < n; ++i) {
    int doy = day_of_year(dates[i]);
    if (doy > period_days) doy = period_days;
    by_day[doy].push_back(i);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (int da = 1; da <= period_days; ++da) {
    if (by_day[da].empty()) continue;
    for (int db = da; db <= period_days; ++db) {
      if (by_day[db].empty()) continue;
      int delta = circular_day_distance(da, db, period_days);
      if (delta >= window_days) continue;
      double w = 1.0 - double(delta) / double(window_days);
      if (da == db) {
        const auto& bucket = by_day[da];
        for (std::size_t p = 0; p < bucket.size(); ++p) {
          for (std::size_t q = p + 1; q < bucket.size(); ++q) {
            triplets.emplace_back(bucket[p], bucket[q], w);
            triplets.emplace_back(bucket[q], bucket[p], w);
          }
        }
      } else {
        for (int i : by_day[da]) {
          for (int j : by_day[db]) {
            triplets.emplace_back(i, j, w);
            triplets.emplace_back(j, i, w);
          }
        }
      }
    }
  }
  if (triplets.empty() && warning) {
    *warning = "temporal graph is empty: no sample pair falls within " +
               std::to_string(window_days) + " days";
  }
  SparseMatrix adj(n, n);
  adj.setFromTriplets(triplets.begin(), triplets.end(),
                      [](double a, double) { return a; });
  return GraphLaplacian::from_adjacency(std::move(adj));
}

double laplacian_quadratic(const GraphLaplacian& graph, const Matrix& a) {
  if (static_cast<int>(a.rows()) != graph.n) {
    throw InputError("coefficient matrix has " + std::to_string(a.rows()) +
                     " rows, Laplacian is " + std::to_string(graph.n) + "x" +
                     std::to_string(graph.n));
  }
  double total = 0.0;
  for (int k = 0; k < graph.adjacency.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(graph.adjacency, k); it; ++it) {
      if (it.row() >= it.col()) continue;  // upper triangle once per edge
      total += it.value() * (a.row(it.row()) - a.row(it.col())).squaredNorm();
    }
  }
  return total;
}

}  // namespace tsd
