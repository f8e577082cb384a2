#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbtopics/matrix.hpp"

namespace fbtopics {

struct KMeansOptions {
  std::size_t k = 3;
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  double tol = 1e-6;  // on the largest centroid shift
  // Skip k-means++ and start from these k x d centroids.
  std::optional<DenseMatrix> initial_centroids;
};

struct ClusterResult {
  std::vector<std::size_t> assignment;
  DenseMatrix centroids;
  double inertia = 0.0;
  std::size_t iterations_run = 0;
  bool converged = false;
  // Inertia after each assignment step, in order.
  std::vector<double> inertia_history;
};

/// k-means++ seeding (first centre uniform, then D^2 weighted).
DenseMatrix kmeans_plus_plus(const DenseMatrix& points, std::size_t k, std::uint64_t seed);

// Lloyd iterations until the assignment is stable and the largest centroid
// shift is below tol, or max_iter. A cluster left empty takes the point
// farthest from its current centroid. Throws Error unless 1 <= k <= n.
ClusterResult kmeans_fit(const DenseMatrix& points, const KMeansOptions& options);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace fbtopics
