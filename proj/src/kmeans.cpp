#include "fbtopics/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbtopics/error.hpp"
#include "fbtopics/random.hpp"

namespace fbtopics {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

DenseMatrix kmeans_plus_plus(const DenseMatrix& points, std::size_t k, std::uint64_t seed) {
  const std::size_t n = points.rows();
  if (k < 1 || k > n) throw Error("k-means needs 1 <= k <= n");
  Rng rng(seed);
  DenseMatrix centroids(k, points.cols());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);

  std::size_t pick = rng.index(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (double d : nearest) total += d;
      if (total > 0.0) {
        pick = rng.categorical(nearest);
      } else {
        // Every point coincides with a centre already; take the first unused point.
        pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
      }
    }
    chosen[pick] = true;
    const auto src = points.row(pick);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

namespace {

// Assigns each point to its nearest centroid (lowest index on ties) and
// returns the inertia; dist receives each point's squared distance.
double assign(const DenseMatrix& points, const DenseMatrix& centroids, std::vector<std::size_t>& labels,
              std::vector<double>& dist) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

// Moves the point farthest from its centroid into each empty cluster.
// Returns true when any cluster was reseeded.
bool reseed_empty(const DenseMatrix& points, DenseMatrix& centroids, std::vector<std::size_t>& labels,
                  std::vector<double>& dist) {
  const std::size_t k = centroids.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];
  bool changed = false;
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    std::size_t far = points.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (sizes[labels[i]] > 1 && dist[i] > far_d) {
        far_d = dist[i];
        far = i;
      }
    }
    if (far == points.rows()) break;  // k > number of movable points; cannot happen for k <= n
    --sizes[labels[far]];
    labels[far] = c;
    sizes[c] = 1;
    dist[far] = 0.0;
    const auto src = points.row(far);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
    changed = true;
  }
  return changed;
}

void update_centroids(const DenseMatrix& points, const std::vector<std::size_t>& labels, DenseMatrix& centroids) {
  const std::size_t k = centroids.rows();
  DenseMatrix sums(k, points.cols());
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto dst = sums.row(labels[i]);
    const auto src = points.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    ++sizes[labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] == 0) continue;
    auto dst = centroids.row(c);
    const auto sum = sums.row(c);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = sum[j] / static_cast<double>(sizes[c]);
  }
}

}  // namespace

ClusterResult kmeans_fit(const DenseMatrix& points, const KMeansOptions& options) {
  const std::size_t n = points.rows();
  const std::size_t k = options.k;
  if (k < 1) throw Error("k-means needs k >= 1");
  if (k > n) throw Error("k-means needs k <= number of points");

  ClusterResult result;
  if (options.initial_centroids) {
    if (options.initial_centroids->rows() != k || options.initial_centroids->cols() != points.cols()) {
      throw Error("initial centroids must be k x d");
    }
    result.centroids = *options.initial_centroids;
  } else {
    result.centroids = kmeans_plus_plus(points, k, options.seed);
  }

  std::vector<std::size_t> labels(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> previous;
  for (std::size_t it = 1; it <= std::max<std::size_t>(options.max_iter, 1); ++it) {
    double inertia = assign(points, result.centroids, labels, dist);
    if (reseed_empty(points, result.centroids, labels, dist)) {
      inertia = 0.0;
      for (double d : dist) inertia += d;
    }
    result.inertia_history.push_back(inertia);
    result.iterations_run = it;

    const DenseMatrix before = result.centroids;
    update_centroids(points, labels, result.centroids);
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      shift = std::max(shift, std::sqrt(squared_distance(before.row(c), result.centroids.row(c))));
    }
    const bool stable = labels == previous;
    previous = labels;
    if (stable && shift < options.tol) {
      result.converged = true;
      break;
    }
  }

  result.assignment = std::move(labels);
  result.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.inertia += squared_distance(points.row(i), result.centroids.row(result.assignment[i]));
  }
  return result;
}

}  // namespace fbtopics
