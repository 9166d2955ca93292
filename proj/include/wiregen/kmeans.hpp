#ifndef WIREGEN_KMEANS_HPP
#define WIREGEN_KMEANS_HPP

#include <limits>
#include <vector>

#include "wiregen/common.hpp"
#include "wiregen/embedding.hpp"

namespace wiregen::retrieval {

struct KMeansResult {
  std::vector<std::vector<double>> centroids;
  std::vector<size_t> assignment;  // per input point
  int iterations = 0;
};

struct KMeansOptions {
  int max_iterations = 25;
  double tolerance = 1e-6;  // max centroid movement to declare convergence
};

// Fixed-seed Lloyd's k-means with k-means++ initialization. Empty clusters
// are re-seeded from the point farthest from its centroid.
inline KMeansResult kmeans(const std::vector<std::vector<double>>& points, size_t k,
                           std::uint64_t seed, KMeansOptions opts = {}) {
  if (points.size() < k) {
    throw Error(errc::training, "k-means needs at least " + std::to_string(k) + " points, got " +
                                    std::to_string(points.size()));
  }
  if (k == 0) throw Error(errc::parameter, "k must be positive");
  const size_t n = points.size();
  const size_t d = points[0].size();

  Rng rng(seed);
  KMeansResult result;
  result.centroids.reserve(k);

  // k-means++ seeding
  result.centroids.push_back(points[rng.bounded(n)]);
  std::vector<double> min_sq(n, std::numeric_limits<double>::max());
  while (result.centroids.size() < k) {
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
      double dsq = sq_distance(points[i], result.centroids.back());
      if (dsq < min_sq[i]) min_sq[i] = dsq;
      total += min_sq[i];
    }
    size_t chosen = 0;
    if (total <= 0) {
      chosen = rng.bounded(n);
    } else {
      double r = rng.next_double() * total;
      double acc = 0;
      for (size_t i = 0; i < n; ++i) {
        acc += min_sq[i];
        if (acc >= r) {
          chosen = i;
          break;
        }
      }
    }
    result.centroids.push_back(points[chosen]);
  }

  result.assignment.assign(n, 0);
  std::vector<double> point_dist(n, 0.0);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    result.iterations = iter + 1;

    // assign
    for (size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      size_t best_c = 0;
      for (size_t c = 0; c < k; ++c) {
        double dsq = sq_distance(points[i], result.centroids[c]);
        if (dsq < best) {
          best = dsq;
          best_c = c;
        }
      }
      result.assignment[i] = best_c;
      point_dist[i] = best;
    }

    // update
    std::vector<std::vector<double>> next(k, std::vector<double>(d, 0.0));
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      ++counts[result.assignment[i]];
      for (size_t j = 0; j < d; ++j) next[result.assignment[i]][j] += points[i][j];
    }
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // re-seed from the farthest point
        size_t far = 0;
        double far_d = -1;
        for (size_t i = 0; i < n; ++i) {
          if (point_dist[i] > far_d) {
            far_d = point_dist[i];
            far = i;
          }
        }
        next[c] = points[far];
        point_dist[far] = 0;  // avoid re-picking for a second empty cluster
      } else {
        for (size_t j = 0; j < d; ++j) next[c][j] /= static_cast<double>(counts[c]);
      }
    }

    double movement = 0;
    for (size_t c = 0; c < k; ++c) {
      movement = std::max(movement, sq_distance(result.centroids[c], next[c]));
    }
    result.centroids = std::move(next);
    if (std::sqrt(movement) < opts.tolerance) break;
  }

  // final assignment against the converged centroids
  for (size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::max();
    size_t best_c = 0;
    for (size_t c = 0; c < k; ++c) {
      double dsq = sq_distance(points[i], result.centroids[c]);
      if (dsq < best) {
        best = dsq;
        best_c = c;
      }
    }
    result.assignment[i] = best_c;
  }
  return result;
}

}  // namespace wiregen::retrieval

#endif  // WIREGEN_KMEANS_HPP
