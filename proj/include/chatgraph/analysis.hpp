#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "chatgraph/dataset.hpp"

namespace chatgraph {

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<double> r;  // row-major, size x size
  std::vector<bool> constant;

  std::size_t size() const { return names.size(); }
  double at(std::size_t i, std::size_t j) const { return r[i * names.size() + j]; }
};

inline constexpr double kConstantFeatureTolerance = 1e-15;

/// Pearson correlation of every column pair. Constant columns correlate 0
/// with everything except themselves.
CorrelationMatrix pearson_matrix(const Dataset& data, std::size_t workers = 1);

/// Columns whose population variance is at most `tolerance`.
std::vector<std::size_t> constant_features(const Dataset& data,
                                           double tolerance = kConstantFeatureTolerance);

struct Merge {
  std::size_t left = 0;   // cluster ids: < n are features, n + k is merge k
  std::size_t right = 0;
  double height = 0;
  std::size_t size = 0;
};

struct ClusterResult {
  std::vector<Merge> dendrogram;
  /// silhouette[k] for k in [2, n-1]; other slots unused.
  std::vector<double> silhouette;
  std::size_t k = 0;
  std::vector<std::size_t> assignment;  // cluster per feature, numbered by first member
  double witness_below = 0;  // silhouette at k-1, or at k when k is the lower bound
  double witness_above = 0;  // silhouette at k+1, or at k when k is the upper bound
  bool witness_holds = false;
};

inline constexpr double kSilhouetteTieTolerance = 1e-12;

/// Average-linkage clustering on d = 1 - |r| with the cut maximizing the
/// mean silhouette over k in [2, n-1], smaller k winning ties.
ClusterResult cluster_features(const CorrelationMatrix& corr);

/// Flat cut of a dendrogram into k clusters.
std::vector<std::size_t> cut_dendrogram(const std::vector<Merge>& dendrogram, std::size_t n,
                                        std::size_t k);

double mean_silhouette(const std::vector<double>& distance, std::size_t n,
                       const std::vector<std::size_t>& assignment);

void write_cluster_report(std::ostream& out, const CorrelationMatrix& corr,
                          const ClusterResult& result);

}  // namespace chatgraph
