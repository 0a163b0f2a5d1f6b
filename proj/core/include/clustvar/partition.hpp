#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clustvar/data_model.hpp"
#include "clustvar/pcamix.hpp"
#include "clustvar/similarity.hpp"

namespace clustvar {

struct Cluster {
  /// Variable indices, ascending.
  std::vector<std::size_t> members;
  SyntheticVariable synthetic;
  std::optional<SimilarityMatrix> similarity;
};

/// A partition of the variables with everything reported about it:
/// memberships, per-cluster synthetic variables and squared loadings,
/// homogeneity (wss), gain in cohesion (E) and the n x K score table.
struct ClusterPartition {
  std::vector<std::string> variable_names;
  std::vector<std::string> obs_labels;
  /// 0-based cluster index per variable. Clusters are numbered by their
  /// smallest variable index.
  std::vector<std::size_t> membership;
  std::vector<Cluster> clusters;
  double wss = 0.0;
  double gain = 0.0;
  double one_cluster_homogeneity = 0.0;
  Eigen::MatrixXd scores;

  std::size_t k() const noexcept { return clusters.size(); }
  std::vector<std::size_t> sizes() const;
};

/// Relabels arbitrary cluster labels so that clusters are numbered 0..K-1 in
/// order of their smallest member.
std::vector<std::size_t> canonical_labels(std::span<const std::size_t> labels);

/// Builds a ClusterPartition from labels. `one_cluster_h` may be passed to
/// avoid recomputing H(P_1).
ClusterPartition make_partition(const VariableSet& vs, std::span<const std::size_t> labels,
                                bool with_sim = false,
                                std::optional<double> one_cluster_h = std::nullopt);

/// H(P_1): homogeneity of the single cluster holding every variable.
double one_cluster_homogeneity(const VariableSet& vs);

}  // namespace clustvar
