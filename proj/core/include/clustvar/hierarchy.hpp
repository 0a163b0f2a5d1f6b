#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "clustvar/data_model.hpp"
#include "clustvar/partition.hpp"

namespace clustvar {

/// One agglomeration step. Node ids 0..p-1 are leaves (variables); merge t
/// creates node p + t. `left` is the child holding the smaller variable index.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  /// Variables under the new node, ascending.
  std::vector<std::size_t> members;
};

/// A merge placed lower than one of its children.
struct Inversion {
  std::size_t merge = 0;
  double height = 0.0;
  double child_height = 0.0;
};

class Hierarchy {
 public:
  Hierarchy(std::vector<std::string> leaves, std::vector<Merge> merges);

  std::size_t n_leaves() const noexcept { return leaves_.size(); }
  const std::vector<std::string>& leaves() const noexcept { return leaves_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }
  const std::vector<Inversion>& inversions() const noexcept { return inversions_; }
  double node_height(std::size_t node) const;

  /// Canonical cluster labels of the K-cluster partition (first p-K merges).
  std::vector<std::size_t> labels_at(std::size_t k) const;

 private:
  std::vector<std::string> leaves_;
  std::vector<Merge> merges_;
  std::vector<Inversion> inversions_;
};

struct HclustOptions {
  /// Worker threads for candidate recomputation; 0 = hardware concurrency.
  unsigned threads = 1;
};

/// d(A, B) = H(A) + H(B) - H(A u B).
double merge_dissimilarity(const VariableSet& vs, std::span<const std::size_t> a,
                           std::span<const std::size_t> b);

/// Agglomerates the p variables, merging at each step the pair of clusters
/// whose union loses the least homogeneity. Equal dissimilarities (within
/// 1e-12) are broken by the smallest variable index of each cluster.
Hierarchy hclustvar(const VariableSet& vs, const HclustOptions& options = {});

ClusterPartition cut(const Hierarchy& h, const VariableSet& vs, std::size_t k,
                     bool with_sim = false);

struct AggregationLevel {
  /// Number of clusters before the merge.
  std::size_t clusters = 0;
  double height = 0.0;
};

std::vector<AggregationLevel> aggregation_levels(const Hierarchy& h);

/// Newick text with branch lengths from heights; internal branches are
/// floored at 0 where the tree has inversions.
std::string to_newick(const Hierarchy& h);

}  // namespace clustvar
