#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "clustvar/data_model.hpp"
#include "clustvar/partition.hpp"

namespace clustvar {

/// K variables drawn at random as initial centers, repeated `n_starts` times.
struct RandomInit {
  std::size_t n_starts = 1;
  std::uint64_t seed = 0;
};

/// Initial cluster labels, one per variable.
struct GivenPartition {
  std::vector<std::size_t> labels;
};

/// Variable indices used as initial centers.
struct GivenCenters {
  std::vector<std::size_t> centers;
};

struct KmeansConfig {
  std::size_t k = 2;
  std::variant<RandomInit, GivenPartition, GivenCenters> init = RandomInit{};
  std::size_t max_iter = 150;
  bool with_sim = false;
  /// Worker threads for independent starts; 0 = hardware concurrency.
  unsigned threads = 1;
};

/// Trace of one k-means run. `homogeneity[t]` is H of the partition entering
/// iteration t (the last entry is the returned partition); `objective[t]` is
/// the sum over variables of their best similarity to the synthetic
/// variables of iteration t, so H[t] <= objective[t] <= H[t + 1] when no
/// empty cluster had to be repaired.
struct KmeansRun {
  std::vector<std::size_t> labels;
  std::vector<double> homogeneity;
  std::vector<double> objective;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t repairs = 0;
};

struct KmeansResult {
  ClusterPartition partition;
  KmeansRun best;
  /// Final H of every start, in start order.
  std::vector<double> start_homogeneity;
  std::size_t best_start = 0;
  std::optional<std::uint64_t> seed;
};

/// Allocates every variable to the most similar center; a center keeps
/// itself and ties go to the lowest center index.
std::vector<std::size_t> allocate_to_centers(const VariableSet& vs,
                                             std::span<const std::size_t> centers);

/// Draws K distinct centers from `seed` and allocates the variables to them.
std::vector<std::size_t> init_random(const VariableSet& vs, std::size_t k, std::uint64_t seed);

/// Alternating representation / allocation from a given labelling.
KmeansRun kmeans_from(const VariableSet& vs, std::vector<std::size_t> labels, std::size_t k,
                      std::size_t max_iter);

/// k-means-type partitioning of the variables. With several random starts
/// the run with the highest H is returned (earliest start on ties).
KmeansResult kmeansvar(const VariableSet& vs, const KmeansConfig& config);

}  // namespace clustvar
