#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clustvar/data_model.hpp"
#include "clustvar/hierarchy.hpp"
#include "clustvar/random.hpp"

namespace clustvar {

struct RandIndices {
  double rand = 0.0;
  double adjusted = 0.0;
};

/// Rand index and Hubert-Arabie adjusted Rand index of two labellings of the
/// same items.
RandIndices rand_indices(std::span<const std::size_t> p, std::span<const std::size_t> q);

/// Draws the rows of one replicate; the default draws n rows with replacement.
using Resampler = std::function<std::vector<std::size_t>(std::size_t n, Rng& rng)>;

/// Resampler returning 0..n-1; every replicate reproduces the original data.
Resampler identity_resampler();

struct StabilityOptions {
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  /// Fail on the first replicate that loses a category instead of redrawing.
  bool strict_rare = false;
  std::size_t max_retries = 10;
  Resampler resampler;
  unsigned threads = 1;
};

struct FailedReplicate {
  std::size_t replicate = 0;
  std::size_t attempts = 0;
  std::string variable;
  std::string reason;
};

struct StabilityResult {
  /// K values of the columns: 2..p-1.
  std::vector<std::size_t> cluster_counts;
  /// Column means of `adjusted_rand` over successful replicates.
  std::vector<double> mean_adjusted_rand;
  /// B x (p-2) adjusted Rand indices; rows of failed replicates are NaN.
  Eigen::MatrixXd adjusted_rand;
  std::vector<FailedReplicate> failures;
  /// Redraws caused by rare categories, over all replicates.
  std::size_t retries = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

/// Compares the K-cuts (K = 2..p-1) of hierarchies built on bootstrap
/// samples of the observations against the K-cuts of `reference`.
StabilityResult bootstrap_stability(const VariableSet& vs, const Hierarchy& reference,
                                    const StabilityOptions& options);

StabilityResult bootstrap_stability(const VariableSet& vs, const StabilityOptions& options);

}  // namespace clustvar
