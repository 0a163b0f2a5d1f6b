#include "clustvar/stability.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include "clustvar/errors.hpp"
#include "clustvar/parallel.hpp"

namespace clustvar {

namespace {

double pairs(double x) { return x * (x - 1.0) / 2.0; }

struct ReplicateOutcome {
  std::vector<double> ari;
  std::size_t attempts = 0;
  std::optional<RareCategoryError> error;
};

}  // namespace

RandIndices rand_indices(std::span<const std::size_t> p, std::span<const std::size_t> q) {
  if (p.size() != q.size()) throw DataError("rand_indices: partitions label different item counts");
  if (p.size() < 2) throw DataError("rand_indices: need at least 2 items");

  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < p.size(); ++i) {
    table[{p[i], q[i]}] += 1.0;
    rows[p[i]] += 1.0;
    cols[q[i]] += 1.0;
  }
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [cell, n] : table) sum_cells += pairs(n);
  for (const auto& [label, n] : rows) sum_rows += pairs(n);
  for (const auto& [label, n] : cols) sum_cols += pairs(n);
  const double total = pairs(static_cast<double>(p.size()));

  RandIndices out;
  // Agreements: pairs together in both plus pairs apart in both.
  out.rand = (total + 2.0 * sum_cells - sum_rows - sum_cols) / total;
  const double expected = sum_rows * sum_cols / total;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) {
    // Both partitions trivial (all singletons or one cluster) in the same way.
    out.adjusted = sum_cells == expected ? 1.0 : 0.0;
  } else {
    out.adjusted = (sum_cells - expected) / (maximum - expected);
  }
  return out;
}

Resampler identity_resampler() {
  return [](std::size_t n, Rng&) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
  };
}

StabilityResult bootstrap_stability(const VariableSet& vs, const Hierarchy& reference,
                                    const StabilityOptions& options) {
  const std::size_t p = vs.n_vars();
  if (options.replicates < 1) throw DataError("the number of bootstrap replicates must be at least 1");
  if (p < 3) throw DataError("stability needs at least 3 variables");
  if (reference.n_leaves() != p) throw DataError("reference hierarchy does not match the data");

  StabilityResult result;
  result.replicates = options.replicates;
  result.seed = options.seed;
  std::vector<std::vector<std::size_t>> reference_cuts;
  for (std::size_t k = 2; k + 1 <= p; ++k) {
    result.cluster_counts.push_back(k);
    reference_cuts.push_back(reference.labels_at(k));
  }
  const auto width = result.cluster_counts.size();

  const Resampler draw =
      options.resampler ? options.resampler
                        : Resampler([](std::size_t n, Rng& rng) { return bootstrap_rows(rng, n); });

  std::vector<ReplicateOutcome> outcomes(options.replicates);
  detail::parallel_for(options.replicates, options.threads, [&](std::size_t b) {
    auto& out = outcomes[b];
    const std::size_t budget = options.strict_rare ? 1 : options.max_retries + 1;
    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
      out.attempts = attempt + 1;
      Rng rng(derive_seed(options.seed, b, attempt));
      const auto sample = vs.resample(draw(vs.n_obs(), rng));
      try {
        const auto tree = hclustvar(sample);
        out.ari.resize(width);
        for (std::size_t c = 0; c < width; ++c) {
          out.ari[c] = rand_indices(reference_cuts[c], tree.labels_at(result.cluster_counts[c])).adjusted;
        }
        out.error.reset();
        return;
      } catch (const RareCategoryError& e) {
        out.error = e;
      }
    }
  });

  result.adjusted_rand = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(options.replicates),
                                                   static_cast<Eigen::Index>(width),
                                                   std::numeric_limits<double>::quiet_NaN());
  std::vector<double> sums(width, 0.0);
  std::size_t ok = 0;
  for (std::size_t b = 0; b < outcomes.size(); ++b) {
    const auto& out = outcomes[b];
    result.retries += out.attempts - 1;
    if (out.error) {
      if (options.strict_rare) {
        throw RareCategoryError(out.error->variable(),
                                "bootstrap replicate " + std::to_string(b + 1) + ": " +
                                    out.error->what() +
                                    " (a rare category vanished from the bootstrap sample)");
      }
      result.failures.push_back({b, out.attempts, out.error->variable(), out.error->what()});
      continue;
    }
    ++ok;
    for (std::size_t c = 0; c < width; ++c) {
      result.adjusted_rand(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c)) = out.ari[c];
      sums[c] += out.ari[c];
    }
  }
  if (ok == 0) {
    const auto& first = result.failures.front();
    throw RareCategoryError(first.variable,
                            "every bootstrap replicate failed: " + first.reason +
                                ". Rare categories of qualitative variables vanish from bootstrap "
                                "samples; merge rare levels or drop the variable");
  }
  for (double s : sums) result.mean_adjusted_rand.push_back(s / static_cast<double>(ok));
  return result;
}

StabilityResult bootstrap_stability(const VariableSet& vs, const StabilityOptions& options) {
  return bootstrap_stability(vs, hclustvar(vs), options);
}

}  // namespace clustvar
