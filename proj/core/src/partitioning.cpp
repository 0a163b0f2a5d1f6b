#include "clustvar/partitioning.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "clustvar/errors.hpp"
#include "clustvar/parallel.hpp"
#include "clustvar/random.hpp"
#include "clustvar/similarity.hpp"

namespace clustvar {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_k(const VariableSet& vs, std::size_t k) {
  if (k < 1 || k > vs.n_vars()) {
    throw DataError("number of clusters must be in [1, " + std::to_string(vs.n_vars()) +
                    "], got " + std::to_string(k));
  }
}

std::size_t distinct_count(std::span<const std::size_t> labels) {
  return std::set<std::size_t>(labels.begin(), labels.end()).size();
}

}  // namespace

std::vector<std::size_t> allocate_to_centers(const VariableSet& vs,
                                             std::span<const std::size_t> centers) {
  const std::size_t p = vs.n_vars();
  std::set<std::size_t> unique(centers.begin(), centers.end());
  if (unique.size() != centers.size() || (!centers.empty() && *unique.rbegin() >= p)) {
    throw DataError("centers must be distinct variable indices below " + std::to_string(p));
  }
  std::vector<std::size_t> labels(p, 0);
  for (std::size_t j = 0; j < p; ++j) {
    const auto self = std::find(centers.begin(), centers.end(), j);
    if (self != centers.end()) {
      labels[j] = static_cast<std::size_t>(self - centers.begin());
      continue;
    }
    double best = -1.0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double s = mixed_var_sim(vs, j, centers[c]);
      if (s > best) {
        best = s;
        labels[j] = c;
      }
    }
  }
  return labels;
}

std::vector<std::size_t> init_random(const VariableSet& vs, std::size_t k, std::uint64_t seed) {
  check_k(vs, k);
  Rng rng(seed);
  const auto centers = sample_without_replacement(rng, vs.n_vars(), k);
  return allocate_to_centers(vs, centers);
}

KmeansRun kmeans_from(const VariableSet& vs, std::vector<std::size_t> labels, std::size_t k,
                      std::size_t max_iter) {
  const std::size_t p = vs.n_vars();
  check_k(vs, k);
  if (max_iter < 1) throw DataError("max_iter must be at least 1");
  if (labels.size() != p) throw DataError("initial partition must label every variable");
  if (std::any_of(labels.begin(), labels.end(), [&](std::size_t l) { return l >= k; }) ||
      distinct_count(labels) != k) {
    throw DataError("initial partition must use exactly " + std::to_string(k) + " clusters");
  }

  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(p);
  for (std::size_t j = 0; j < p; ++j) blocks.push_back(variable_block(vs, j));

  KmeansRun run;
  std::vector<std::vector<double>> sims(p, std::vector<double>(k));
  for (std::size_t it = 0; it < max_iter; ++it) {
    // Representation.
    const auto groups = clusters_from_labels(labels);
    std::vector<Eigen::MatrixXd> centers;
    double h = 0.0;
    for (const auto& g : groups) {
      const auto synth = leading_component(recode(vs, g));
      h += synth.eigenvalue;
      centers.push_back(quantitative_block(synth.scores));
    }
    run.homogeneity.push_back(h);

    // Allocation; a variable stays put unless another cluster is strictly closer.
    std::vector<std::size_t> next(p);
    double objective = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t c = 0; c < k; ++c) sims[j][c] = canonical_corr(blocks[j], centers[c]);
      const double top = *std::max_element(sims[j].begin(), sims[j].end());
      std::size_t chosen = labels[j];
      if (sims[j][chosen] < top - kTieTolerance) {
        chosen = static_cast<std::size_t>(
            std::find_if(sims[j].begin(), sims[j].end(),
                         [&](double s) { return s >= top - kTieTolerance; }) -
            sims[j].begin());
      }
      next[j] = chosen;
      objective += sims[j][chosen];
    }
    run.objective.push_back(objective);
    run.iterations = it + 1;

    if (next == labels) {
      run.converged = true;
      break;
    }

    // Empty clusters take the variable that fits its own cluster worst.
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(next.begin(), next.end(), c) != next.end()) continue;
      std::vector<std::size_t> size(k, 0);
      for (std::size_t l : next) ++size[l];
      std::optional<std::size_t> worst;
      for (std::size_t j = 0; j < p; ++j) {
        if (size[next[j]] < 2) continue;
        if (!worst || sims[j][next[j]] < sims[*worst][next[*worst]]) worst = j;
      }
      next[*worst] = c;
      ++run.repairs;
    }
    labels = std::move(next);
  }

  if (!run.converged) {
    double h = 0.0;
    for (const auto& g : clusters_from_labels(labels)) h += leading_eigenvalue(recode(vs, g));
    run.homogeneity.push_back(h);
  }
  run.labels = std::move(labels);
  return run;
}

KmeansResult kmeansvar(const VariableSet& vs, const KmeansConfig& config) {
  check_k(vs, config.k);
  if (config.max_iter < 1) throw DataError("max_iter must be at least 1");

  KmeansResult result;
  std::vector<KmeansRun> runs;
  if (const auto* random = std::get_if<RandomInit>(&config.init)) {
    if (random->n_starts < 1) throw DataError("n_starts must be at least 1");
    result.seed = random->seed;
    runs.resize(random->n_starts);
    detail::parallel_for(runs.size(), config.threads, [&](std::size_t s) {
      auto labels = init_random(vs, config.k, derive_seed(random->seed, s));
      runs[s] = kmeans_from(vs, std::move(labels), config.k, config.max_iter);
    });
  } else if (const auto* given = std::get_if<GivenPartition>(&config.init)) {
    if (given->labels.size() != vs.n_vars()) {
      throw DataError("initial partition has " + std::to_string(given->labels.size()) +
                      " labels for " + std::to_string(vs.n_vars()) + " variables");
    }
    runs.push_back(kmeans_from(vs, canonical_labels(given->labels), config.k, config.max_iter));
  } else {
    const auto& centers = std::get<GivenCenters>(config.init).centers;
    if (centers.size() != config.k) {
      throw DataError("expected " + std::to_string(config.k) + " centers, got " +
                      std::to_string(centers.size()));
    }
    runs.push_back(
        kmeans_from(vs, allocate_to_centers(vs, centers), config.k, config.max_iter));
  }

  for (std::size_t s = 0; s < runs.size(); ++s) {
    result.start_homogeneity.push_back(runs[s].homogeneity.back());
    if (runs[s].homogeneity.back() > runs[result.best_start].homogeneity.back()) {
      result.best_start = s;
    }
  }
  result.best = std::move(runs[result.best_start]);
  result.partition = make_partition(vs, result.best.labels, config.with_sim);
  return result;
}

}  // namespace clustvar
