#include "clustvar/partition.hpp"

#include <limits>
#include <numeric>

#include "clustvar/errors.hpp"

namespace clustvar {

std::vector<std::size_t> ClusterPartition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.members.size());
  return out;
}

std::vector<std::size_t> canonical_labels(std::span<const std::size_t> labels) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> remap;
  std::vector<std::size_t> out(labels.size());
  std::size_t next = 0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] >= remap.size()) remap.resize(labels[j] + 1, unset);
    if (remap[labels[j]] == unset) remap[labels[j]] = next++;
    out[j] = remap[labels[j]];
  }
  return out;
}

double one_cluster_homogeneity(const VariableSet& vs) {
  std::vector<std::size_t> all(vs.n_vars());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return cluster_homogeneity(vs, all);
}

ClusterPartition make_partition(const VariableSet& vs, std::span<const std::size_t> labels,
                                bool with_sim, std::optional<double> one_cluster_h) {
  if (labels.size() != vs.n_vars()) {
    throw DataError("partition has " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(vs.n_vars()) + " variables");
  }
  ClusterPartition out;
  out.variable_names = vs.names();
  out.obs_labels = vs.obs_labels();
  out.membership = canonical_labels(labels);

  const auto groups = clusters_from_labels(out.membership);
  out.scores.resize(static_cast<Eigen::Index>(vs.n_obs()), static_cast<Eigen::Index>(groups.size()));
  for (std::size_t k = 0; k < groups.size(); ++k) {
    Cluster c;
    c.members = groups[k];
    c.synthetic = leading_component(recode(vs, c.members));
    if (with_sim) c.similarity = cluster_sim_matrix(vs, c.members);
    out.scores.col(static_cast<Eigen::Index>(k)) = c.synthetic.scores;
    out.wss += c.synthetic.eigenvalue;
    out.clusters.push_back(std::move(c));
  }
  out.one_cluster_homogeneity =
      one_cluster_h ? *one_cluster_h
                    : (groups.size() == 1 ? out.wss : one_cluster_homogeneity(vs));
  out.gain = gain_in_cohesion(out.wss, out.one_cluster_homogeneity, vs.n_vars());
  return out;
}

}  // namespace clustvar
