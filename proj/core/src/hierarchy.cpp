#include "clustvar/hierarchy.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

#include "clustvar/errors.hpp"
#include "clustvar/parallel.hpp"
#include "clustvar/pcamix.hpp"

namespace clustvar {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kHeightFloor = -1e-10;

std::string format_length(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string newick_label(const std::string& name) {
  if (name.find_first_of(" \t()[]':;,") == std::string::npos) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

struct ActiveCluster {
  std::size_t node;
  std::vector<std::size_t> members;
  double homogeneity;
};

std::vector<std::size_t> merged_members(std::span<const std::size_t> a,
                                        std::span<const std::size_t> b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Hierarchy

Hierarchy::Hierarchy(std::vector<std::string> leaves, std::vector<Merge> merges)
    : leaves_(std::move(leaves)), merges_(std::move(merges)) {
  const std::size_t p = leaves_.size();
  if (p < 1 || merges_.size() + 1 != p) {
    throw DataError("hierarchy over " + std::to_string(p) + " leaves needs " +
                    std::to_string(p == 0 ? 0 : p - 1) + " merges");
  }
  for (std::size_t t = 0; t < merges_.size(); ++t) {
    const auto& m = merges_[t];
    if (m.left >= p + t || m.right >= p + t || m.left == m.right) {
      throw DataError("hierarchy merge " + std::to_string(t) + " refers to an unknown node");
    }
    for (std::size_t child : {m.left, m.right}) {
      if (child < p) continue;
      const double ch = merges_[child - p].height;
      if (ch > m.height + kTieTolerance) inversions_.push_back({t, m.height, ch});
    }
  }
}

double Hierarchy::node_height(std::size_t node) const {
  if (node < leaves_.size()) return 0.0;
  return merges_.at(node - leaves_.size()).height;
}

std::vector<std::size_t> Hierarchy::labels_at(std::size_t k) const {
  const std::size_t p = leaves_.size();
  if (k < 1 || k > p) {
    throw DataError("number of clusters must be in [1, " + std::to_string(p) + "], got " +
                    std::to_string(k));
  }
  std::vector<std::size_t> labels(p);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  for (std::size_t t = 0; t < p - k; ++t) {
    const auto& members = merges_[t].members;
    for (std::size_t j : members) labels[j] = members.front();
  }
  return canonical_labels(labels);
}

// ---------------------------------------------------------------- algorithm

double merge_dissimilarity(const VariableSet& vs, std::span<const std::size_t> a,
                           std::span<const std::size_t> b) {
  if (a.empty() || b.empty()) throw DataError("merge_dissimilarity: empty cluster");
  std::vector<std::size_t> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto both = merged_members(sa, sb);
  if (std::adjacent_find(both.begin(), both.end()) != both.end()) {
    throw DataError("merge_dissimilarity: clusters overlap");
  }
  return cluster_homogeneity(vs, sa) + cluster_homogeneity(vs, sb) -
         cluster_homogeneity(vs, both);
}

Hierarchy hclustvar(const VariableSet& vs, const HclustOptions& options) {
  const std::size_t p = vs.n_vars();
  if (p < 2) throw DataError("hclustvar needs at least 2 variables");

  std::vector<ActiveCluster> active;
  active.reserve(p);
  for (std::size_t j = 0; j < p; ++j) active.push_back({j, {j}, 1.0});

  // Candidate table keyed by (node, node) with the smaller node first.
  std::map<std::pair<std::size_t, std::size_t>, double> dissim;
  auto key = [](std::size_t a, std::size_t b) { return std::pair{std::min(a, b), std::max(a, b)}; };

  std::size_t step = 0;
  auto fill = [&](const ActiveCluster& fresh, std::span<const ActiveCluster> others) {
    std::vector<double> d(others.size());
    try {
      detail::parallel_for(others.size(), options.threads, [&](std::size_t i) {
        const auto both = merged_members(fresh.members, others[i].members);
        d[i] = fresh.homogeneity + others[i].homogeneity - cluster_homogeneity(vs, both);
      });
    } catch (const RareCategoryError& e) {
      throw RareCategoryError(e.variable(), "hclustvar, merge step " + std::to_string(step + 1) +
                                                ": " + e.what());
    }
    for (std::size_t i = 0; i < others.size(); ++i) dissim[key(fresh.node, others[i].node)] = d[i];
  };

  for (std::size_t i = 1; i < p; ++i) fill(active[i], std::span(active).first(i));

  std::vector<Merge> merges;
  merges.reserve(p - 1);
  for (; step + 1 < p; ++step) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [nodes, d] : dissim) best = std::min(best, d);

    // Among near-minimal pairs, prefer the lowest (smaller min index, larger min index).
    std::size_t ia = 0, ib = 0;
    std::tuple<std::size_t, std::size_t> best_key{p, p};
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = dissim.at(key(active[a].node, active[b].node));
        if (d > best + kTieTolerance) continue;
        const std::size_t ma = active[a].members.front(), mb = active[b].members.front();
        const std::tuple<std::size_t, std::size_t> k{std::min(ma, mb), std::max(ma, mb)};
        if (k < best_key) {
          best_key = k;
          ia = a;
          ib = b;
        }
      }
    }
    if (active[ib].members.front() < active[ia].members.front()) std::swap(ia, ib);
    ActiveCluster& a = active[ia];
    ActiveCluster& b = active[ib];

    double height = dissim.at(key(a.node, b.node));
    if (height < 0.0 && height >= kHeightFloor) height = 0.0;

    ActiveCluster fresh{p + step, merged_members(a.members, b.members), 0.0};
    fresh.homogeneity = a.homogeneity + b.homogeneity - height;
    merges.push_back({a.node, b.node, height, fresh.members});

    for (auto it = dissim.begin(); it != dissim.end();) {
      const auto [x, y] = it->first;
      if (x == a.node || y == a.node || x == b.node || y == b.node) {
        it = dissim.erase(it);
      } else {
        ++it;
      }
    }
    const auto hi = std::max(ia, ib), lo = std::min(ia, ib);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(hi));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(lo));
    if (!active.empty()) fill(fresh, active);
    active.push_back(std::move(fresh));
  }
  return Hierarchy(vs.names(), std::move(merges));
}

ClusterPartition cut(const Hierarchy& h, const VariableSet& vs, std::size_t k, bool with_sim) {
  if (h.n_leaves() != vs.n_vars()) {
    throw DataError("hierarchy has " + std::to_string(h.n_leaves()) + " leaves but the data has " +
                    std::to_string(vs.n_vars()) + " variables");
  }
  return make_partition(vs, h.labels_at(k), with_sim);
}

std::vector<AggregationLevel> aggregation_levels(const Hierarchy& h) {
  std::vector<AggregationLevel> out;
  out.reserve(h.merges().size());
  for (std::size_t t = 0; t < h.merges().size(); ++t) {
    out.push_back({h.n_leaves() - t, h.merges()[t].height});
  }
  return out;
}

std::string to_newick(const Hierarchy& h) {
  const std::size_t p = h.n_leaves();
  if (p == 1) return newick_label(h.leaves().front()) + ";";
  std::string out;
  auto emit = [&](auto&& self, std::size_t node, std::optional<double> parent_height) -> void {
    if (node < p) {
      out += newick_label(h.leaves()[node]);
    } else {
      const auto& m = h.merges()[node - p];
      out += '(';
      self(self, m.left, m.height);
      out += ',';
      self(self, m.right, m.height);
      out += ')';
    }
    if (parent_height) {
      out += ':';
      out += format_length(std::max(*parent_height - h.node_height(node), 0.0));
    }
  };
  emit(emit, 2 * p - 2, std::nullopt);
  out += ';';
  return out;
}

}  // namespace clustvar
