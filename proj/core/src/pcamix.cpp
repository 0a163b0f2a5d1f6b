#include "clustvar/pcamix.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "clustvar/errors.hpp"

namespace clustvar {

namespace {

Eigen::VectorXd standardized_column(const Variable& v) {
  const auto n = static_cast<Eigen::Index>(v.values.size());
  Eigen::Map<const Eigen::VectorXd> x(v.values.data(), n);
  if (x.hasNaN()) {
    throw DataError("variable '" + v.name + "' has missing values; impute before recoding");
  }
  bool constant = true;
  for (Eigen::Index i = 1; i < n && constant; ++i) constant = x(i) == x(0);
  if (constant) {
    throw RareCategoryError(v.name, "variable '" + v.name +
                                        "' is constant on these observations and cannot be standardized");
  }
  Eigen::VectorXd centered = x.array() - x.mean();
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
  return centered / sd;
}

void append_columns(Eigen::MatrixXd& m, Eigen::Index& col, const Eigen::MatrixXd& block) {
  m.middleCols(col, block.cols()) = block;
  col += block.cols();
}

}  // namespace

RecodedMatrix recode(const VariableSet& vs, std::span<const std::size_t> members) {
  if (members.empty()) throw DataError("recode: empty member set");
  const auto n = static_cast<Eigen::Index>(vs.n_obs());
  const double dn = static_cast<double>(vs.n_obs());

  RecodedMatrix out;
  out.n_obs = vs.n_obs();
  out.members.assign(members.begin(), members.end());
  for (std::size_t j : members) out.member_kinds.push_back(vs.variable(j).kind);

  Eigen::Index width = 0;
  for (std::size_t j : members) {
    const auto& v = vs.variable(j);
    width += v.is_quantitative() ? 1 : static_cast<Eigen::Index>(v.levels.size());
  }
  out.matrix.resize(n, width);
  out.column_owner.reserve(static_cast<std::size_t>(width));

  Eigen::Index col = 0;
  for (std::size_t j : members) {
    const auto& v = vs.variable(j);
    if (!v.is_quantitative()) continue;
    out.matrix.col(col++) = standardized_column(v);
    out.column_owner.push_back(j);
  }
  for (std::size_t j : members) {
    const auto& v = vs.variable(j);
    if (v.is_quantitative()) continue;
    const auto counts = v.level_counts();
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (counts[s] == 0) {
        throw RareCategoryError(v.name, "level '" + v.levels[s] + "' of variable '" + v.name +
                                            "' has no observations; its indicator column is constant");
      }
    }
    Eigen::MatrixXd block = build_indicator(v).matrix;
    for (Eigen::Index s = 0; s < block.cols(); ++s) {
      const double freq = static_cast<double>(counts[static_cast<std::size_t>(s)]) / dn;
      block.col(s) = (block.col(s).array() - freq) / std::sqrt(freq);
      out.column_owner.push_back(j);
    }
    append_columns(out.matrix, col, block);
  }
  return out;
}

SyntheticVariable leading_component(const RecodedMatrix& m) {
  if (m.matrix.size() == 0) throw DataError("leading_component: empty matrix");
  const double sqrt_n = std::sqrt(static_cast<double>(m.n_obs));
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.matrix / sqrt_n,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::VectorXd v = svd.matrixV().col(0);
  Eigen::VectorXd u = svd.matrixU().col(0);

  SyntheticVariable out;
  out.members = m.members;
  out.spectrum = sigma.array().square();
  out.eigenvalue = out.spectrum(0);

  // A variable's squared loading is lambda times the squared norm of its
  // block of the first right singular vector.
  out.squared_loadings.assign(m.members.size(), 0.0);
  std::vector<Eigen::Index> first_col(m.members.size(), -1);
  for (std::size_t k = 0; k < m.members.size(); ++k) {
    for (std::size_t c = 0; c < m.column_owner.size(); ++c) {
      if (m.column_owner[c] != m.members[k]) continue;
      const auto ci = static_cast<Eigen::Index>(c);
      out.squared_loadings[k] += v(ci) * v(ci);
      if (first_col[k] < 0) first_col[k] = ci;
    }
    out.squared_loadings[k] *= out.eigenvalue;
  }

  // Sign: the highest-loading quantitative member correlates positively with
  // the scores. Without one, the largest entry of the highest-loading
  // member's block is made positive.
  std::optional<std::size_t> anchor;
  double best = -1.0;
  for (std::size_t k = 0; k < m.members.size(); ++k) {
    if (m.member_kinds[k] == VariableKind::Quantitative && out.squared_loadings[k] > best) {
      best = out.squared_loadings[k];
      anchor = k;
    }
  }
  double pivot = 0.0;
  if (anchor) {
    pivot = v(first_col[*anchor]);
  } else {
    std::size_t top = 0;
    for (std::size_t k = 1; k < m.members.size(); ++k) {
      if (out.squared_loadings[k] > out.squared_loadings[top]) top = k;
    }
    for (std::size_t c = 0; c < m.column_owner.size(); ++c) {
      if (m.column_owner[c] == m.members[top] &&
          std::abs(v(static_cast<Eigen::Index>(c))) > std::abs(pivot)) {
        pivot = v(static_cast<Eigen::Index>(c));
      }
    }
  }
  if (pivot < 0.0) u = -u;

  out.scores = sqrt_n * sigma(0) * u;
  return out;
}

double leading_eigenvalue(const RecodedMatrix& m) {
  if (m.matrix.size() == 0) throw DataError("leading_eigenvalue: empty matrix");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.matrix / std::sqrt(static_cast<double>(m.n_obs)));
  const double s = svd.singularValues()(0);
  return s * s;
}

double correlation_ratio(std::span<const double> u, const Variable& z) {
  if (!z.is_qualitative()) throw DataError("correlation_ratio: '" + z.name + "' is not qualitative");
  if (u.size() != z.size()) throw DataError("correlation_ratio: length mismatch");
  const double n = static_cast<double>(u.size());
  const double mean = std::accumulate(u.begin(), u.end(), 0.0) / n;
  double total = 0.0;
  for (double x : u) total += (x - mean) * (x - mean);
  if (!(total > 0.0)) throw NumericalError("correlation_ratio: constant vector");

  std::vector<double> sums(z.levels.size(), 0.0);
  std::vector<double> counts(z.levels.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (z.codes[i] < 0) continue;
    sums[static_cast<std::size_t>(z.codes[i])] += u[i];
    counts[static_cast<std::size_t>(z.codes[i])] += 1.0;
  }
  double between = 0.0;
  for (std::size_t s = 0; s < sums.size(); ++s) {
    if (counts[s] == 0.0) continue;
    const double d = sums[s] / counts[s] - mean;
    between += counts[s] * d * d;
  }
  return between / total;
}

double squared_correlation(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DataError("squared_correlation: length mismatch");
  const auto n = static_cast<Eigen::Index>(u.size());
  const Eigen::Map<const Eigen::VectorXd> a(u.data(), n), b(v.data(), n);
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  const double den = ca.squaredNorm() * cb.squaredNorm();
  if (!(den > 0.0)) throw NumericalError("squared_correlation: constant vector");
  const double dot = ca.dot(cb);
  return dot * dot / den;
}

double cluster_homogeneity(const VariableSet& vs, std::span<const std::size_t> members) {
  const auto m = recode(vs, members);
  // A single standardized variable has leading eigenvalue 1 by construction.
  if (members.size() == 1) return 1.0;
  return leading_eigenvalue(m);
}

double partition_homogeneity(const VariableSet& vs,
                             const std::vector<std::vector<std::size_t>>& clusters) {
  double h = 0.0;
  for (const auto& c : clusters) {
    if (c.empty()) throw DataError("partition_homogeneity: empty cluster");
    h += cluster_homogeneity(vs, c);
  }
  return h;
}

double gain_in_cohesion(double partition_h, double one_cluster_h, std::size_t p) {
  const double reachable = static_cast<double>(p) - one_cluster_h;
  if (std::abs(reachable) <= 1e-12 * static_cast<double>(p)) {
    throw NumericalError(
        "gain in cohesion undefined: the one-cluster homogeneity equals p (all variables carry the same information)");
  }
  return 100.0 * (partition_h - one_cluster_h) / reachable;
}

double gain_in_cohesion(const VariableSet& vs,
                        const std::vector<std::vector<std::size_t>>& clusters) {
  std::vector<std::size_t> all(vs.n_vars());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return gain_in_cohesion(partition_homogeneity(vs, clusters), cluster_homogeneity(vs, all),
                          vs.n_vars());
}

std::vector<std::vector<std::size_t>> clusters_from_labels(std::span<const std::size_t> labels) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] >= clusters.size()) clusters.resize(labels[j] + 1);
    clusters[labels[j]].push_back(j);
  }
  return clusters;
}

}  // namespace clustvar
