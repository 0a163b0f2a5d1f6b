#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "clustvar/data_model.hpp"

namespace clustvar {

/// The PCAMIX matrix of a group of variables: standardized quantitative
/// columns followed by standardized indicator blocks, both in member order.
struct RecodedMatrix {
  Eigen::MatrixXd matrix;
  /// Variable index (into the VariableSet) owning each column.
  std::vector<std::size_t> column_owner;
  std::vector<std::size_t> members;
  std::vector<VariableKind> member_kinds;
  std::size_t n_obs = 0;
};

/// First PCAMIX component of a group of variables.
struct SyntheticVariable {
  Eigen::VectorXd scores;
  double eigenvalue = 0.0;
  /// Aligned with `members`: r^2 for quantitative, eta^2 for qualitative.
  std::vector<double> squared_loadings;
  std::vector<std::size_t> members;
  /// All eigenvalues, descending.
  Eigen::VectorXd spectrum;
};

/// Centers and scales the members' columns. Quantitative columns are divided
/// by their 1/n standard deviation; each centered indicator column by
/// sqrt(n_s / n). Throws RareCategoryError for a constant column or a level
/// without observations.
RecodedMatrix recode(const VariableSet& vs, std::span<const std::size_t> members);

SyntheticVariable leading_component(const RecodedMatrix& m);

/// Largest eigenvalue only; cheaper than leading_component.
double leading_eigenvalue(const RecodedMatrix& m);

/// Share of the variance of `u` explained by the levels of `z`. Rows where
/// `z` is missing belong to no level.
double correlation_ratio(std::span<const double> u, const Variable& z);

double squared_correlation(std::span<const double> u, std::span<const double> v);

/// H(C): leading eigenvalue of the members' recoded matrix.
double cluster_homogeneity(const VariableSet& vs, std::span<const std::size_t> members);

/// Sum of cluster homogeneities.
double partition_homogeneity(const VariableSet& vs,
                             const std::vector<std::vector<std::size_t>>& clusters);

/// Percentage of reachable homogeneity captured by a partition:
/// 100 (H(P_K) - H(P_1)) / (p - H(P_1)).
double gain_in_cohesion(double partition_h, double one_cluster_h, std::size_t p);
double gain_in_cohesion(const VariableSet& vs,
                        const std::vector<std::vector<std::size_t>>& clusters);

/// Groups 0-based cluster labels into member lists, ordered by label.
std::vector<std::vector<std::size_t>> clusters_from_labels(std::span<const std::size_t> labels);

}  // namespace clustvar
