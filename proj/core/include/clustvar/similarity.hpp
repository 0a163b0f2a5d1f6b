#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clustvar/data_model.hpp"

namespace clustvar {

struct SimilarityMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};

/// Squared canonical correlation between two recoded blocks (already divided
/// by sqrt(n)): the first eigenvalue of the smallest of EF'FE', E'FF'E and
/// F'EE'F. Clamped to [0, 1].
double canonical_corr(const Eigen::MatrixXd& e, const Eigen::MatrixXd& f);

/// Recoded block of one variable, scaled by 1/sqrt(n).
Eigen::MatrixXd variable_block(const VariableSet& vs, std::size_t j);

/// Standardized quantitative vector scaled by 1/sqrt(n).
Eigen::MatrixXd quantitative_block(const Eigen::VectorXd& u);

/// r^2 between two quantitative variables, eta^2 between a qualitative and a
/// quantitative one, and the subspace closeness between two qualitative ones.
double mixed_var_sim(const VariableSet& vs, std::size_t i, std::size_t j);

/// Similarity between variable j and a synthetic (quantitative) variable.
double similarity_to_scores(const VariableSet& vs, std::size_t j, const Eigen::VectorXd& scores);

SimilarityMatrix cluster_sim_matrix(const VariableSet& vs, std::span<const std::size_t> members);

}  // namespace clustvar
