#include "clustvar/similarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "clustvar/errors.hpp"
#include "clustvar/pcamix.hpp"

namespace clustvar {

namespace {

double top_eigenvalue(const Eigen::MatrixXd& sym) {
  if (sym.rows() == 1) return sym(0, 0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(sym.rows() - 1);
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double canonical_corr(const Eigen::MatrixXd& e, const Eigen::MatrixXd& f) {
  if (e.rows() != f.rows()) throw DataError("canonical_corr: blocks have different row counts");
  if (e.size() == 0 || f.size() == 0 || e.isZero(0.0) || f.isZero(0.0)) {
    throw NumericalError("canonical_corr: zero block");
  }
  const Eigen::Index n = e.rows(), r1 = e.cols(), r2 = f.cols();
  const Eigen::Index smallest = std::min({n, r1, r2});

  // A single-column block reduces the eigenproblem to a squared norm.
  if (r1 == 1) return clamp_unit((f.transpose() * e).squaredNorm());
  if (r2 == 1) return clamp_unit((e.transpose() * f).squaredNorm());

  const Eigen::MatrixXd ef = e.transpose() * f;  // r1 x r2
  if (smallest == n) {
    // E (E'F F'E) E' shares its nonzero spectrum with the n x n product of
    // the two projections, and is symmetric.
    const Eigen::MatrixXd efe = e * ef;
    return clamp_unit(top_eigenvalue(efe * efe.transpose()));
  }
  if (smallest == r1) return clamp_unit(top_eigenvalue(ef * ef.transpose()));
  return clamp_unit(top_eigenvalue(ef.transpose() * ef));
}

Eigen::MatrixXd variable_block(const VariableSet& vs, std::size_t j) {
  const std::array<std::size_t, 1> one{j};
  return recode(vs, one).matrix / std::sqrt(static_cast<double>(vs.n_obs()));
}

Eigen::MatrixXd quantitative_block(const Eigen::VectorXd& u) {
  const Eigen::VectorXd centered = u.array() - u.mean();
  const double norm = centered.norm();
  if (!(norm > 0.0)) throw NumericalError("quantitative_block: constant vector");
  // standardized / sqrt(n) == centered / ||centered||
  return centered / norm;
}

double mixed_var_sim(const VariableSet& vs, std::size_t i, std::size_t j) {
  if (i == j) return 1.0;
  if (i > j) std::swap(i, j);
  return canonical_corr(variable_block(vs, i), variable_block(vs, j));
}

double similarity_to_scores(const VariableSet& vs, std::size_t j, const Eigen::VectorXd& scores) {
  return canonical_corr(variable_block(vs, j), quantitative_block(scores));
}

SimilarityMatrix cluster_sim_matrix(const VariableSet& vs, std::span<const std::size_t> members) {
  SimilarityMatrix out;
  const auto k = static_cast<Eigen::Index>(members.size());
  out.values = Eigen::MatrixXd::Identity(k, k);
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(members.size());
  for (std::size_t j : members) {
    out.names.push_back(vs.variable(j).name);
    blocks.push_back(variable_block(vs, j));
  }
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      const double s = canonical_corr(blocks[static_cast<std::size_t>(a)],
                                      blocks[static_cast<std::size_t>(b)]);
      out.values(a, b) = s;
      out.values(b, a) = s;
    }
  }
  return out;
}

}  // namespace clustvar
