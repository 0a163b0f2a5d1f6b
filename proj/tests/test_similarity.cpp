#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "clustvar/pcamix.hpp"
#include "clustvar/similarity.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace clustvar;

namespace {

Variable quali(std::string name, std::vector<std::optional<std::string>> labels) {
  return Variable::qualitative(std::move(name), labels);
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

TEST_CASE("canonical_corr of a block with itself") {
  VariableSet vs({quali("z", {"a", "b", "c", "a", "b", "c", "a"})});
  const auto e = variable_block(vs, 0);
  const Eigen::MatrixXd gram = e.transpose() * e;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double top = eig.eigenvalues().maxCoeff();
  CHECK(canonical_corr(e, e) == doctest::Approx(top * top).epsilon(1e-12));
  CHECK(canonical_corr(e, e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonical_corr uses the n x n route when n is smallest") {
  // n = 3 rows, two 3-level qualitative variables: min(n, r1, r2) = n.
  VariableSet vs({quali("z1", {"a", "b", "c"}), quali("z2", {"c", "a", "b"})});
  const auto e = variable_block(vs, 0);
  const auto f = variable_block(vs, 1);
  const Eigen::MatrixXd ef = e.transpose() * f;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ef * ef.transpose());
  CHECK(canonical_corr(e, f) == doctest::Approx(eig.eigenvalues().maxCoeff()).epsilon(1e-10));
}

TEST_CASE("mixed_var_sim special cases") {
  const auto dec = fixtures::decathlon();
  CHECK(round2(mixed_var_sim(dec, 0, 1)) == doctest::Approx(0.36));
  CHECK(mixed_var_sim(dec, 3, 3) == 1.0);

  VariableSet twins({quali("z1", {"a", "a", "b", "b"}), quali("z2", {"c", "c", "d", "d"})});
  CHECK(mixed_var_sim(twins, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  // Independent check with the hand-written Jacobi solver on the 2 x 2 case matrix.
  const auto e = variable_block(twins, 0);
  const auto f = variable_block(twins, 1);
  const Eigen::MatrixXd ef = e.transpose() * f;
  const Eigen::MatrixXd c = ef * ef.transpose();
  oracle::Matrix m{{c(0, 0), c(0, 1)}, {c(1, 0), c(1, 1)}};
  CHECK(oracle::jacobi_eigenvalues(m).front() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cluster_sim_matrix") {
  SUBCASE("singleton") {
    const auto dec = fixtures::decathlon();
    const std::array<std::size_t, 1> one{4};
    const auto s = cluster_sim_matrix(dec, one);
    CHECK(s.values.rows() == 1);
    CHECK(s.values(0, 0) == 1.0);
    CHECK(s.names == std::vector<std::string>{"400m"});
  }
  SUBCASE("anti-correlated pair") {
    // y = -0.9 x + sqrt(1 - 0.81) w with x, w orthonormal gives r = -0.9 exactly.
    const std::vector<double> x{1, -1, 1, -1};
    const std::vector<double> w{1, 1, -1, -1};
    std::vector<double> y(4);
    for (std::size_t i = 0; i < 4; ++i) y[i] = -0.9 * x[i] + std::sqrt(0.19) * w[i];
    VariableSet vs({Variable::quantitative("x", x), Variable::quantitative("y", y)});
    const std::array<std::size_t, 2> both{0, 1};
    const auto s = cluster_sim_matrix(vs, both);
    CHECK(s.values(0, 1) == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(s.values(1, 0) == s.values(0, 1));
  }
}

TEST_CASE("property: similarity identities on random mixed data") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto vs = oracle::random_mixed(seed, 6 + seed % 25, 6);
    CAPTURE(seed);
    for (std::size_t i = 0; i < vs.n_vars(); ++i) {
      for (std::size_t j = 0; j < vs.n_vars(); ++j) {
        const double s = mixed_var_sim(vs, i, j);
        CHECK(s == mixed_var_sim(vs, j, i));
        CHECK(s >= -1e-10);
        CHECK(s <= 1.0 + 1e-10);
        if (i == j) continue;
        const auto& a = vs.variable(i);
        const auto& b = vs.variable(j);
        if (a.is_quantitative() && b.is_quantitative()) {
          const double r = oracle::pearson_r(a.values, b.values);
          CHECK(std::abs(s - r * r) < 1e-10);
        } else if (a.is_qualitative() && b.is_quantitative()) {
          CHECK(std::abs(s - correlation_ratio(b.values, a)) < 1e-10);
          CHECK(std::abs(s - oracle::eta_squared(b.values, a)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("property: invariance under affine rescaling and level relabelling") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto vs = oracle::random_mixed(seed, 20, 5, 0.5);
    std::vector<Variable> changed = vs.variables();
    for (auto& v : changed) {
      if (v.is_quantitative()) {
        const double scale = (rng() % 2 ? -1.0 : 1.0) * (0.5 + static_cast<double>(rng() % 100) / 10.0);
        for (auto& x : v.values) x = scale * x + 7.0;
      } else {
        // Rename levels and reverse their order.
        std::vector<std::optional<std::string>> labels(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
          labels[i] = "lvl" + std::to_string(v.levels.size() - 1 - static_cast<std::size_t>(v.codes[i]));
        }
        v = Variable::qualitative(v.name, labels);
      }
    }
    const VariableSet other(changed);
    for (std::size_t i = 0; i < vs.n_vars(); ++i) {
      for (std::size_t j = i + 1; j < vs.n_vars(); ++j) {
        CHECK(std::abs(mixed_var_sim(vs, i, j) - mixed_var_sim(other, i, j)) < 1e-10);
      }
    }
  }
}

TEST_CASE("similarity to a synthetic variable reduces to r^2 or eta^2") {
  const auto vs = oracle::random_mixed(17, 25, 5, 0.5);
  const std::vector<std::size_t> members{0, 1, 2, 3, 4};
  const auto y = leading_component(recode(vs, members));
  const std::vector<double> scores(y.scores.data(), y.scores.data() + y.scores.size());
  for (std::size_t j = 0; j < vs.n_vars(); ++j) {
    CHECK(similarity_to_scores(vs, j, y.scores) == doctest::Approx(y.squared_loadings[j]).epsilon(1e-10));
  }
}
