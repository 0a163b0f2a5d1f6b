#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "clustvar/errors.hpp"
#include "clustvar/pcamix.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace clustvar;

namespace {

Variable quali(std::string name, std::vector<std::optional<std::string>> labels) {
  return Variable::qualitative(std::move(name), labels);
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<std::size_t> all_of(const VariableSet& vs) {
  std::vector<std::size_t> idx(vs.n_vars());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

TEST_CASE("recode standardizes quantitative columns with the 1/n deviation") {
  VariableSet vs({Variable::quantitative("x", {2.0, 4.0, 9.0, 1.0})});
  const std::array<std::size_t, 1> one{0};
  const auto m = recode(vs, one);
  REQUIRE(m.matrix.cols() == 1);
  CHECK(std::abs(m.matrix.col(0).mean()) < 1e-12);
  CHECK(m.matrix.col(0).squaredNorm() / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
  // A standardized column is a fixed point.
  VariableSet again({Variable::quantitative("x", to_vector(m.matrix.col(0)))});
  CHECK((recode(again, one).matrix - m.matrix).norm() < 1e-12);
}

TEST_CASE("recode of a two-level qualitative variable") {
  VariableSet vs({quali("z", {"a", "a", "b", "b"})});
  const std::array<std::size_t, 1> one{0};
  const auto m = recode(vs, one);
  REQUIRE(m.matrix.cols() == 2);
  const double h = std::sqrt(2.0) / 2.0;
  Eigen::MatrixXd expected(4, 2);
  expected << h, -h, h, -h, -h, h, -h, h;
  CHECK((m.matrix - expected).norm() < 1e-12);
  CHECK(m.column_owner == std::vector<std::size_t>{0, 0});
}

TEST_CASE("recode orders quantitative columns before indicator blocks") {
  VariableSet vs({quali("z", {"a", "b", "a", "b"}), Variable::quantitative("x", {1, 2, 3, 5})});
  const std::array<std::size_t, 2> both{0, 1};
  const auto m = recode(vs, both);
  CHECK(m.column_owner == std::vector<std::size_t>{1, 0, 0});
}

TEST_CASE("recode raises RareCategoryError when a level or the variance vanishes") {
  VariableSet vs({quali("z", {"a", "b", "c", "a"}), Variable::quantitative("x", {1, 2, 3, 4})});
  const std::array<std::size_t, 1> z{0}, x{1};
  const std::vector<std::size_t> rows{0, 1, 3, 3};
  const auto boot = vs.resample(rows);
  CHECK_THROWS_AS(recode(boot, z), RareCategoryError);
  try {
    recode(boot, z);
  } catch (const RareCategoryError& e) {
    CHECK(e.variable() == "z");
  }
  const std::vector<std::size_t> same{2, 2, 2, 2};
  CHECK_THROWS_AS(recode(vs.resample(same), x), RareCategoryError);
}

TEST_CASE("leading_component on the decathlon Pole.vault / 1500m cluster") {
  const auto vs = fixtures::decathlon();
  const std::vector<std::size_t> members{*vs.index_of("Pole.vault"), *vs.index_of("1500m")};
  const auto y = leading_component(recode(vs, members));
  CHECK(y.squared_loadings[0] == doctest::Approx(0.6237239).epsilon(1e-6));
  CHECK(y.squared_loadings[1] == doctest::Approx(0.6237239).epsilon(1e-6));
  CHECK(y.eigenvalue == doctest::Approx(1.2474478).epsilon(1e-6));
  CHECK(cluster_homogeneity(vs, members) == doctest::Approx(1.2474478).epsilon(1e-6));
}

TEST_CASE("leading_component of a singleton quantitative cluster") {
  VariableSet vs({Variable::quantitative("x", {3, 1, 4, 1, 5, 9})});
  const std::array<std::size_t, 1> one{0};
  const auto m = recode(vs, one);
  const auto y = leading_component(m);
  CHECK(y.eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(y.squared_loadings[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((y.scores - m.matrix.col(0)).norm() < 1e-10);  // sign convention: positive correlation
}

TEST_CASE("two identical quantitative variables") {
  const std::vector<double> x{1, 5, 2, 8, 3};
  VariableSet vs({Variable::quantitative("a", x), Variable::quantitative("b", x)});
  const auto y = leading_component(recode(vs, all_of(vs)));
  CHECK(y.eigenvalue == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(y.squared_loadings[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(y.squared_loadings[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation_ratio") {
  const auto ab = quali("z", {"a", "a", "b", "b"});
  const std::vector<double> step{1, 1, 5, 5};
  CHECK(correlation_ratio(step, ab) == doctest::Approx(1.0));

  // Category means 2 and 3 around 2.5: between 1, total 5.
  const std::vector<double> ramp{1, 2, 3, 4};
  CHECK(correlation_ratio(ramp, quali("z", {"a", "b", "a", "b"})) == doctest::Approx(0.2));

  const auto one_level = quali("z", {"a", "a", "a", "a"});
  CHECK(correlation_ratio(ramp, one_level) == doctest::Approx(0.0));

  const std::vector<double> flat{2, 2, 2, 2};
  CHECK_THROWS_AS(correlation_ratio(flat, ab), NumericalError);
}

TEST_CASE("cluster_homogeneity") {
  SUBCASE("singletons are exactly 1") {
    VariableSet vs({quali("z", {"a", "b", "c", "a", "b"}), Variable::quantitative("x", {1, 2, 3, 4, 6})});
    const std::array<std::size_t, 1> z{0}, x{1};
    CHECK(cluster_homogeneity(vs, z) == 1.0);
    CHECK(cluster_homogeneity(vs, x) == 1.0);
  }
  SUBCASE("uncorrelated pair") {
    VariableSet vs({Variable::quantitative("x", {1, -1, 1, -1}),
                    Variable::quantitative("y", {1, 1, -1, -1})});
    CHECK(cluster_homogeneity(vs, all_of(vs)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("partition_homogeneity and gain_in_cohesion") {
  const auto vs = fixtures::decathlon();
  std::vector<std::vector<std::size_t>> singletons;
  for (std::size_t j = 0; j < vs.n_vars(); ++j) singletons.push_back({j});
  CHECK(partition_homogeneity(vs, singletons) == doctest::Approx(10.0));
  CHECK(gain_in_cohesion(vs, singletons) == doctest::Approx(100.0));

  const std::vector<std::vector<std::size_t>> whole{all_of(vs)};
  const double h1 = partition_homogeneity(vs, whole);
  CHECK(h1 == doctest::Approx(oracle::leading_eigenvalue(vs, all_of(vs))).epsilon(1e-10));
  CHECK(gain_in_cohesion(vs, whole) == doctest::Approx(0.0));

  const std::vector<double> x{1, 2, 4, 8};
  VariableSet same({Variable::quantitative("a", x), Variable::quantitative("b", x)});
  const std::vector<std::vector<std::size_t>> split{{0}, {1}};
  CHECK_THROWS_AS(gain_in_cohesion(same, split), NumericalError);
}

TEST_CASE("property: synthetic variable identities on random mixed clusters") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 8 + seed % 23;
    const std::size_t p = 1 + seed % 6;
    const auto vs = oracle::random_mixed(seed, n, p);
    const auto members = all_of(vs);
    const auto m = recode(vs, members);
    const auto y = leading_component(m);
    CAPTURE(seed);

    // Var(y) = lambda = sum of squared loadings.
    const double sum = std::accumulate(y.squared_loadings.begin(), y.squared_loadings.end(), 0.0);
    CHECK(std::abs(sum - y.eigenvalue) < 1e-8);
    CHECK(std::abs(y.scores.mean()) < 1e-8);
    CHECK(std::abs(y.scores.squaredNorm() / static_cast<double>(n) - y.eigenvalue) < 1e-8);

    // Bounds.
    CHECK(y.eigenvalue >= 1.0 - 1e-10);
    CHECK(y.eigenvalue <= static_cast<double>(m.matrix.cols()) + 1e-10);

    // Loadings reproduced from the scores.
    const auto scores = to_vector(y.scores);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto& v = vs.variable(members[k]);
      const double direct = v.is_quantitative() ? squared_correlation(scores, v.values)
                                                : correlation_ratio(scores, v);
      CHECK(std::abs(direct - y.squared_loadings[k]) < 1e-8);
      CHECK(y.squared_loadings[k] >= -1e-12);
      CHECK(y.squared_loadings[k] <= 1.0 + 1e-12);
    }

    // Spectrum against the hand-written Jacobi oracle.
    if (m.matrix.cols() <= 6) {
      const auto expected = oracle::spectrum(vs, members);
      for (Eigen::Index i = 0; i < y.spectrum.size(); ++i) {
        CHECK(std::abs(y.spectrum(i) - expected[static_cast<std::size_t>(i)]) < 1e-10);
      }
    }
  }
}

TEST_CASE("property: two quantitative variables give lambda = 1 + |r|") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng() % 30;
    std::vector<double> x(n), z(n);
    const double mix = normal(rng);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = normal(rng);
      z[i] = mix * x[i] + normal(rng);
    }
    VariableSet vs({Variable::quantitative("x", x), Variable::quantitative("z", z)});
    const double r = std::abs(oracle::pearson_r(x, z));
    const auto y = leading_component(recode(vs, all_of(vs)));
    CHECK(std::abs(y.eigenvalue - (1.0 + r)) < 1e-10);
    CHECK(std::abs(y.squared_loadings[0] - (1.0 + r) / 2.0) < 1e-10);
    CHECK(std::abs(y.squared_loadings[1] - (1.0 + r) / 2.0) < 1e-10);
  }
}

TEST_CASE("property: a lone qualitative variable has unit eigenvalues and eta^2 = 1") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto vs = oracle::random_mixed(seed, 10 + seed % 15, 6, 1.0);
    const std::array<std::size_t, 1> one{0};
    const auto y = leading_component(recode(vs, one));
    const auto levels = vs.variable(0).levels.size();
    for (Eigen::Index i = 0; i < y.spectrum.size(); ++i) {
      if (static_cast<std::size_t>(i) + 1 < levels) {
        CHECK(y.spectrum(i) == doctest::Approx(1.0).epsilon(1e-10));
      } else {
        CHECK(std::abs(y.spectrum(i)) < 1e-10);
      }
    }
    CHECK(correlation_ratio(to_vector(y.scores), vs.variable(0)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("sign convention: the top quantitative member correlates positively") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto vs = oracle::random_mixed(seed, 15, 4, 0.3);
    const auto members = all_of(vs);
    const auto y = leading_component(recode(vs, members));
    std::optional<std::size_t> top;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (vs.variable(k).is_quantitative() &&
          (!top || y.squared_loadings[k] > y.squared_loadings[*top])) {
        top = k;
      }
    }
    if (!top) continue;
    CHECK(oracle::pearson_r(to_vector(y.scores), vs.variable(*top).values) > 0.0);
  }
}
