#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "randinf/engine.hpp"
#include "randinf/groups.hpp"

using namespace randinf;

namespace {

// Independent brute force over all sign vectors: rank, tie count and φ
// straight from the definitions.
struct Oracle {
  double phi;
  double p_value;
  std::size_t k;
};

Oracle sign_change_oracle(const std::vector<double>& x, double level) {
  const std::size_t n = x.size();
  const std::size_t m = std::size_t{1} << n;
  std::vector<double> t;
  for (std::size_t mask = 0; mask < m; ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ((mask >> i) & 1 ? -x[i] : x[i]);
    t.push_back(s / static_cast<double>(n));
  }
  double t_obs = 0.0;
  for (double v : x) t_obs += v;
  t_obs /= static_cast<double>(n);
  std::sort(t.begin(), t.end());
  const auto k = m - static_cast<std::size_t>(std::floor(static_cast<double>(m) * level + 1e-12));
  const double tk = t[k - 1];
  double above = 0, equal = 0, at_least = 0;
  for (double v : t) {
    above += v > tk;
    equal += v == tk;
    at_least += v >= t_obs;
  }
  const double a = (static_cast<double>(m) * level - above) / equal;
  const double phi = t_obs > tk ? 1.0 : (t_obs == tk ? a : 0.0);
  return {phi, at_least / static_cast<double>(m), k};
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("identity group gives phi = level") {
    const auto d = engine::run_randomization_test(Sample({0.3, -1.2, 4.0}), ExplicitGroup{{Transform::identity(3)}},
                                                  Statistic::abs_mean(), 0.05);
    CHECK(d.M == 1);
    CHECK(d.k == 1);
    CHECK(d.M_plus == 0);
    CHECK(d.M_zero == 1);
    CHECK(d.a_x == doctest::Approx(0.05));
    CHECK(d.phi == doctest::Approx(0.05));
  }

  TEST_CASE("sample (1,2) with sign changes") {
    const Sample x({1.0, 2.0});
    const auto g = groups::sign_change_group(2);
    const auto d = engine::run_randomization_test(x, g, Statistic::mean(), 0.25);
    const auto o = sign_change_oracle({1.0, 2.0}, 0.25);
    CHECK(d.k == 3);
    CHECK(d.k == o.k);
    CHECK(d.phi == 1.0);
    CHECK(d.phi == o.phi);
    CHECK(d.p_value == 0.25);

    const auto d2 = engine::run_randomization_test(x, g, Statistic::mean(), 0.05);
    const auto o2 = sign_change_oracle({1.0, 2.0}, 0.05);
    CHECK(d2.k == 4);
    CHECK(d2.M_plus == 0);
    CHECK(d2.M_zero == 1);
    CHECK(d2.phi == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(d2.phi == doctest::Approx(o2.phi).epsilon(1e-12));
  }

  TEST_CASE("random samples match the brute-force oracle") {
    std::mt19937_64 eng(11);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 1 + static_cast<std::size_t>(trial % 7);
      std::vector<double> x(n);
      for (auto& v : x) v = std::round(4.0 * z(eng)) / 2.0;  // coarse values force ties
      for (double level : {0.05, 0.1, 0.25, 1.0 / 3.0}) {
        const auto d = engine::run_randomization_test(Sample(x), groups::sign_change_group(n), Statistic::mean(), level);
        const auto o = sign_change_oracle(x, level);
        CHECK(d.phi == doctest::Approx(o.phi).epsilon(1e-12));
        CHECK(d.p_value == doctest::Approx(o.p_value));
      }
    }
  }

  TEST_CASE("group average of phi on the (1,2) example") {
    CHECK(engine::group_average_phi(Sample({1.0, 2.0}), groups::sign_change_group(2), Statistic::mean(), 0.25) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(engine::group_average_phi(Sample({5.0}), ExplicitGroup{{Transform::identity(1)}}, Statistic::mean(), 0.05) ==
          doctest::Approx(0.05).epsilon(1e-14));
  }

  TEST_CASE("group average equals level for n=8 sign changes") {
    std::mt19937_64 eng(5);
    std::normal_distribution<double> z;
    const auto g = groups::sign_change_group(8);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(8);
      for (auto& v : x) v = z(eng);
      const double avg = engine::group_average_phi(Sample(x), g, Statistic::abs_mean(), 1.0 / 3.0);
      CHECK(std::abs(avg - 1.0 / 3.0) <= 1e-12);
    }
  }

  TEST_CASE("group average over a level grid") {
    std::vector<double> levels;
    for (int i = 1; i <= 50; ++i) levels.push_back(i / 100.0);
    const auto g = groups::permutation_group(5, groups::PermutationMode::Full);
    const auto avg = engine::group_average_phi(Sample({0.5, -1.0, 2.0, 2.0, 0.1}), g, Statistic::t_stat(), levels);
    for (std::size_t i = 0; i < levels.size(); ++i) CHECK(std::abs(avg[i] - levels[i]) <= 1e-12);
  }

  TEST_CASE("group average needs an explicit group") {
    SampledGroup s;
    s.n = 2;
    CHECK_THROWS_AS(engine::group_average_phi(Sample({1.0, 2.0}), s, Statistic::mean(), 0.1), Error);
  }

  TEST_CASE("decision does not depend on element order") {
    const auto g = std::get<ExplicitGroup>(groups::sign_change_group(5));
    auto shuffled = g.elements;
    std::mt19937_64 eng(2);
    std::shuffle(shuffled.begin() + 1, shuffled.end(), eng);
    const std::vector<double> x{0.4, -1.1, 0.9, 2.0, -0.3};
    const auto a = engine::run_randomization_test(x, g.elements, Statistic::t_stat(), 0.1);
    const auto b = engine::run_randomization_test(x, shuffled, Statistic::t_stat(), 0.1);
    CHECK(a.phi == b.phi);
    CHECK(a.p_value == b.p_value);
  }

  TEST_CASE("p-values lie on the 1/M grid") {
    const auto g = std::get<ExplicitGroup>(groups::sign_change_group(4));
    std::mt19937_64 eng(8);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(4);
      for (auto& v : x) v = z(eng);
      const auto d = engine::run_randomization_test(x, g.elements, Statistic::abs_mean(), 0.1);
      const double scaled = d.p_value * 16.0;
      CHECK(scaled == std::round(scaled));
      CHECK(d.p_value > 0.0);
      CHECK(d.p_value <= 1.0);
    }
  }

  TEST_CASE("level must be inside (0,1)") {
    CHECK_THROWS_AS(engine::run_randomization_test(Sample({1.0}), groups::sign_change_group(1), Statistic::mean(), 1.0),
                    Error);
    CHECK_THROWS_AS(engine::run_randomization_test(Sample({1.0}), groups::sign_change_group(1), Statistic::mean(), 0.0),
                    Error);
  }

  TEST_CASE("closure past the cap") {
    GeneratedGroup g{{Transform::permutation({1, 2, 3, 4, 5, 6, 7, 0}), Transform::permutation({1, 0, 2, 3, 4, 5, 6, 7})},
                     100};
    try {
      engine::run_randomization_test(Sample({1, 2, 3, 4, 5, 6, 7, 8}), g, Statistic::mean(), 0.05);
      FAIL("expected GroupTooLarge");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GroupTooLarge);
    }
  }

  TEST_CASE("apply_transform examples") {
    CHECK(engine::apply_transform(Transform::identity(3), Sample({3, 1, 2})) == Sample({3, 1, 2}));
    const double r2 = std::sqrt(2.0);
    const Alphabet al({-1.0, 0.0, 1.0, r2});
    CHECK(engine::apply_transform(Transform::atom_swap(al, 1, 3), Sample({0.0, 1.0, r2})) == Sample({r2, 1.0, 0.0}));
    const auto ps = Transform::point_swap({1.0, 1.0}, {0.0, 2.0});
    CHECK(engine::apply_transform(ps, Sample({1.0, 1.0})) == Sample({0.0, 2.0}));
    CHECK(engine::apply_transform(ps, Sample({1.0, 2.0})) == Sample({1.0, 2.0}));
    CHECK_THROWS_AS(engine::apply_transform(Transform::identity(2), Sample({1.0, 2.0, 3.0})), Error);
    CHECK_THROWS_AS(engine::apply_transform(Transform::atom_swap(al, 1, 3), Sample({0.5})), Error);
  }
}
