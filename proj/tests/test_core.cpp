#include <doctest.h>

#include <cmath>
#include <random>

#include "randinf/core.hpp"
#include "randinf/finite_null.hpp"

using namespace randinf;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("sample validation") {
    CHECK(Sample({1.0, 2.0}).size() == 2);
    CHECK(code_of([] { Sample({}); }) == ErrorCode::EmptySample);
    CHECK(code_of([] { Sample({1.0, NAN}); }) == ErrorCode::NonFiniteValue);
    CHECK(code_of([] { Sample({INFINITY}); }) == ErrorCode::NonFiniteValue);
  }

  TEST_CASE("alphabet validation") {
    CHECK(code_of([] { Alphabet({1.0}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { Alphabet({2.0, 1.0}); }) == ErrorCode::UnsortedAlphabet);
    CHECK(code_of([] { Alphabet({1.0, 1.0}); }) == ErrorCode::UnsortedAlphabet);
    Alphabet a({-1.0, 0.0, 1.0});
    CHECK(a.closed_under_negation());
    CHECK_FALSE(Alphabet({-1.0, 0.0, 2.0}).closed_under_negation());
    CHECK(*a.index_of(1.0) == 2);
    CHECK(code_of([&] { a.require_index(0.5); }) == ErrorCode::AtomNotInAlphabet);
  }

  TEST_CASE("distribution masses") {
    DiscreteDistribution p(Alphabet({-1.0, 0.0, 1.0}), {0.5, 0.0, 0.5});
    CHECK(p.mass_of(0.0) == 0.0);
    CHECK(code_of([] { DiscreteDistribution(Alphabet({0.0, 1.0}), {0.5, 0.4}); }) == ErrorCode::MassNotNormalized);
    CHECK(code_of([] { DiscreteDistribution(Alphabet({0.0, 1.0}), {1.2, -0.2}); }) == ErrorCode::MassNotNormalized);
  }

  TEST_CASE("point swap needs distinct points") {
    CHECK(code_of([] { Transform::point_swap({1.0, 1.0}, {1.0, 1.0}); }) == ErrorCode::EqualPoints);
  }

  TEST_CASE("matrix condition check") {
    Eigen::MatrixXd s(2, 2);
    s << 1, 2, 2, 4;
    CHECK(code_of([&] { Transform::matrix(s); }) == ErrorCode::SingularMatrix);
  }

  TEST_CASE("inverse round trip") {
    std::mt19937_64 eng(7);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
      std::vector<double> x(n);
      for (auto& v : x) v = z(eng);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), eng);
      std::vector<int> signs(n);
      for (auto& s : signs) s = (eng() & 1) ? -1 : 1;
      const auto g = Transform::signed_permutation(perm, signs);
      CHECK(g.inverse().apply(g.apply(x)) == x);

      Eigen::MatrixXd a = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) +
                          3.0 * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      const auto m = Transform::matrix(a);
      const auto back = m.inverse().apply(m.apply(x));
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-10);
    }
    const Alphabet al({-1.0, 0.0, 1.0, std::sqrt(2.0)});
    const auto sw = Transform::atom_map(al, {0, 3, 2, 1});
    const std::vector<double> y{0.0, 1.0, std::sqrt(2.0)};
    CHECK(sw.inverse().apply(sw.apply(y)) == y);
    const auto ps = Transform::point_swap({1.0, 1.0}, {0.0, 2.0});
    CHECK(ps.inverse().apply(ps.apply(std::vector<double>{1.0, 1.0})) == std::vector<double>{1.0, 1.0});
  }

  TEST_CASE("count differences sum to zero") {
    std::mt19937_64 eng(3);
    const Alphabet al({-2.0, -1.0, 0.5, 3.0});
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(5), y(5);
      for (auto& v : x) v = al[eng() % 4];
      for (auto& v : y) v = al[eng() % 4];
      const auto d = finite_null::count_diff(x, y, al);
      long long s = 0;
      for (auto v : d.values()) s += v;
      CHECK(s == 0);
    }
    CHECK(code_of([&] { CountDiff(al, {1, 0, 0, 0}); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("null spec preconditions") {
    CHECK(code_of([] { NullSpec(Alphabet({-1.0, 0.0, 2.0}), SymmetricAboutZero{}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { NullSpec(Alphabet({1.0, 2.0, 3.0}), MomentNull{1, 3.0}); }) == ErrorCode::TargetOutOfRange);
    CHECK(code_of([] { NullSpec(Alphabet({0.0, 1.0, 2.0}), QuantileNull{2.0, 0.5}); }) ==
          ErrorCode::QuantileNotInterior);
    CHECK_NOTHROW(NullSpec(Alphabet({0.0, 1.0, 2.0}), QuantileNull{0.5, 0.3}));
  }

  TEST_CASE("classification meet") {
    using G = GroupClassification;
    CHECK(meet(G::SymmetricAboutZero, G::GaussianAnyMeanVar) == G::GaussianZeroMean);
    for (auto c : {G::AllDistributions, G::SymmetricAboutZero, G::GaussianAnyMeanVar, G::GaussianZeroMean, G::Empty}) {
      CHECK(meet(c, G::AllDistributions) == c);
      CHECK(meet(G::Empty, c) == G::Empty);
      CHECK(meet(c, c) == c);
      CHECK(classification_from_string(to_string(c)) == c);
    }
  }

  TEST_CASE("piecewise density closed forms") {
    const auto u = PiecewiseDensity::uniform(1.0, 2.0);
    CHECK(u.mass() == doctest::Approx(1.0));
    CHECK(u.raw_moment(1) == doctest::Approx(1.5));
    CHECK(u.raw_moment(2) == doctest::Approx(7.0 / 3.0));
    CHECK(u.cdf(1.25) == doctest::Approx(0.25));
    PiecewiseDensity two({Piece{0.0, 1.0, 0.5}, Piece{1.0, 2.0, 0.5}});
    CHECK(two.components().size() == 1);
    CHECK(two.max_component_width() == 2.0);
    CHECK_THROWS_AS(PiecewiseDensity({Piece{0.0, 1.0, 1.0}, Piece{0.5, 2.0, 1.0}}), Error);
  }

  TEST_CASE("statistics are bitwise deterministic") {
    const std::vector<double> x{0.1, -0.7, 2.3, 1e-3};
    for (const char* name : {"mean", "abs_mean", "t_stat", "abs_t_stat", "max_abs"}) {
      const auto t = Statistic::from_name(name);
      CHECK(t(std::span<const double>(x)) == t(std::span<const double>(x)));
    }
    CHECK(Statistic::mean()(std::span<const double>(x)) == doctest::Approx(0.42525));
    CHECK(Statistic::max_abs()(std::span<const double>(x)) == 2.3);
  }
}
