#include <doctest.h>

#include <cmath>
#include <random>

#include "randinf/dense_construct.hpp"

using namespace randinf;
using namespace randinf::dense_construct;

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

// Closed-form functionals of a piecewise-constant density, written out
// independently of the library.
double moment_oracle(const PiecewiseDensity& g, int t) {
  double s = 0.0;
  for (const auto& p : g.pieces()) s += p.value * (std::pow(p.hi, t + 1) - std::pow(p.lo, t + 1)) / (t + 1);
  return s;
}

double cdf_oracle(const PiecewiseDensity& g, double q) {
  double s = 0.0;
  for (const auto& p : g.pieces()) s += p.value * std::max(0.0, std::min(q, p.hi) - p.lo);
  return s;
}

double variance_oracle(const PiecewiseDensity& g) {
  const double m = moment_oracle(g, 1);
  return moment_oracle(g, 2) - m * m;
}

void check_common(const MixtureConstruction& c) {
  CHECK(std::abs(moment_oracle(c.density, 0) - 1.0) < 1e-10);
  for (const auto& bp : c.base.pieces()) {
    const double mid = 0.5 * (bp.lo + bp.hi);
    CHECK(std::abs(c.density(mid) - c.alpha * bp.value) <= 1e-12 * std::max(1.0, bp.value));
    for (const auto& hp : c.complement.pieces()) CHECK((hp.hi <= bp.lo || hp.lo >= bp.hi));
  }
  const auto chk = numeric_check_mixture(c);
  CHECK(chk.ok());
  CHECK(chk.complement_disjoint);
  CHECK(c.alpha > 0.0);
  CHECK(c.alpha <= 1.0);
}

// m non-overlapping pieces, each narrower than max_width, inside [lo, hi].
PiecewiseDensity random_base(std::mt19937_64& eng, double lo, double hi, double max_width) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int m = count(eng);
  const double slot = (hi - lo) / m;
  std::vector<Piece> pieces;
  for (int i = 0; i < m; ++i) {
    const double w = std::min(slot * 0.8, max_width) * (0.2 + 0.8 * u(eng));
    const double a = lo + i * slot + (slot - w) * u(eng);
    pieces.push_back({a, a + w, 0.5 + u(eng)});
  }
  return PiecewiseDensity(pieces).normalized();
}

}  // namespace

TEST_SUITE("dense_construct") {
  TEST_CASE("odd moment example") {
    const auto c = match_moment_density(PiecewiseDensity::uniform(1, 2), 1, 0.0);
    REQUIRE(c.complement.pieces().size() == 1);
    CHECK(c.complement.lower() == -2.0);
    CHECK(c.complement.upper() == -1.0);
    CHECK(c.alpha == doctest::Approx(0.5));
    CHECK(std::abs(moment_oracle(c.density, 1)) < 1e-12);
    check_common(c);
  }

  TEST_CASE("even moment example") {
    const auto c = match_moment_density(PiecewiseDensity::uniform(0.1, 0.2), 2, 1.0);
    CHECK(std::abs(moment_oracle(c.density, 2) - 1.0) < 1e-8);
    check_common(c);
    CHECK(code_of([] { match_moment_density(PiecewiseDensity::uniform(3, 4), 2, 1.0); }) ==
          ErrorCode::WidthBoundViolated);
    CHECK(code_of([] { match_moment_density(PiecewiseDensity::uniform(0.1, 0.2), 2, -1.0); }) ==
          ErrorCode::TargetOutOfRange);
  }

  TEST_CASE("bounded support moments") {
    const BoundedSupport s{-1.0, 3.0};
    const auto odd = match_moment_density(PiecewiseDensity::uniform(0.0, 0.2), 1, 2.5, s);
    CHECK(std::abs(moment_oracle(odd.density, 1) - 2.5) < 1e-8);
    CHECK(odd.density.lower() >= -1.0);
    CHECK(odd.density.upper() <= 3.0);
    check_common(odd);
    const auto even = match_moment_density(PiecewiseDensity::uniform(0.1, 0.2), 2, 1.0, BoundedSupport{-2.0, 2.0});
    CHECK(std::abs(moment_oracle(even.density, 2) - 1.0) < 1e-8);
    check_common(even);
    CHECK(code_of([&] { match_moment_density(PiecewiseDensity::uniform(0.0, 0.2), 1, 40.0, s); }) ==
          ErrorCode::TargetOutOfRange);
  }

  TEST_CASE("quantile examples") {
    const auto c = match_quantile_density(PiecewiseDensity::uniform(1, 2), 0.0, 0.5);
    CHECK(std::abs(cdf_oracle(c.density, 0.0) - 0.5) < 1e-10);
    check_common(c);
    const auto same = match_quantile_density(PiecewiseDensity::uniform(1, 2), 1.5, 0.5);
    CHECK(same.alpha == 1.0);
    CHECK(same.complement.empty());
    CHECK(code_of([] { match_quantile_density(PiecewiseDensity::uniform(0.2, 0.3), 5.0, 0.5, BoundedSupport{0, 1}); }) ==
          ErrorCode::QuantileNotInterior);
    CHECK(code_of([] { match_quantile_density(PiecewiseDensity::uniform(0.1, 0.9), 0.5, 0.3, BoundedSupport{0, 1}); }) ==
          ErrorCode::WidthBoundViolated);
  }

  TEST_CASE("variance examples") {
    const auto c = match_variance_density(PiecewiseDensity::uniform(-1, 1), 1.0 / 3);
    CHECK(std::abs(variance_oracle(c.density) - 1.0 / 3) < 1e-8);
    CHECK(c.alpha == doctest::Approx(1.0));
    const auto far = match_variance_density(PiecewiseDensity::uniform(0, 0.1), 10.0);
    CHECK(std::abs(variance_oracle(far.density) - 10.0) < 1e-8);
    CHECK(far.complement.lower() > 1.0);
    check_common(far);
    CHECK(code_of([] { match_variance_density(PiecewiseDensity::uniform(0, 1), 0.0); }) ==
          ErrorCode::TargetOutOfRange);
  }

  TEST_CASE("random bases") {
    std::mt19937_64 eng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < 50; ++r) {
      const int t = 1 + static_cast<int>(eng() % 4);
      if (t % 2 == 1) {
        const double beta = -20.0 + 40.0 * u(eng);
        const auto c = match_moment_density(random_base(eng, -4, 4, 2.0), t, beta);
        CHECK(std::abs(moment_oracle(c.density, t) - beta) < 1e-8 * std::max(1.0, std::abs(beta)));
        check_common(c);
      } else {
        const double beta = 0.5 + 10.0 * u(eng);
        const double root = std::pow(beta, 1.0 / t);
        const auto c = match_moment_density(random_base(eng, -root, root, root / 4.5), t, beta);
        CHECK(std::abs(moment_oracle(c.density, t) - beta) < 1e-8);
        check_common(c);
      }
    }
    for (int r = 0; r < 50; ++r) {
      const double q = -3.0 + 6.0 * u(eng);
      const double prob = 0.05 + 0.9 * u(eng);
      const auto c = match_quantile_density(random_base(eng, -4, 4, 2.0), q, prob);
      CHECK(std::abs(cdf_oracle(c.density, q) - prob) < 1e-10);
      check_common(c);
    }
    for (int r = 0; r < 50; ++r) {
      const double beta = 0.01 + 20.0 * u(eng);
      const auto c = match_variance_density(random_base(eng, -4, 4, 2.0), beta);
      CHECK(std::abs(variance_oracle(c.density) - beta) < 1e-8);
      check_common(c);
    }
  }

  TEST_CASE("alpha moves continuously with the target") {
    const auto base = PiecewiseDensity::uniform(1, 2);
    double prev = match_moment_density(base, 1, 0.005).alpha;
    for (double beta = 0.015; beta < 3.0; beta += 0.01) {
      const double a = match_moment_density(base, 1, beta).alpha;
      CHECK(std::abs(a - prev) <= 0.2);
      prev = a;
    }
  }

  TEST_CASE("fault injection") {
    auto c = match_moment_density(PiecewiseDensity::uniform(1, 2), 1, 0.0);
    REQUIRE(numeric_check_mixture(c).ok());
    auto broken = c;
    broken.alpha = 0.4;
    const auto r1 = numeric_check_mixture(broken);
    CHECK_FALSE(r1.ok());
    CHECK(r1.restriction_residual > 1e-3);
    auto deficient = c;
    deficient.complement = c.complement.scaled(0.9);
    const auto r2 = numeric_check_mixture(deficient);
    CHECK_FALSE(r2.ok());
    CHECK(r2.mass_residual > 1e-3);
    auto overlapping = c;
    overlapping.complement = PiecewiseDensity::uniform(1.5, 2.5);
    CHECK_FALSE(numeric_check_mixture(overlapping).complement_disjoint);
  }

  TEST_CASE("functional values") {
    const auto g = PiecewiseDensity::uniform(0, 2);
    CHECK(functional_value(g, {TargetKind::Moment, 2, 0.0, 0.0}) == doctest::Approx(4.0 / 3));
    CHECK(functional_value(g, {TargetKind::Quantile, 1, 0.5, 0.0}) == doctest::Approx(0.25));
    CHECK(functional_value(g, {TargetKind::Variance, 1, 0.0, 0.0}) == doctest::Approx(1.0 / 3));
  }
}
