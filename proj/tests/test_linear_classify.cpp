#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <algorithm>
#include <random>

#include "randinf/groups.hpp"
#include "randinf/linear_classify.hpp"

using namespace randinf;
using namespace randinf::linear_classify;
using GC = GroupClassification;

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

Eigen::MatrixXd rotation45() {
  const double c = std::cos(std::numbers::pi / 4);
  Eigen::MatrixXd r(2, 2);
  r << c, -c, c, c;
  return r;
}

Eigen::MatrixXd haar_not_fixing_ones(std::uint64_t seed) {
  rng::Engine eng(seed);
  for (;;) {
    Eigen::MatrixXd q = groups::draw_haar_orthogonal(3, eng);
    if ((q * Eigen::VectorXd::Ones(3) - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() > 0.3) return q;
  }
}

Eigen::MatrixXd block_swap6() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 3; ++i) {
    p(i, i + 3) = 1.0;
    p(i + 3, i) = 1.0;
  }
  return p;
}

}  // namespace

TEST_SUITE("linear_classify") {
  TEST_CASE("canonical generators") {
    CHECK(classify_generator(Eigen::MatrixXd::Identity(3, 3)) == GC::AllDistributions);
    CHECK(classify_generator(-Eigen::MatrixXd::Identity(3, 3)) == GC::SymmetricAboutZero);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d.diagonal() << 2.0, 0.5, 1.0;
    CHECK(classify_generator(d) == GC::Empty);
    CHECK(classify_generator(haar_not_fixing_ones(3)) == GC::GaussianZeroMean);
    const Eigen::MatrixXd a = groups::block_rotation_matrix();
    CHECK(classify_generator(a) == GC::GaussianAnyMeanVar);
    const auto report = classify_generator_report(a);
    CHECK_FALSE(report.monomial);
    CHECK(report.derived);
    CHECK(report.orthogonality_residual <= 1e-12);
    CHECK(report.ones_residual <= 1e-12);
  }

  TEST_CASE("non-orthogonal mixing is empty") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 1, 0, 1;
    const auto r = classify_generator_report(m);
    CHECK(r.label == GC::Empty);
    CHECK(r.derived);
    CHECK(r.orthogonality_residual > 0.5);
  }

  TEST_CASE("errors") {
    Eigen::MatrixXd s(2, 2);
    s << 1, 2, 2, 4;
    CHECK(code_of([&] { classify_generator(s); }) == ErrorCode::SingularMatrix);
    CHECK(code_of([] { classify_generator(Eigen::MatrixXd::Ones(2, 3)); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("group examples") {
    const std::vector<Eigen::MatrixXd> one{Eigen::MatrixXd::Identity(3, 3)};
    CHECK(classify_group(one) == GC::AllDistributions);
    const std::vector<Eigen::MatrixXd> two{-Eigen::MatrixXd::Identity(3, 3), haar_not_fixing_ones(8)};
    CHECK(classify_group(two) == GC::GaussianZeroMean);
    const std::vector<Eigen::MatrixXd> three{groups::block_diagonal_rotation(6), block_swap6()};
    CHECK(classify_group(three) == GC::GaussianAnyMeanVar);
    const auto rep = classify_group_report(three);
    CHECK(rep.generators.size() == 2);
    CHECK(rep.meet == GC::GaussianAnyMeanVar);
  }

  TEST_CASE("random signed permutations") {
    std::mt19937_64 eng(99);
    for (int r = 0; r < 100; ++r) {
      const std::size_t n = 2 + eng() % 5;
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), eng);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      bool negative = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = (eng() & 1) ? -1.0 : 1.0;
        negative = negative || s < 0;
        m(static_cast<Eigen::Index>(i), perm[i]) = s;
      }
      const auto label = classify_generator(m);
      CHECK((label == GC::AllDistributions || label == GC::SymmetricAboutZero));
      CHECK((label == GC::SymmetricAboutZero) == negative);
    }
  }

  TEST_CASE("order and inverses do not matter") {
    const std::vector<Eigen::MatrixXd> gens{-Eigen::MatrixXd::Identity(3, 3), groups::block_rotation_matrix(),
                                            haar_not_fixing_ones(1)};
    const auto base = classify_group(gens);
    std::vector<std::size_t> idx{0, 1, 2};
    do {
      std::vector<Eigen::MatrixXd> g;
      for (auto i : idx) g.push_back(gens[i]);
      CHECK(classify_group(g) == base);
      for (std::size_t j = 0; j < g.size(); ++j) {
        auto h = g;
        h[j] = h[j].inverse();
        CHECK(classify_group(h) == base);
      }
    } while (std::next_permutation(idx.begin(), idx.end()));
  }

  TEST_CASE("powers of finite-order generators") {
    const std::vector<Eigen::MatrixXd> mats{-Eigen::MatrixXd::Identity(2, 2), groups::block_rotation_matrix(),
                                            Eigen::MatrixXd(Eigen::MatrixXd::Identity(4, 4).rowwise().reverse())};
    for (const auto& g : mats) {
      const std::vector<Eigen::MatrixXd> single{g};
      const std::vector<Eigen::MatrixXd> powers{g, g * g, g * g * g};
      CHECK(classify_group(single) == classify_group(powers));
    }
  }

  TEST_CASE("kolmogorov tail") {
    CHECK(kolmogorov_tail(0.0) == doctest::Approx(1.0));
    CHECK(kolmogorov_tail(1.36) == doctest::Approx(0.0494).epsilon(0.01));
    CHECK(kolmogorov_tail(1.63) == doctest::Approx(0.0098).epsilon(0.02));
    CHECK(kolmogorov_tail(5.0) < 1e-20);
  }

  TEST_CASE("two-sample distance") {
    const auto same = ks_two_sample({1, 2, 3, 4}, {1, 2, 3, 4});
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == doctest::Approx(1.0));
    const auto apart = ks_two_sample({1, 2, 3}, {10, 11, 12});
    CHECK(apart.statistic == 1.0);
    // Hand count: F_a - F_b peaks at 0.5 after {1, 2}.
    CHECK(ks_two_sample({1, 2, 5, 6}, {3, 4, 5.5, 7}).statistic == doctest::Approx(0.5));
  }

  TEST_CASE("invariance examples") {
    const auto normal = mc::Dgp::from_name("normal");
    const auto uniform = mc::Dgp::from_name("uniform_pm1");
    CHECK(empirical_invariance_check(rotation45(), normal, 100000, 1).pass);
    CHECK_FALSE(empirical_invariance_check(rotation45(), uniform, 100000, 1).pass);
    Eigen::MatrixXd swap(3, 3);
    swap << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    CHECK(empirical_invariance_check(swap, mc::Dgp::from_name("exp_centered"), 20000, 2).pass);
    const auto rep = empirical_invariance_check(swap, normal, 20000, 2);
    CHECK(rep.p_values.size() == 3);
    CHECK(rep.per_coordinate_level == doctest::Approx(kDefaultFamilyLevel / 3));
  }

  TEST_CASE("non-orthogonal gaussian-branch matrices fail on the panel") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 1, 0, 1;
    REQUIRE(classify_generator(m) == GC::Empty);
    for (const auto* name : {"normal", "normal_3_4", "uniform_pm1", "laplace", "exp_centered"})
      CHECK_FALSE(empirical_invariance_check(m, mc::Dgp::from_name(name), 20000, 4).pass);
  }

  TEST_CASE("gaussian sub-labels hold up empirically") {
    CHECK(empirical_invariance_check(groups::block_rotation_matrix(), mc::Dgp::from_name("normal_3_4"), 50000, 6).pass);
    const Eigen::MatrixXd q = haar_not_fixing_ones(3);
    CHECK(empirical_invariance_check(q, mc::Dgp::from_name("normal"), 50000, 6).pass);
    CHECK_FALSE(empirical_invariance_check(q, mc::Dgp::from_name("normal_3_4"), 50000, 6).pass);
  }
}
