#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "randinf/groups.hpp"
#include "randinf/linear_classify.hpp"

using namespace randinf;

namespace {

std::size_t size_of(const GroupSpec& g) { return groups::realize(g).size(); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

Eigen::MatrixXd rotation2(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

TEST_SUITE("groups") {
  TEST_CASE("sign changes") {
    const auto g = std::get<ExplicitGroup>(groups::sign_change_group(2));
    REQUIRE(g.elements.size() == 4);
    CHECK(g.elements[0].is_identity());
    const std::vector<double> x{1.0, 2.0};
    std::vector<std::vector<double>> images;
    for (const auto& e : g.elements) images.push_back(e.apply(x));
    std::sort(images.begin(), images.end());
    CHECK(images == std::vector<std::vector<double>>{{-1, -2}, {-1, 2}, {1, -2}, {1, 2}});
    CHECK(size_of(groups::sign_change_group(1)) == 2);
    CHECK(code_of([] { groups::sign_change_group(20); }) == ErrorCode::SizeCap);
    CHECK(size_of(groups::sign_change_group(5, std::vector<std::size_t>{0, 3})) == 4);
  }

  TEST_CASE("permutations") {
    const auto g = std::get<ExplicitGroup>(groups::permutation_group(3, groups::PermutationMode::Full));
    CHECK(g.elements.size() == 6);
    CHECK(g.elements[0].is_identity());
    const auto s = groups::realize(groups::permutation_group(12, groups::PermutationMode::Sampled, 1000, 4));
    CHECK(s.size() == 1000);
    CHECK(s[0].is_identity());
    CHECK(code_of([] { groups::permutation_group(10, groups::PermutationMode::Full); }) == ErrorCode::SizeCap);
  }

  TEST_CASE("cyclic generation") {
    CHECK(size_of(groups::generate_cyclic(Transform::sign_flip({-1}))) == 2);
    Eigen::MatrixXd a = groups::block_rotation_matrix();
    // Order by repeated multiplication, independent of generate_cyclic.
    Eigen::MatrixXd p = a;
    int order = 1;
    while ((p - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-9 && order < 100) {
      p = p * a;
      ++order;
    }
    CHECK(order == 6);
    const auto cyc = std::get<ExplicitGroup>(groups::generate_cyclic(Transform::matrix(a)));
    CHECK(cyc.elements.size() == 6);
    CHECK(size_of(groups::generate_cyclic(Transform::point_swap({0, 1}, {1, 0}))) == 2);
    CHECK(code_of([] { groups::generate_cyclic(Transform::matrix(rotation2(1.0))); }) == ErrorCode::OrderExceedsCap);
    CHECK(code_of([] { groups::generate_cyclic(Transform::permutation({1, 2, 3, 4, 0}), 3); }) ==
          ErrorCode::OrderExceedsCap);
  }

  TEST_CASE("cyclic group of order r has r distinct elements and f^r = id") {
    const auto f = Transform::signed_permutation({1, 2, 0, 4, 3}, {1, -1, 1, 1, 1});
    const auto g = std::get<ExplicitGroup>(groups::generate_cyclic(f));
    const std::size_t r = g.elements.size();
    Transform p = f;
    for (std::size_t i = 1; i < r; ++i) p = compose(f, p);
    CHECK(p.is_identity());
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) CHECK_FALSE(g.elements[i].same_as(g.elements[j]));
    CHECK(r == 6);
  }

  TEST_CASE("witness groups") {
    CHECK(size_of(groups::witness_to_group({1, 1}, {-1, -1})) == 2);
    const double r2 = std::sqrt(2.0);
    const auto g = groups::witness_to_group({0, 1}, {r2, 1});
    CHECK(size_of(g) == 2);
    CHECK(groups::verify_group_axioms(g).is_group());
    CHECK(code_of([] { groups::witness_to_group({1, 2}, {1, 2}); }) == ErrorCode::EqualPoints);
  }

  TEST_CASE("atom swap") {
    const double r2 = std::sqrt(2.0);
    const Alphabet al({-1.0, 0.0, 1.0, r2});
    const auto g = std::get<ExplicitGroup>(groups::atom_swap_group(al, 1, 3));
    REQUIRE(g.elements.size() == 2);
    const auto& s = g.elements[1];
    CHECK(compose(s, s).is_identity());
    CHECK(groups::verify_group_axioms(g).is_group());
    CHECK(code_of([&] { groups::atom_swap_group(al, 2, 2); }) == ErrorCode::SameAtom);
  }

  TEST_CASE("haar draws") {
    const auto draws = groups::realize(groups::haar_orthogonal_sampler(4, 20, 9));
    CHECK(draws[0].is_identity());
    for (const auto& d : draws) {
      const Eigen::MatrixXd q = d.as_matrix();
      CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
      for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(q.row(i).norm() - 1.0) < 1e-12);
    }
    const auto other = groups::realize(groups::haar_orthogonal_sampler(4, 20, 10));
    CHECK_FALSE(draws[1].same_as(other[1]));
    const auto again = groups::realize(groups::haar_orthogonal_sampler(4, 20, 9));
    CHECK(draws[1].as_matrix() == again[1].as_matrix());
  }

  TEST_CASE("haar draws preserve the normal marginal") {
    rng::Engine eng(17);
    std::normal_distribution<double> z;
    std::vector<double> qx, ref;
    for (int r = 0; r < 20000; ++r) {
      const auto q = groups::draw_haar_orthogonal(3, eng);
      Eigen::Vector3d x(z(eng), z(eng), z(eng));
      qx.push_back((q * x)(0));
      ref.push_back(z(eng));
    }
    CHECK(linear_classify::ks_two_sample(qx, ref).p_value > 1e-3);
  }

  TEST_CASE("block rotation") {
    const Eigen::Matrix3d a = groups::block_rotation_matrix();
    CHECK((a * Eigen::Vector3d::Ones() - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((a.transpose() * a - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(size_of(groups::block_rotation_group(3)) == 6);
    CHECK(size_of(groups::block_rotation_group(6)) == 36);
    CHECK(size_of(groups::block_rotation_group(6, groups::BlockRotationMode::WithBlockPermutations)) == 72);
    CHECK(code_of([] { groups::block_rotation_group(4); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { groups::block_rotation_group(30, groups::BlockRotationMode::CyclicPerBlock, 1000); }) ==
          ErrorCode::OrderExceedsCap);
  }

  TEST_CASE("axiom verification") {
    CHECK(groups::verify_group_axioms(groups::sign_change_group(3)).is_group());
    const ExplicitGroup bad{{Transform::matrix(Eigen::MatrixXd::Identity(2, 2)),
                             Transform::matrix(rotation2(std::numbers::pi / 4))}};
    const auto report = groups::verify_group_axioms(bad);
    CHECK_FALSE(report.is_group());
    CHECK_FALSE(report.closure_violations.empty());
    CHECK(groups::verify_group_axioms(groups::generate_cyclic(Transform::matrix(groups::block_rotation_matrix())))
              .is_group());
    const ExplicitGroup no_id{{Transform::sign_flip({-1, 1})}};
    CHECK_FALSE(groups::verify_group_axioms(no_id).has_identity);
    CHECK(code_of([] { groups::verify_group_axioms(groups::block_rotation_group(3)); }) == ErrorCode::NotExplicitGroup);
  }

  TEST_CASE("left cosets reproduce the group") {
    for (const auto& spec : {groups::sign_change_group(3), groups::permutation_group(4, groups::PermutationMode::Full),
                             groups::generate_cyclic(Transform::matrix(groups::block_rotation_matrix()))}) {
      const auto elems = groups::realize(spec);
      std::multiset<std::string> base;
      for (const auto& e : elems) base.insert(e.key());
      for (const auto& g : elems) {
        groups::ElementIndex idx;
        for (const auto& e : elems) idx.insert(e);
        std::vector<int> hits(elems.size(), 0);
        for (const auto& h : elems) {
          const auto found = idx.find(compose(g, h));
          REQUIRE(found.has_value());
          ++hits[*found];
        }
        CHECK(std::all_of(hits.begin(), hits.end(), [](int c) { return c == 1; }));
      }
    }
  }

  TEST_CASE("generated closure dedups matrices") {
    const auto elems = groups::realize(groups::block_rotation_group(9));
    CHECK(elems.size() == 216);
    CHECK(elems[0].is_identity());
  }
}
