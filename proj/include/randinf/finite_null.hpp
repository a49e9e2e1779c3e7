#pragma once

// Randomization hypothesis on a finite support. Products of masses depend on
// a point of A^n only through its atom counts, so a pair (x, y) is a witness
// exactly when Σ_i d_i log p(a_i) vanishes for every null p, where d is the
// count difference of x and y.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randinf/core.hpp"
#include "randinf/rng.hpp"

namespace randinf::finite_null {

CountDiff count_diff(std::span<const double> x, std::span<const double> y, const Alphabet& alphabet);

/// ∏ p(x_j) == ∏ p(y_j), compared in log space within 1e-10. Zero-mass atoms
/// are compared by counting zero factors first.
bool product_mass_equal(const DiscreteDistribution& p, std::span<const double> x, std::span<const double> y);

/// Σ_i d_i log p(a_i); +-inf when d touches a zero-mass atom.
double log_product_ratio(const DiscreteDistribution& p, const CountDiff& d);

/// Largest violation of the null's defining equalities (mass and constraint).
double constraint_residual(const DiscreteDistribution& p, const NullSpec& null);

/// A random member of the null family with full support: a Dirichlet mixture
/// of the vertices of the constraint polytope.
DiscreteDistribution sample_null_distribution(const NullSpec& null, rng::Engine& engine);

/// Linear description {p : B p = c} of the null's affine hull (the first row
/// is always the unit-mass constraint).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> linear_constraints(const NullSpec& null);

/// Decides witness status from the affine hull: on the null polytope every
/// mass is an affine function of free coordinates, and Σ d_i log p_i is
/// identically zero iff d sums to zero over each class of proportional
/// masses and the proportionality constants cancel.
bool affine_witness(const CountDiff& d, const NullSpec& null);

enum class Verdict { Yes, No, Unknown };

struct WitnessCheck {
  Verdict verdict = Verdict::Unknown;
  std::optional<DiscreteDistribution> counterexample;
  std::string method;  // how the verdict was reached
  std::string note;
};

struct CounterexampleOptions {
  double epsilon = 1e-3;
  double shrink = 0.25;
  int rounds = 10;
  int restarts = 50;
  int iterations = 300;
  std::uint64_t seed = 0;
};

struct Counterexample {
  DiscreteDistribution p;
  double log_ratio;
  double residual;
  std::string method;
};

/// A null member with unequal products. Tries the explicit ε-mass recipes
/// first, then projected-gradient ascent of |Σ d log p| over the null
/// polytope. NoCounterexampleFound when both fail.
Counterexample counterexample_distribution(const CountDiff& d, const NullSpec& null,
                                           const CounterexampleOptions& options = {});

WitnessCheck is_witness(const CountDiff& d, const NullSpec& null, const CounterexampleOptions& options = {});

/// Every nonzero d with Σ d = 0 and Σ d⁺ <= n, in lexicographic order.
std::vector<CountDiff> enumerate_count_diffs(const Alphabet& alphabet, std::size_t n);

/// Points x, y of length n whose count difference is d.
std::pair<std::vector<double>, std::vector<double>> realize_pair(const CountDiff& d, std::size_t n);

struct Witness {
  std::vector<double> x;
  std::vector<double> y;
  CountDiff d;
  GroupSpec group;
  std::string method;
};

struct LedgerEntry {
  CountDiff d;
  DiscreteDistribution p;
  double log_ratio;
  double residual;
  std::string method;
};

struct WitnessSearch {
  std::optional<Witness> witness;
  std::vector<LedgerEntry> ledger;  // counterexamples, one per refuted d
  std::vector<CountDiff> unknown;   // d where neither route settled
  std::size_t examined = 0;
  std::size_t total = 0;
};

/// Scans count-difference space. Stops at the first witness; BudgetExceeded
/// when `budget` d-vectors were examined without settling the question.
WitnessSearch find_witness(const NullSpec& null, std::size_t n, std::size_t budget,
                           const CounterexampleOptions& options = {});

enum class HypothesisStatus { Satisfied, NotSatisfied, Inconclusive };

struct HypothesisDecision {
  HypothesisStatus status = HypothesisStatus::Inconclusive;
  WitnessSearch search;
  bool budget_exhausted = false;
  std::string note;
};

HypothesisDecision decide_randomization_hypothesis(const NullSpec& null, std::size_t n, std::size_t budget,
                                                   const CounterexampleOptions& options = {});

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(HypothesisStatus s) noexcept;

}  // namespace randinf::finite_null
