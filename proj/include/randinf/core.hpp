#pragma once

// Domain types shared across the library. Every type validates on
// construction and is immutable afterwards.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "randinf/error.hpp"

namespace randinf {

inline constexpr std::size_t kDefaultGroupCap = 1'000'000;

/// One observation vector X = (X_1, ..., X_n).
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  bool operator==(const Sample&) const = default;

 private:
  std::vector<double> values_;
};

/// Finite support {a_1 < ... < a_K}, K >= 2.
class Alphabet {
 public:
  explicit Alphabet(std::vector<double> atoms);

  std::span<const double> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double operator[](std::size_t i) const { return atoms_[i]; }

  /// Exact lookup; values are matched bitwise against the atoms.
  std::optional<std::size_t> index_of(double value) const noexcept;
  std::size_t require_index(double value) const;

  bool closed_under_negation() const noexcept;
  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<double> atoms_;
};

/// Probability mass function on an alphabet, stored in atom order.
class DiscreteDistribution {
 public:
  DiscreteDistribution(Alphabet alphabet, std::vector<double> masses);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const double> masses() const noexcept { return masses_; }
  double mass(std::size_t atom_index) const { return masses_[atom_index]; }
  double mass_of(double atom) const { return masses_[alphabet_.require_index(atom)]; }

 private:
  Alphabet alphabet_;
  std::vector<double> masses_;
};

// ---------------------------------------------------------------------------
// Transforms

struct SignedPermutation {
  std::vector<std::size_t> perm;  // out[i] = signs[i] * in[perm[i]]
  std::vector<int> signs;
};

struct MatrixMap {
  Eigen::MatrixXd a;
};

/// Bijection on atom indices, applied coordinatewise.
struct AtomMap {
  std::vector<double> atoms;
  std::vector<std::size_t> image;  // atoms[i] -> atoms[image[i]]
};

/// Exchanges the two points x and y of A^n; identity elsewhere.
struct PointSwap {
  std::vector<double> x;
  std::vector<double> y;
};

enum class TransformKind { SignedPermutation, Matrix, AtomMap, PointSwap };

class Transform {
 public:
  static Transform identity(std::size_t n);
  static Transform signed_permutation(std::vector<std::size_t> perm, std::vector<int> signs);
  static Transform permutation(std::vector<std::size_t> perm);
  static Transform sign_flip(std::vector<int> signs);
  /// Fails with SingularMatrix when the 2-norm condition number exceeds 1e12.
  static Transform matrix(Eigen::MatrixXd a);
  static Transform atom_map(const Alphabet& alphabet, std::vector<std::size_t> image);
  static Transform atom_swap(const Alphabet& alphabet, std::size_t first, std::size_t second);
  static Transform point_swap(std::vector<double> x, std::vector<double> y);

  TransformKind kind() const noexcept;
  /// Sample length the transform acts on; 0 for AtomMap (any length).
  std::size_t dimension() const noexcept;

  std::vector<double> apply(std::span<const double> in) const;
  void apply_into(std::span<const double> in, std::span<double> out) const;
  Sample apply(const Sample& s) const { return Sample(apply(s.values())); }

  Transform inverse() const;
  bool is_identity(double matrix_tol = 1e-9) const;

  /// Canonical encoding used for deduplication. Matrix entries are rounded
  /// to a 1e-9 grid; all other kinds encode their fields exactly.
  std::string key() const;
  /// Exact equality for discrete kinds, max-entry distance < tol for matrices.
  bool same_as(const Transform& other, double matrix_tol = 1e-9) const;

  /// Dense matrix form; available for SignedPermutation and Matrix.
  Eigen::MatrixXd as_matrix() const;

  const auto& variant() const noexcept { return v_; }

 private:
  using Variant = std::variant<SignedPermutation, MatrixMap, AtomMap, PointSwap>;
  explicit Transform(Variant v) : v_(std::move(v)) {}
  Variant v_;

  friend Transform compose(const Transform& outer, const Transform& inner);
};

/// outer ∘ inner, i.e. x ↦ outer(inner(x)).
Transform compose(const Transform& outer, const Transform& inner);

// ---------------------------------------------------------------------------
// Groups

struct ExplicitGroup {
  std::vector<Transform> elements;
};

struct GeneratedGroup {
  std::vector<Transform> generators;
  std::size_t closure_cap = kDefaultGroupCap;
};

enum class SamplerKind { Permutation, SignChange, Haar };

/// M i.i.d. draws from a compact group. With include_identity the identity
/// is placed first and M-1 draws follow.
struct SampledGroup {
  SamplerKind sampler = SamplerKind::Permutation;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::size_t draws = 1000;
  bool include_identity = true;
};

using GroupSpec = std::variant<ExplicitGroup, GeneratedGroup, SampledGroup>;

// ---------------------------------------------------------------------------
// Statistics

/// Deterministic map T : R^n -> R. Built-ins evaluate in a fixed order so
/// that identical inputs give bitwise-identical results.
class Statistic {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  static Statistic mean();
  static Statistic abs_mean();
  static Statistic t_stat();
  static Statistic abs_t_stat();
  static Statistic max_abs();
  static Statistic custom(std::string name, Fn fn);
  /// "mean", "abs_mean", "t_stat", "abs_t_stat", "max_abs".
  static Statistic from_name(const std::string& name);

  const std::string& name() const noexcept { return name_; }
  double operator()(std::span<const double> x) const { return fn_(x); }
  double operator()(const Sample& s) const { return fn_(s.values()); }

 private:
  Statistic(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name_;
  Fn fn_;
};

/// Output of the randomization test.
struct Decision {
  double phi = 0.0;
  double p_value = 1.0;
  std::size_t M = 0;
  std::size_t k = 0;
  std::size_t M_plus = 0;
  std::size_t M_zero = 0;
  double a_x = 0.0;
  double T_obs = 0.0;
  double level = 0.0;
};

// ---------------------------------------------------------------------------
// Finite-support nulls

/// d_i = c(a_i; x) - c(a_i; y).
class CountDiff {
 public:
  CountDiff(Alphabet alphabet, std::vector<long long> d);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const long long> values() const noexcept { return d_; }
  long long operator[](std::size_t i) const { return d_[i]; }
  bool is_zero() const noexcept;
  /// Sum of the positive parts; the smallest n for which d is realizable.
  long long positive_mass() const noexcept;

 private:
  Alphabet alphabet_;
  std::vector<long long> d_;
};

struct SymmetricAboutZero {};
struct EqualMass {
  std::size_t first = 0;  // atom indices
  std::size_t second = 1;
};
struct MomentNull {
  int t = 1;
  double beta = 0.0;
};
struct QuantileNull {
  double q = 0.0;
  double prob = 0.5;  // P[X <= q]
};

using NullFamily = std::variant<SymmetricAboutZero, EqualMass, MomentNull, QuantileNull>;

class NullSpec {
 public:
  NullSpec(Alphabet alphabet, NullFamily family);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const NullFamily& family() const noexcept { return family_; }
  std::string family_name() const;

 private:
  Alphabet alphabet_;
  NullFamily family_;
};

// ---------------------------------------------------------------------------
// Linear-group classification

enum class GroupClassification {
  AllDistributions,
  SymmetricAboutZero,
  GaussianAnyMeanVar,
  GaussianZeroMean,
  Empty,
};

std::string_view to_string(GroupClassification c) noexcept;
GroupClassification classification_from_string(std::string_view s);
/// Greatest lower bound: the invariance set of the union of two groups.
GroupClassification meet(GroupClassification a, GroupClassification b) noexcept;

// ---------------------------------------------------------------------------
// Piecewise-constant densities

struct Piece {
  double lo = 0.0;
  double hi = 1.0;
  double value = 1.0;
};

/// Nonnegative, piecewise-constant function on sorted, non-overlapping closed
/// intervals (adjacent pieces may share an endpoint).
class PiecewiseDensity {
 public:
  PiecewiseDensity() = default;
  explicit PiecewiseDensity(std::vector<Piece> pieces);

  static PiecewiseDensity uniform(double lo, double hi);

  std::span<const Piece> pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  double mass() const noexcept;
  /// ∫ x^t f(x) dx in closed form.
  double raw_moment(int t) const noexcept;
  /// ∫_{-inf}^{q} f(x) dx.
  double cdf(double q) const noexcept;
  double operator()(double x) const noexcept;

  double lower() const noexcept { return pieces_.front().lo; }
  double upper() const noexcept { return pieces_.back().hi; }

  /// Maximal connected components of the support (touching pieces merged).
  std::vector<std::pair<double, double>> components() const;
  double max_component_width() const;

  PiecewiseDensity scaled(double factor) const;
  PiecewiseDensity normalized() const;

 private:
  std::vector<Piece> pieces_;
};

enum class TargetKind { Moment, Quantile, Variance };

struct TargetFunctional {
  TargetKind kind = TargetKind::Moment;
  int t = 1;          // Moment order
  double q = 0.0;     // Quantile point
  double value = 0.0; // β: moment value, P[X <= q], or variance
};

struct BoundedSupport {
  double lo = 0.0;
  double hi = 1.0;
};

/// g = α·p + (1-α)·h with h supported off the base intervals.
struct MixtureConstruction {
  double alpha = 1.0;
  PiecewiseDensity base;        // normalized to unit mass
  PiecewiseDensity complement;  // h; unit mass, or empty when α = 1
  PiecewiseDensity density;     // the realized mixture g
  TargetFunctional target;
  std::optional<BoundedSupport> support;
  /// Width bound L(m) that was enforced, when the construction needs one.
  std::optional<double> width_bound;
};

}  // namespace randinf
