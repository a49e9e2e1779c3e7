#pragma once

// Invariance classes of groups generated by invertible matrices acting on
// i.i.d. data, and a Monte Carlo check that A X has the marginals of X.

#include <span>
#include <string>
#include <vector>

#include "randinf/core.hpp"
#include "randinf/dgp.hpp"

namespace randinf::linear_classify {

inline constexpr double kDefaultZeroTol = 1e-9;

struct GeneratorReport {
  GroupClassification label = GroupClassification::Empty;
  bool monomial = false;
  double zero_threshold = 0.0;         // zero_tol scaled by the largest |entry|
  double orthogonality_residual = 0.0; // ||A^T A - I||_max
  double ones_residual = 0.0;          // ||A 1 - 1||_max
  /// True when the label rests on the orthogonality / fixed-ones refinement
  /// of the Gaussian branch rather than the monomial case split.
  bool derived = false;
  std::string reason;
};

/// SingularMatrix when A is not square-invertible (condition number > 1e12).
GeneratorReport classify_generator_report(const Eigen::MatrixXd& a, double zero_tol = kDefaultZeroTol);
GroupClassification classify_generator(const Eigen::MatrixXd& a, double zero_tol = kDefaultZeroTol);

struct GroupReport {
  std::vector<GeneratorReport> generators;
  GroupClassification meet = GroupClassification::AllDistributions;
  double zero_tol = kDefaultZeroTol;
};

GroupReport classify_group_report(std::span<const Eigen::MatrixXd> generators, double zero_tol = kDefaultZeroTol);
GroupClassification classify_group(std::span<const Eigen::MatrixXd> generators, double zero_tol = kDefaultZeroTol);

struct KsResult {
  double statistic = 0.0;  // sup |F_a - F_b|
  double p_value = 1.0;    // asymptotic Kolmogorov tail
};

/// Two-sample Kolmogorov-Smirnov test. Inputs are copied and sorted.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// P[K > lambda] for the Kolmogorov distribution.
double kolmogorov_tail(double lambda);

struct InvarianceReport {
  std::vector<double> statistics;  // per coordinate
  std::vector<double> p_values;
  double per_coordinate_level = 0.0;  // family level / n
  double family_level = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

inline constexpr double kDefaultFamilyLevel = 1e-3;

/// Compares (A X)_i with a fresh independent X'_i for every coordinate i,
/// X with i.i.d. coordinates from `dgp`. Passes when no coordinate rejects
/// at family_level / n.
InvarianceReport empirical_invariance_check(const Eigen::MatrixXd& a, const mc::Dgp& dgp, std::size_t reps,
                                            std::uint64_t seed, double family_level = kDefaultFamilyLevel);

}  // namespace randinf::linear_classify
