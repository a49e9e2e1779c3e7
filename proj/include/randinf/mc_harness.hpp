#pragma once

// Monte Carlo estimates of the rejection rate E[φ(X)] of the randomization
// test. Randomized decisions contribute their fractional φ.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "randinf/core.hpp"
#include "randinf/dgp.hpp"
#include "randinf/linear_classify.hpp"

namespace randinf::mc {

inline constexpr std::size_t kMinReps = 1000;
inline constexpr double kPValueGrid[] = {0.05, 0.1, 0.5};

struct RateEstimate {
  double rate = 0.0;
  /// sqrt(rate(1-rate)/reps): conservative when φ takes fractional values.
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t reps = 0;
  /// Empirical P(p-value <= u) for u in kPValueGrid.
  std::vector<double> pvalue_cdf;
};

/// Decision (φ, p-value) for one simulated sample and its replicate index.
using TestFn = std::function<std::pair<double, double>(std::span<const double>, std::size_t)>;

/// Core loop: replicate r draws n values from `dgp` with its own seed
/// derived from (seed, r), runs `test`, and results are reduced in
/// replicate order. Parallel over replicates; bitwise reproducible.
RateEstimate estimate_rejection_rate(const Dgp& dgp, std::size_t n, std::size_t reps, std::uint64_t seed,
                                     const TestFn& test);

/// The randomization test with the given group. Explicit and Generated
/// groups are realized once; Sampled groups are redrawn per replicate.
RateEstimate estimate_rejection_rate(const Dgp& dgp, const GroupSpec& group, const Statistic& statistic,
                                     double level, std::size_t n, std::size_t reps, std::uint64_t seed);

using GroupBuilder = std::function<GroupSpec(std::size_t n)>;

/// Builders for the group names accepted on the command line:
/// sign_change, permutation, block_rotation.
GroupBuilder group_builder(const std::string& kind, std::uint64_t seed = 0);

struct StudyRow {
  std::string dgp;
  std::size_t n = 0;
  double level = 0.0;
  std::size_t reps = 0;
  RateEstimate estimate;
  std::uint64_t seed = 0;
};

struct StudyGrid {
  std::vector<std::string> dgps;
  std::vector<std::size_t> ns;
  std::vector<double> levels;
};

/// One row per (dgp, n, level) in grid order; each cell's seed is derived
/// from the study seed and the cell label.
std::vector<StudyRow> size_study(const StudyGrid& grid, const GroupBuilder& group, const Statistic& statistic,
                                 std::size_t reps, std::uint64_t seed);

std::string study_csv(std::span<const StudyRow> rows);

struct RotationDemo {
  std::size_t n = 0;
  double level = 0.0;
  RateEstimate gaussian;  // N(3,4)
  RateEstimate uniform;   // uniform(0,1)
  linear_classify::InvarianceReport gaussian_invariance;
  linear_classify::InvarianceReport uniform_invariance;
};

/// Block-rotation group test with the max-absolute-coordinate statistic.
RotationDemo gaussian_rotation_demo(std::size_t n, std::size_t reps, std::uint64_t seed, double level = 0.05);

}  // namespace randinf::mc
