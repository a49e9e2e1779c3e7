#pragma once

// The randomization test: rank T(x) among {T(gx) : g in G}, reject above the
// k-th order statistic, randomize on ties so the size is exactly the level.

#include <span>
#include <vector>

#include "randinf/core.hpp"

namespace randinf::engine {

/// Full test on a group spec. Explicit and Generated groups are enumerated
/// (GroupTooLarge past `cap`); Sampled groups use their M draws.
Decision run_randomization_test(const Sample& sample, const GroupSpec& group, const Statistic& statistic,
                                double level, std::size_t cap = kDefaultGroupCap);

/// Same test on an already-realized element list.
Decision run_randomization_test(std::span<const double> sample, std::span<const Transform> elements,
                                const Statistic& statistic, double level);

/// Decision from the orbit values T(g x), g in G, and the observed T(x).
Decision decide(std::vector<double> orbit_values, double t_obs, double level);

/// (1/M) Σ_g φ(g·x; G). Equals `level` up to rounding for every x when G is
/// a group. Needs an explicit element list because the orbit of every g·x
/// is enumerated from scratch.
double group_average_phi(const Sample& sample, const GroupSpec& group, const Statistic& statistic, double level);

/// Several levels in one pass over the M^2 orbit evaluations.
std::vector<double> group_average_phi(const Sample& sample, const GroupSpec& group, const Statistic& statistic,
                                      std::span<const double> levels);

Sample apply_transform(const Transform& g, const Sample& sample);

}  // namespace randinf::engine
