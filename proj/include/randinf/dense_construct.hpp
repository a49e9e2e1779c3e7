#pragma once

// Mixtures g = α·p + (1-α)·h that hit a prescribed moment, quantile or
// variance while agreeing with α·p on the intervals carrying p. The
// complement h is always an indicator density placed off those intervals.

#include <optional>
#include <string>

#include "randinf/core.hpp"

namespace randinf::dense_construct {

/// t-th moment equal to beta. Odd t on the real line needs no width bound;
/// even t needs beta > 0 and every base component narrower than
/// beta^(1/t)/(m+1). On [b0,b1] the base must lie inside the support.
MixtureConstruction match_moment_density(const PiecewiseDensity& base, int t, double beta,
                                         std::optional<BoundedSupport> support = std::nullopt);

/// P[X <= q] = prob.
MixtureConstruction match_quantile_density(const PiecewiseDensity& base, double q, double prob,
                                           std::optional<BoundedSupport> support = std::nullopt);

/// Var[X] = beta on the real line.
MixtureConstruction match_variance_density(const PiecewiseDensity& base, double beta);

struct MixtureCheck {
  double mass = 0.0;                  // ∫ g by quadrature
  double mass_residual = 0.0;         // max(|∫g - 1|, |α∫p + (1-α)∫h - 1|)
  double restriction_residual = 0.0;  // max |g - α·p| over the base intervals
  double target_value = 0.0;
  double target_residual = 0.0;
  bool complement_disjoint = true;    // h avoids every base interval
  bool ok(double mass_tol = 1e-10, double target_tol = 1e-8) const noexcept {
    return mass_residual < mass_tol && restriction_residual < mass_tol && target_residual < target_tol &&
           complement_disjoint;
  }
};

/// Recomputes everything by adaptive Gauss-Kronrod quadrature (requested
/// absolute tolerance 1e-10).
MixtureCheck numeric_check_mixture(const MixtureConstruction& c);

/// Closed-form value of the target functional on a density.
double functional_value(const PiecewiseDensity& g, const TargetFunctional& target);

}  // namespace randinf::dense_construct
