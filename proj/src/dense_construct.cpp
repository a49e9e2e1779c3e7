#include "randinf/dense_construct.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace randinf::dense_construct {

namespace {

PiecewiseDensity prepare_base(const PiecewiseDensity& base) {
  if (base.empty()) throw Error(ErrorCode::InvalidArgument, "base density has no intervals");
  return base.normalized();
}

void require_inside(const PiecewiseDensity& base, const BoundedSupport& s) {
  if (!(s.lo < s.hi)) throw Error(ErrorCode::InvalidArgument, "support must have b0 < b1");
  if (base.lower() < s.lo || base.upper() > s.hi)
    throw Error(ErrorCode::InvalidArgument, "base intervals must lie inside the support");
}

void require_width(const PiecewiseDensity& base, double bound) {
  const double w = base.max_component_width();
  if (!(w < bound))
    throw Error(ErrorCode::WidthBoundViolated, "widest base interval " + std::to_string(w) +
                                                   " is not below the bound " + std::to_string(bound));
}

double root_of(double beta, int t) {
  if (t % 2 == 1) return std::copysign(std::pow(std::abs(beta), 1.0 / t), beta);
  return std::pow(beta, 1.0 / t);
}

// Widest sub-interval of [u, v] avoiding the base, pulled in by 10% of its
// width on each side so that it is strictly inside [u, v].
std::pair<double, double> widest_gap(const PiecewiseDensity& base, double u, double v) {
  double best_lo = 0.0, best_w = 0.0;
  double cursor = u;
  auto consider = [&](double lo, double hi) {
    if (hi - lo > best_w) {
      best_w = hi - lo;
      best_lo = lo;
    }
  };
  for (const auto& [lo, hi] : base.components()) {
    if (hi <= cursor) continue;
    if (lo >= v) break;
    consider(cursor, std::min(lo, v));
    cursor = std::max(cursor, hi);
  }
  if (cursor < v) consider(cursor, v);
  if (!(best_w > 1e-12 * std::max({1.0, std::abs(u), std::abs(v)})))
    throw Error(ErrorCode::NoGapInterval, "no room for the complement between " + std::to_string(u) + " and " +
                                              std::to_string(v));
  return {best_lo + 0.1 * best_w, best_lo + 0.9 * best_w};
}

MixtureConstruction assemble(double alpha, PiecewiseDensity base, PiecewiseDensity h, TargetFunctional target,
                             std::optional<BoundedSupport> support, std::optional<double> width_bound) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorCode::TargetOutOfRange, "mixture weight " + std::to_string(alpha) + " outside (0,1]");
  MixtureConstruction c;
  c.alpha = alpha;
  c.target = target;
  c.support = support;
  c.width_bound = width_bound;
  std::vector<Piece> pieces;
  for (const auto& p : base.pieces()) pieces.push_back({p.lo, p.hi, alpha * p.value});
  if (alpha < 1.0) {
    for (const auto& p : h.pieces()) pieces.push_back({p.lo, p.hi, (1.0 - alpha) * p.value});
    c.complement = std::move(h);
  }
  c.density = PiecewiseDensity(std::move(pieces));
  c.base = std::move(base);
  return c;
}

// α with α·mb + (1-α)·mh = beta.
double solve_linear(double mb, double mh, double beta) { return (beta - mh) / (mb - mh); }

long long smallest_int_above(double beta, int t, long long start) {
  long long p = start;
  while (std::pow(static_cast<double>(p), t) <= beta) ++p;
  return p;
}

long long largest_int_below(double beta, int t, long long start) {
  long long q = start;
  while (std::pow(static_cast<double>(q), t) >= beta) --q;
  return q;
}

template <class F>
double quad(F f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, 1e-10, &err);
}

}  // namespace

MixtureConstruction match_moment_density(const PiecewiseDensity& base_in, int t, double beta,
                                         std::optional<BoundedSupport> support) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "moment order must be positive");
  if (!std::isfinite(beta)) throw Error(ErrorCode::NonFiniteValue, "moment target not finite");
  auto base = prepare_base(base_in);
  const TargetFunctional target{TargetKind::Moment, t, 0.0, beta};
  const double mb = base.raw_moment(t);
  const bool odd = t % 2 == 1;
  const double m = static_cast<double>(base.components().size());

  std::optional<double> bound;
  if (!odd && !(beta > 0.0)) throw Error(ErrorCode::TargetOutOfRange, "even moment target must be positive");

  if (!support) {
    if (!odd) {
      bound = root_of(beta, t) / (m + 1.0);
      require_width(base, *bound);
    }
    if (mb == beta) return assemble(1.0, std::move(base), {}, target, support, bound);
    PiecewiseDensity h;
    if (mb < beta) {
      const auto start = static_cast<long long>(std::floor(root_of(beta, t))) - 1;
      long long p = smallest_int_above(beta, t, odd ? start : std::max(start, 1LL));
      p = std::max(p, static_cast<long long>(std::ceil(base.upper())) + 1);
      h = PiecewiseDensity::uniform(static_cast<double>(p), static_cast<double>(p + 1));
    } else if (odd) {
      long long q = largest_int_below(beta, t, static_cast<long long>(std::ceil(root_of(beta, t))) + 1);
      q = std::min(q, static_cast<long long>(std::floor(base.lower())) - 1);
      h = PiecewiseDensity::uniform(static_cast<double>(q - 1), static_cast<double>(q));
    } else {
      const auto [x, y] = widest_gap(base, 0.0, root_of(beta, t));
      h = PiecewiseDensity::uniform(x, y);
    }
    const double alpha = solve_linear(mb, h.raw_moment(t), beta);
    return assemble(alpha, std::move(base), std::move(h), target, support, bound);
  }

  const auto [b0, b1] = *support;
  require_inside(base, *support);
  PiecewiseDensity h;
  if (odd) {
    if (!(std::pow(b0, t) < beta && beta < std::pow(b1, t)))
      throw Error(ErrorCode::TargetOutOfRange, "odd moment target must lie strictly inside (b0^t, b1^t)");
    const double r = root_of(beta, t);
    bound = std::min(b1 - r, r - b0) / (m + 1.0);
    require_width(base, *bound);
    if (mb == beta) return assemble(1.0, std::move(base), {}, target, support, bound);
    const auto [x, y] = mb > beta ? widest_gap(base, b0, r) : widest_gap(base, r, b1);
    h = PiecewiseDensity::uniform(x, y);
  } else {
    const double far = std::max(std::abs(b0), std::abs(b1));
    if (!(beta < std::pow(far, t)))
      throw Error(ErrorCode::TargetOutOfRange, "even moment target must lie in (0, max(|b0|,|b1|)^t)");
    const double r = root_of(beta, t);
    bound = std::min(far - r, r) / (m + 1.0);
    require_width(base, *bound);
    if (mb == beta) return assemble(1.0, std::move(base), {}, target, support, bound);
    std::pair<double, double> gap;
    if (mb > beta) {
      gap = widest_gap(base, std::max(b0, -r), std::min(b1, r));
    } else if (std::abs(b1) >= std::abs(b0)) {
      gap = widest_gap(base, r, b1);
    } else {
      gap = widest_gap(base, b0, -r);
    }
    h = PiecewiseDensity::uniform(gap.first, gap.second);
  }
  const double alpha = solve_linear(mb, h.raw_moment(t), beta);
  return assemble(alpha, std::move(base), std::move(h), target, support, bound);
}

MixtureConstruction match_quantile_density(const PiecewiseDensity& base_in, double q, double prob,
                                           std::optional<BoundedSupport> support) {
  if (!std::isfinite(q)) throw Error(ErrorCode::NonFiniteValue, "quantile point not finite");
  if (!(prob > 0.0 && prob < 1.0)) throw Error(ErrorCode::TargetOutOfRange, "probability must lie in (0,1)");
  auto base = prepare_base(base_in);
  const TargetFunctional target{TargetKind::Quantile, 1, q, prob};
  std::optional<double> bound;
  std::pair<double, double> below, above;
  if (support) {
    if (!(support->lo < q && q < support->hi))
      throw Error(ErrorCode::QuantileNotInterior, "quantile point must lie strictly inside the support");
    require_inside(base, *support);
    bound = std::min(q - support->lo, support->hi - q) / (static_cast<double>(base.components().size()) + 1.0);
    require_width(base, *bound);
  }
  const double f = base.cdf(q);
  if (std::abs(f - prob) <= 1e-14) return assemble(1.0, std::move(base), {}, target, support, bound);

  if (support) {
    below = widest_gap(base, support->lo, q);
    above = widest_gap(base, q, support->hi);
  } else {
    const double n = std::ceil(std::max({std::abs(base.lower()), std::abs(base.upper()), std::abs(q)})) + 1.0;
    below = {-n - 1.0, -n};
    above = {n, n + 1.0};
  }
  double alpha_max = 1.0;
  if (f > 0.0) alpha_max = std::min(alpha_max, prob / f);
  if (f < 1.0) alpha_max = std::min(alpha_max, (1.0 - prob) / (1.0 - f));
  const double alpha = 0.5 * alpha_max;
  const double w_low = (prob - alpha * f) / (1.0 - alpha);
  PiecewiseDensity h({Piece{below.first, below.second, w_low / (below.second - below.first)},
                      Piece{above.first, above.second, (1.0 - w_low) / (above.second - above.first)}});
  return assemble(alpha, std::move(base), std::move(h), target, support, bound);
}

MixtureConstruction match_variance_density(const PiecewiseDensity& base_in, double beta) {
  if (!std::isfinite(beta)) throw Error(ErrorCode::NonFiniteValue, "variance target not finite");
  if (!(beta > 0.0)) throw Error(ErrorCode::TargetOutOfRange, "variance target must be positive");
  auto base = prepare_base(base_in);
  const TargetFunctional target{TargetKind::Variance, 2, 0.0, beta};
  const double m1 = base.raw_moment(1);
  const double m2 = base.raw_moment(2);
  const double var_x = m2 - m1 * m1;
  if (std::abs(var_x - beta) <= 1e-12 * std::max(1.0, beta))
    return assemble(1.0, std::move(base), {}, target, std::nullopt, std::nullopt);

  const double big_m = std::max(std::abs(base.lower()), std::abs(base.upper()));
  const double w = std::min(0.5, std::sqrt(12.0 * beta) / 2.0);
  // Variance of the half-half mixture without the Var[Y] term.
  auto half_lower = [&](double z) { return 0.5 * (0.5 * m1 * m1 + var_x + 0.5 * z * z - z * m1); };
  double z = std::floor(big_m + 1.0) + 1.0;
  while (!(half_lower(z) > beta)) z += 1.0;
  auto h = PiecewiseDensity::uniform(z - 0.5 * w, z + 0.5 * w);
  const double n1 = h.raw_moment(1);
  const double n2 = h.raw_moment(2);
  auto excess = [&](double a) {
    const double mean = a * m1 + (1.0 - a) * n1;
    return a * m2 + (1.0 - a) * n2 - mean * mean - beta;
  };
  if (!(excess(0.0) < 0.0 && excess(0.5) > 0.0))
    throw Error(ErrorCode::BisectionFailed, "variance does not change sign on (0, 1/2)");
  const auto [lo, hi] = boost::math::tools::bisect(excess, 0.0, 0.5, boost::math::tools::eps_tolerance<double>(52));
  const double alpha = std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
  if (!(alpha > 0.0)) throw Error(ErrorCode::BisectionFailed, "bisection collapsed to zero");
  return assemble(alpha, std::move(base), std::move(h), target, std::nullopt, std::nullopt);
}

double functional_value(const PiecewiseDensity& g, const TargetFunctional& target) {
  switch (target.kind) {
    case TargetKind::Moment: return g.raw_moment(target.t);
    case TargetKind::Quantile: return g.cdf(target.q);
    case TargetKind::Variance: {
      const double m1 = g.raw_moment(1);
      return g.raw_moment(2) - m1 * m1;
    }
  }
  return 0.0;
}

MixtureCheck numeric_check_mixture(const MixtureConstruction& c) {
  MixtureCheck out;
  const auto& g = c.density;
  auto integral = [&](const PiecewiseDensity& d, auto weight, double upper) {
    double s = 0.0;
    for (const auto& p : d.pieces()) {
      const double hi = std::min(p.hi, upper);
      if (hi <= p.lo) continue;
      s += quad([&](double x) { return weight(x) * d(x); }, p.lo, hi);
    }
    return s;
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto one = [](double) { return 1.0; };

  out.mass = integral(g, one, inf);
  const double split = c.alpha * integral(c.base, one, inf) +
                       (c.complement.empty() ? 0.0 : (1.0 - c.alpha) * integral(c.complement, one, inf));
  out.mass_residual = std::max(std::abs(out.mass - 1.0), std::abs(split - 1.0));

  for (const auto& p : c.base.pieces()) {
    for (int k = 1; k < 8; ++k) {
      const double x = p.lo + (p.hi - p.lo) * k / 8.0;
      out.restriction_residual = std::max(out.restriction_residual, std::abs(g(x) - c.alpha * c.base(x)));
    }
  }

  switch (c.target.kind) {
    case TargetKind::Moment: {
      const int t = c.target.t;
      out.target_value = integral(g, [t](double x) { return std::pow(x, t); }, inf);
      break;
    }
    case TargetKind::Quantile:
      out.target_value = integral(g, one, c.target.q);
      break;
    case TargetKind::Variance: {
      const double m1 = integral(g, [](double x) { return x; }, inf);
      const double m2 = integral(g, [](double x) { return x * x; }, inf);
      out.target_value = m2 - m1 * m1;
      break;
    }
  }
  out.target_residual = std::abs(out.target_value - c.target.value);

  for (const auto& hp : c.complement.pieces())
    for (const auto& bp : c.base.pieces())
      if (std::max(hp.lo, bp.lo) < std::min(hp.hi, bp.hi)) out.complement_disjoint = false;
  return out;
}

}  // namespace randinf::dense_construct
