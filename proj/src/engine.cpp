#include "randinf/engine.hpp"

#include <algorithm>
#include <cmath>

#include "randinf/groups.hpp"

namespace randinf::engine {

namespace {

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorCode::LevelOutOfRange, "level must lie in (0,1), got " + std::to_string(level));
}

// floor(M·level), treating products within rounding of an integer as that
// integer (0.29 * 100 evaluates to 28.999999999999996).
std::size_t floor_m_level(std::size_t m, double level) {
  const double ml = static_cast<double>(m) * level;
  double f = std::floor(ml);
  if (ml - f > 1.0 - 1e-9 * std::max(1.0, ml)) f += 1.0;
  return static_cast<std::size_t>(f);
}

struct Ranked {
  std::size_t k;
  double t_k;
  std::size_t m_plus;
  std::size_t m_zero;
  double a_x;
};

Ranked rank_sorted(std::span<const double> sorted, double level) {
  const std::size_t m = sorted.size();
  const std::size_t k = m - floor_m_level(m, level);
  const double t_k = sorted[k - 1];
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), t_k);
  const auto hi = std::upper_bound(sorted.begin(), sorted.end(), t_k);
  const auto m_zero = static_cast<std::size_t>(hi - lo);
  const auto m_plus = static_cast<std::size_t>(sorted.end() - hi);
  double a = (static_cast<double>(m) * level - static_cast<double>(m_plus)) / static_cast<double>(m_zero);
  a = std::max(a, 0.0);
  return {k, t_k, m_plus, m_zero, a};
}

// Same result as rank_sorted, by selection instead of a full sort. Reorders
// `values`.
Ranked rank_select(std::span<double> values, double level) {
  const std::size_t m = values.size();
  const std::size_t k = m - floor_m_level(m, level);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
  const double t_k = values[k - 1];
  std::size_t m_plus = 0, m_zero = 0;
  for (double v : values) {
    m_plus += v > t_k;
    m_zero += v == t_k;
  }
  double a = (static_cast<double>(m) * level - static_cast<double>(m_plus)) / static_cast<double>(m_zero);
  a = std::max(a, 0.0);
  return {k, t_k, m_plus, m_zero, a};
}

double phi_of(const Ranked& r, double t_obs) {
  if (t_obs > r.t_k) return 1.0;
  if (t_obs == r.t_k) return r.a_x;
  return 0.0;
}

void require_no_nan(std::span<const double> values) {
  for (double v : values)
    if (std::isnan(v)) throw Error(ErrorCode::InvalidArgument, "statistic evaluated to NaN");
}

// Signed permutations of length n, or empty when some element is another
// kind; lets the orbit loop skip per-element dispatch.
std::vector<const SignedPermutation*> signed_view(std::span<const Transform> elements, std::size_t n) {
  std::vector<const SignedPermutation*> out;
  out.reserve(elements.size());
  for (const auto& g : elements) {
    if (g.kind() != TransformKind::SignedPermutation || g.dimension() != n) return {};
    out.push_back(&std::get<SignedPermutation>(g.variant()));
  }
  return out;
}

void orbit_values_into(std::span<const double> x, std::span<const Transform> elements,
                       std::span<const SignedPermutation* const> fast, const Statistic& t, std::span<double> values,
                       std::vector<double>& scratch) {
  scratch.resize(x.size());
  if (!fast.empty()) {
    for (std::size_t i = 0; i < fast.size(); ++i) {
      const auto& g = *fast[i];
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double v = x[g.perm[j]];
        scratch[j] = static_cast<double>(g.signs[j]) * v;
      }
      values[i] = t(std::span<const double>(scratch));
    }
    return;
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    elements[i].apply_into(x, scratch);
    values[i] = t(std::span<const double>(scratch));
  }
}

std::vector<double> orbit_values(std::span<const double> x, std::span<const Transform> elements, const Statistic& t,
                                 std::vector<double>& scratch) {
  std::vector<double> values(elements.size());
  orbit_values_into(x, elements, signed_view(elements, x.size()), t, values, scratch);
  return values;
}

}  // namespace

Decision decide(std::vector<double> orbit_values, double t_obs, double level) {
  require_level(level);
  if (orbit_values.empty()) throw Error(ErrorCode::InvalidArgument, "group has no elements");
  require_no_nan(orbit_values);
  if (std::isnan(t_obs)) throw Error(ErrorCode::InvalidArgument, "observed statistic is NaN");
  std::sort(orbit_values.begin(), orbit_values.end());
  const Ranked r = rank_sorted(orbit_values, level);
  const auto at_least = static_cast<std::size_t>(
      orbit_values.end() - std::lower_bound(orbit_values.begin(), orbit_values.end(), t_obs));
  Decision d;
  d.M = orbit_values.size();
  d.k = r.k;
  d.M_plus = r.m_plus;
  d.M_zero = r.m_zero;
  d.a_x = r.a_x;
  d.T_obs = t_obs;
  d.level = level;
  d.phi = phi_of(r, t_obs);
  d.p_value = static_cast<double>(at_least) / static_cast<double>(d.M);
  return d;
}

Decision run_randomization_test(std::span<const double> sample, std::span<const Transform> elements,
                                const Statistic& statistic, double level) {
  require_level(level);
  std::vector<double> scratch;
  auto values = orbit_values(sample, elements, statistic, scratch);
  return decide(std::move(values), statistic(sample), level);
}

Decision run_randomization_test(const Sample& sample, const GroupSpec& group, const Statistic& statistic,
                                double level, std::size_t cap) {
  require_level(level);
  const auto elements = groups::realize(group, cap);
  return run_randomization_test(sample.values(), elements, statistic, level);
}

std::vector<double> group_average_phi(const Sample& sample, const GroupSpec& group, const Statistic& statistic,
                                      std::span<const double> levels) {
  const auto* g = std::get_if<ExplicitGroup>(&group);
  if (!g) throw Error(ErrorCode::NotExplicitGroup, "group-average identity needs an explicit group");
  for (double level : levels) require_level(level);
  const auto& elements = g->elements;
  const std::size_t m = elements.size();
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "group has no elements");

  std::vector<double> totals(levels.size(), 0.0);
  std::vector<double> gx(sample.size());
  std::vector<double> scratch;
  std::vector<double> values(m);
  const auto fast = signed_view(elements, sample.size());
  for (const auto& outer : elements) {
    outer.apply_into(sample.values(), gx);
    orbit_values_into(gx, elements, fast, statistic, values, scratch);
    require_no_nan(values);
    const double t_obs = statistic(std::span<const double>(gx));
    for (std::size_t l = 0; l < levels.size(); ++l) totals[l] += phi_of(rank_select(values, levels[l]), t_obs);
  }
  for (auto& t : totals) t /= static_cast<double>(m);
  return totals;
}

double group_average_phi(const Sample& sample, const GroupSpec& group, const Statistic& statistic, double level) {
  const double levels[] = {level};
  return group_average_phi(sample, group, statistic, levels).front();
}

Sample apply_transform(const Transform& g, const Sample& sample) { return g.apply(sample); }

}  // namespace randinf::engine
