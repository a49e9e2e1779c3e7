#include "randinf/linear_classify.hpp"

#include <algorithm>
#include <cmath>

namespace randinf::linear_classify {

namespace {

void require_invertible(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "generator must be a nonempty square matrix");
  if (!a.allFinite()) throw Error(ErrorCode::NonFiniteValue, "generator has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || s(0) / smin > 1e12) throw Error(ErrorCode::SingularMatrix, "generator is singular");
}

}  // namespace

GeneratorReport classify_generator_report(const Eigen::MatrixXd& a, double zero_tol) {
  require_invertible(a);
  const auto n = a.rows();
  GeneratorReport r;
  r.zero_threshold = zero_tol * a.cwiseAbs().maxCoeff();
  r.orthogonality_residual = (a.transpose() * a - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  r.ones_residual = (a * Eigen::VectorXd::Ones(n) - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff();

  bool spread = false;
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    int nonzero = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(a(i, j)) > r.zero_threshold) {
        ++nonzero;
        diag[static_cast<std::size_t>(j)] = a(i, j);
      }
    }
    if (nonzero >= 2) spread = true;
  }

  using G = GroupClassification;
  if (spread) {
    r.monomial = false;
    r.derived = true;
    if (r.orthogonality_residual <= zero_tol) {
      if (r.ones_residual <= zero_tol) {
        r.label = G::GaussianAnyMeanVar;
        r.reason = "orthogonal and fixes the ones vector";
      } else {
        r.label = G::GaussianZeroMean;
        r.reason = "orthogonal, moves the ones vector";
      }
    } else {
      r.label = G::Empty;
      r.reason = "mixes coordinates without being orthogonal";
    }
    return r;
  }

  r.monomial = true;
  const bool all_one = std::all_of(diag.begin(), diag.end(), [&](double d) { return std::abs(d - 1.0) <= zero_tol; });
  const bool all_unit =
      std::all_of(diag.begin(), diag.end(), [&](double d) { return std::abs(std::abs(d) - 1.0) <= zero_tol; });
  if (all_one) {
    r.label = G::AllDistributions;
    r.reason = "permutation matrix";
  } else if (all_unit) {
    r.label = G::SymmetricAboutZero;
    r.reason = "signed permutation with a sign flip";
  } else {
    r.label = G::Empty;
    r.reason = "monomial with a nonunit scale";
  }
  return r;
}

GroupClassification classify_generator(const Eigen::MatrixXd& a, double zero_tol) {
  return classify_generator_report(a, zero_tol).label;
}

GroupReport classify_group_report(std::span<const Eigen::MatrixXd> generators, double zero_tol) {
  GroupReport out;
  out.zero_tol = zero_tol;
  for (const auto& g : generators) {
    out.generators.push_back(classify_generator_report(g, zero_tol));
    out.meet = meet(out.meet, out.generators.back().label);
  }
  return out;
}

GroupClassification classify_group(std::span<const Eigen::MatrixXd> generators, double zero_tol) {
  return classify_group_report(generators, zero_tol).meet;
}

double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "two-sample test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_tail((en + 0.12 + 0.11 / en) * d)};
}

InvarianceReport empirical_invariance_check(const Eigen::MatrixXd& a, const mc::Dgp& dgp, std::size_t reps,
                                            std::uint64_t seed, double family_level) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  if (reps < 2) throw Error(ErrorCode::InvalidArgument, "need at least two replicates");
  const auto n = a.rows();
  auto eng_x = rng::engine(rng::derive(seed, "invariance/x"));
  auto eng_ref = rng::engine(rng::derive(seed, "invariance/reference"));

  std::vector<std::vector<double>> ax(static_cast<std::size_t>(n)), ref(static_cast<std::size_t>(n));
  for (auto& v : ax) v.reserve(reps);
  for (auto& v : ref) v.reserve(reps);
  Eigen::VectorXd x(n);
  for (std::size_t r = 0; r < reps; ++r) {
    for (Eigen::Index i = 0; i < n; ++i) x(i) = dgp.draw(eng_x);
    const Eigen::VectorXd y = a * x;
    for (Eigen::Index i = 0; i < n; ++i) {
      ax[static_cast<std::size_t>(i)].push_back(y(i));
      ref[static_cast<std::size_t>(i)].push_back(dgp.draw(eng_ref));
    }
  }

  InvarianceReport out;
  out.reps = reps;
  out.seed = seed;
  out.family_level = family_level;
  out.per_coordinate_level = family_level / static_cast<double>(n);
  out.pass = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ks = ks_two_sample(std::move(ax[static_cast<std::size_t>(i)]), std::move(ref[static_cast<std::size_t>(i)]));
    out.statistics.push_back(ks.statistic);
    out.p_values.push_back(ks.p_value);
    if (ks.p_value < out.per_coordinate_level) out.pass = false;
  }
  return out;
}

}  // namespace randinf::linear_classify
