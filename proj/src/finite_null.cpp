#include "randinf/finite_null.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "randinf/groups.hpp"

namespace randinf::finite_null {

namespace {

constexpr double kLogTol = 1e-10;
constexpr double kViolation = 1e-6;
constexpr double kResidualTol = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<long long> counts_of(std::span<const double> x, const Alphabet& alphabet) {
  std::vector<long long> c(alphabet.size(), 0);
  for (double v : x) ++c[alphabet.require_index(v)];
  return c;
}

// Mass-equality classes of the symmetric and equal-mass families.
std::vector<std::vector<std::size_t>> equality_classes(const NullSpec& null) {
  const auto& alphabet = null.alphabet();
  const std::size_t k = alphabet.size();
  std::vector<std::vector<std::size_t>> classes;
  std::vector<bool> used(k, false);
  if (std::holds_alternative<SymmetricAboutZero>(null.family())) {
    for (std::size_t i = 0; i < k; ++i) {
      if (used[i]) continue;
      const std::size_t j = alphabet.require_index(-alphabet[i]);
      used[i] = used[j] = true;
      classes.push_back(i == j ? std::vector<std::size_t>{i} : std::vector<std::size_t>{i, j});
    }
  } else {
    const auto& f = std::get<EqualMass>(null.family());
    classes.push_back({f.first, f.second});
    used[f.first] = used[f.second] = true;
    for (std::size_t i = 0; i < k; ++i)
      if (!used[i]) classes.push_back({i});
  }
  return classes;
}

bool is_class_family(const NullSpec& null) {
  return std::holds_alternative<SymmetricAboutZero>(null.family()) ||
         std::holds_alternative<EqualMass>(null.family());
}

// Constraint values v_i and target β for the one-constraint families.
std::pair<std::vector<double>, double> single_constraint(const NullSpec& null) {
  const auto atoms = null.alphabet().atoms();
  std::vector<double> v(atoms.size());
  double beta = 0.0;
  std::visit(overloaded{
                 [&](const MomentNull& m) {
                   for (std::size_t i = 0; i < atoms.size(); ++i) v[i] = std::pow(atoms[i], m.t);
                   beta = m.beta;
                 },
                 [&](const QuantileNull& q) {
                   for (std::size_t i = 0; i < atoms.size(); ++i) v[i] = atoms[i] <= q.q ? 1.0 : 0.0;
                   beta = q.prob;
                 },
                 [&](const auto&) { throw Error(ErrorCode::InvalidArgument, "family has no single constraint"); },
             },
             null.family());
  return {v, beta};
}

double log_ratio_raw(std::span<const double> p, const CountDiff& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (d[i] != 0) s += static_cast<double>(d[i]) * std::log(p[i]);
  return s;
}

double residual_raw(std::span<const double> p, const NullSpec& null) {
  const auto [b, c] = linear_constraints(null);
  const Eigen::Map<const Eigen::VectorXd> pv(p.data(), static_cast<Eigen::Index>(p.size()));
  return (b * pv - c).cwiseAbs().maxCoeff();
}

bool all_positive(std::span<const double> p) {
  return std::all_of(p.begin(), p.end(), [](double v) { return v > 0.0; });
}

std::optional<Counterexample> accept(std::vector<double> p, const CountDiff& d, const NullSpec& null,
                                     std::string method) {
  if (!all_positive(p)) return std::nullopt;
  const double res = residual_raw(p, null);
  if (!(res <= kResidualTol)) return std::nullopt;
  const double lr = log_ratio_raw(p, d);
  if (!(std::abs(lr) > kViolation)) return std::nullopt;
  return Counterexample{DiscreteDistribution(null.alphabet(), std::move(p)), lr, res, std::move(method)};
}

// Moment recipes: mass ε everywhere except a straddling pair (a, b) that
// absorbs the remaining mass and moment; optionally a bulk atom sitting
// exactly at β carries most of the mass.
std::optional<Counterexample> moment_recipes(const CountDiff& d, const NullSpec& null, double eps) {
  const auto [v, beta] = single_constraint(null);
  const std::size_t k = v.size();
  const double tie = 1e-12 * std::max(1.0, std::abs(beta));
  std::vector<std::optional<std::size_t>> bulk{std::nullopt};
  for (std::size_t i = 0; i < k; ++i)
    if (std::abs(v[i] - beta) <= tie) bulk.emplace_back(i);

  for (const auto& centre : bulk) {
    for (std::size_t a = 0; a < k; ++a) {
      if (!(v[a] < beta) || centre == a) continue;
      for (std::size_t b = 0; b < k; ++b) {
        if (!(v[b] > beta) || centre == b) continue;
        std::vector<double> p(k, eps);
        double rest_mass = 1.0;
        double rest_moment = beta;
        for (std::size_t j = 0; j < k; ++j) {
          if (j == a || j == b) continue;
          if (centre == j) p[j] = 1.0 - static_cast<double>(k) * eps;
          rest_mass -= p[j];
          rest_moment -= p[j] * v[j];
        }
        p[b] = (rest_moment - v[a] * rest_mass) / (v[b] - v[a]);
        p[a] = rest_mass - p[b];
        if (auto c = accept(std::move(p), d, null, centre ? "recipe:bulk" : "recipe:pair")) return c;
      }
    }
  }
  return std::nullopt;
}

// Quantile recipes: all atoms get ε except one or two atoms at or below q
// that share P[X <= q] and one or two above q that share the rest.
std::optional<Counterexample> quantile_recipes(const CountDiff& d, const NullSpec& null, double eps) {
  const auto [v, prob] = single_constraint(null);
  const std::size_t k = v.size();
  std::vector<std::size_t> lower, upper;
  for (std::size_t i = 0; i < k; ++i) (v[i] > 0.5 ? lower : upper).push_back(i);

  auto subsets = [](const std::vector<std::size_t>& s) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back({s[i]});
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) out.push_back({s[i], s[j]});
    return out;
  };
  const double splits[] = {0.5, 1.0 / 3.0};
  for (const auto& sl : subsets(lower)) {
    for (const auto& su : subsets(upper)) {
      for (double f : splits) {
        if (sl.size() == 1 && su.size() == 1 && f != splits[0]) continue;
        std::vector<double> p(k, eps);
        auto fill = [&](const std::vector<std::size_t>& chosen, std::size_t group_size, double share) {
          const double total = share - static_cast<double>(group_size - chosen.size()) * eps;
          if (chosen.size() == 1) {
            p[chosen[0]] = total;
          } else {
            p[chosen[0]] = f * total;
            p[chosen[1]] = total - p[chosen[0]];
          }
        };
        fill(sl, lower.size(), prob);
        fill(su, upper.size(), 1.0 - prob);
        const char* name = sl.size() + su.size() == 2 ? "recipe:quantile-pair" : "recipe:quantile-triple";
        if (auto c = accept(std::move(p), d, null, name)) return c;
      }
    }
  }
  return std::nullopt;
}

struct NullSpace {
  Eigen::MatrixXd b;
  Eigen::VectorXd c;
  Eigen::VectorXd p0;     // a point of the affine hull
  Eigen::MatrixXd basis;  // orthonormal directions of the affine hull
};

NullSpace null_space(const NullSpec& null) {
  auto [b, c] = linear_constraints(null);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  svd.setThreshold(1e-10);
  const double thresh = 1e-10 * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > thresh) ++rank;
  NullSpace ns;
  ns.p0 = svd.solve(c);
  ns.basis = svd.matrixV().rightCols(b.cols() - rank);
  ns.b = std::move(b);
  ns.c = std::move(c);
  return ns;
}

// Projected-gradient ascent of ±Σ d log p on {B p = c, p > 0}.
std::optional<Counterexample> optimize(const CountDiff& d, const NullSpec& null, const CounterexampleOptions& opt) {
  const NullSpace ns = null_space(null);
  if (ns.basis.cols() == 0) return std::nullopt;
  const Eigen::MatrixXd proj = ns.basis * ns.basis.transpose();
  const Eigen::Index k = ns.b.cols();
  Eigen::VectorXd dv(k);
  for (Eigen::Index i = 0; i < k; ++i) dv(i) = static_cast<double>(d[static_cast<std::size_t>(i)]);

  auto objective = [&](const Eigen::VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (dv(i) != 0.0) s += dv(i) * std::log(p(i));
    return s;
  };
  const auto pinv = ns.b.completeOrthogonalDecomposition();

  for (int restart = 0; restart < opt.restarts; ++restart) {
    auto eng = rng::engine(rng::derive(rng::derive(opt.seed, "counterexample"), static_cast<std::uint64_t>(restart)));
    const auto start = sample_null_distribution(null, eng);
    Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(start.masses().data(), k);
    const double f0 = objective(p);
    const double sign = f0 != 0.0 ? (f0 > 0.0 ? 1.0 : -1.0) : (restart % 2 == 0 ? 1.0 : -1.0);

    for (int it = 0; it < opt.iterations; ++it) {
      const double f = sign * objective(p);
      if (f > 1e-3) break;
      Eigen::VectorXd g(k);
      for (Eigen::Index i = 0; i < k; ++i) g(i) = sign * dv(i) / p(i);
      const Eigen::VectorXd dir = proj * g;
      if (dir.norm() < 1e-14) break;
      // Longest step that keeps every mass above half its current value.
      double eta = 1.0 / dir.norm();
      for (Eigen::Index i = 0; i < k; ++i)
        if (dir(i) < 0.0) eta = std::min(eta, 0.5 * p(i) / -dir(i));
      bool moved = false;
      while (eta > 1e-18) {
        const Eigen::VectorXd cand = p + eta * dir;
        if ((cand.array() > 0.0).all() && sign * objective(cand) > f) {
          p = cand;
          moved = true;
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
    }
    p -= pinv.solve(ns.b * p - ns.c);
    std::vector<double> out(p.data(), p.data() + k);
    if (auto c = accept(std::move(out), d, null, "optimizer")) return c;
  }
  return std::nullopt;
}

struct AffineForms {
  std::vector<int> cls;          // proportionality class; -1 for constant masses
  std::vector<double> log_norm;  // log of the form's norm, or log of the constant
};

AffineForms affine_forms(const NullSpec& null) {
  const NullSpace ns = null_space(null);
  const Eigen::Index k = ns.b.cols();
  const Eigen::Index m = ns.basis.cols();
  AffineForms af;
  af.cls.assign(static_cast<std::size_t>(k), -1);
  af.log_norm.assign(static_cast<std::size_t>(k), 0.0);
  std::vector<Eigen::VectorXd> reps;
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::VectorXd f(m + 1);
    f(0) = ns.p0(i);
    f.tail(m) = ns.basis.row(i).transpose();
    const auto idx = static_cast<std::size_t>(i);
    if (f.tail(m).norm() <= 1e-10) {
      af.log_norm[idx] = std::log(f(0));
      continue;
    }
    const double norm = f.norm();
    af.log_norm[idx] = std::log(norm);
    const Eigen::VectorXd u = f / norm;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      if ((u - reps[r]).norm() <= 1e-9) {
        af.cls[idx] = static_cast<int>(r);
        break;
      }
    }
    if (af.cls[idx] < 0) {
      af.cls[idx] = static_cast<int>(reps.size());
      reps.push_back(u);
    }
  }
  return af;
}

bool affine_check(const AffineForms& af, const CountDiff& d) {
  const int classes = af.cls.empty() ? 0 : *std::max_element(af.cls.begin(), af.cls.end()) + 1;
  std::vector<long long> sums(static_cast<std::size_t>(std::max(classes, 0)), 0);
  double constant = 0.0;
  for (std::size_t i = 0; i < af.cls.size(); ++i) {
    if (d[i] == 0) continue;
    if (af.cls[i] >= 0) sums[static_cast<std::size_t>(af.cls[i])] += d[i];
    constant += static_cast<double>(d[i]) * af.log_norm[i];
  }
  if (std::any_of(sums.begin(), sums.end(), [](long long s) { return s != 0; })) return false;
  return std::abs(constant) <= kLogTol;
}

// Counterexample for the class families: every class gets weight 1 except
// one with nonzero d-sum, which gets weight 2.
Counterexample class_counterexample(const CountDiff& d, const NullSpec& null) {
  const auto classes = equality_classes(null);
  std::vector<double> w(classes.size(), 1.0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    long long s = 0;
    for (auto i : classes[c]) s += d[i];
    if (s != 0) {
      w[c] = 2.0;
      break;
    }
  }
  double z = 0.0;
  for (std::size_t c = 0; c < classes.size(); ++c) z += w[c] * static_cast<double>(classes[c].size());
  std::vector<double> p(null.alphabet().size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (auto i : classes[c]) p[i] = w[c] / z;
  const double lr = log_ratio_raw(p, d);
  const double res = residual_raw(p, null);
  return {DiscreteDistribution(null.alphabet(), std::move(p)), lr, res, "class-weights"};
}

bool class_rule(const CountDiff& d, const NullSpec& null) {
  for (const auto& c : equality_classes(null)) {
    long long s = 0;
    for (auto i : c) s += d[i];
    if (s != 0) return false;
  }
  return true;
}

void require_same_alphabet(const CountDiff& d, const NullSpec& null) {
  if (!(d.alphabet() == null.alphabet()))
    throw Error(ErrorCode::DimensionMismatch, "count difference and null use different alphabets");
}

WitnessCheck check_with(const CountDiff& d, const NullSpec& null, const AffineForms* forms,
                        const CounterexampleOptions& options) {
  if (d.is_zero()) throw Error(ErrorCode::ZeroDiff, "count difference is zero (x is a permutation of y)");
  require_same_alphabet(d, null);
  WitnessCheck out;
  if (is_class_family(null)) {
    if (class_rule(d, null)) {
      out.verdict = Verdict::Yes;
      out.method = "class-sums";
    } else {
      out.verdict = Verdict::No;
      out.method = "class-weights";
      out.counterexample = class_counterexample(d, null).p;
    }
    return out;
  }
  const bool yes = forms ? affine_check(*forms, d) : affine_witness(d, null);
  if (yes) {
    out.verdict = Verdict::Yes;
    out.method = "affine";
    return out;
  }
  try {
    auto c = counterexample_distribution(d, null, options);
    out.verdict = Verdict::No;
    out.method = c.method;
    out.counterexample = std::move(c.p);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCounterexampleFound) throw;
    out.verdict = Verdict::Unknown;
    out.method = "none";
    out.note = null.alphabet().size() <= 4 ? "small alphabet: outside the range where a counterexample is guaranteed"
                                           : "recipes and optimizer failed";
  }
  return out;
}

}  // namespace

CountDiff count_diff(std::span<const double> x, std::span<const double> y, const Alphabet& alphabet) {
  const auto cx = counts_of(x, alphabet);
  const auto cy = counts_of(y, alphabet);
  std::vector<long long> d(alphabet.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = cx[i] - cy[i];
  return CountDiff(alphabet, std::move(d));
}

bool product_mass_equal(const DiscreteDistribution& p, std::span<const double> x, std::span<const double> y) {
  const auto& alphabet = p.alphabet();
  const auto cx = counts_of(x, alphabet);
  const auto cy = counts_of(y, alphabet);
  long long zx = 0, zy = 0;
  double s = 0.0;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (p.mass(i) == 0.0) {
      zx += cx[i];
      zy += cy[i];
    } else if (cx[i] != cy[i]) {
      s += static_cast<double>(cx[i] - cy[i]) * std::log(p.mass(i));
    }
  }
  if (zx > 0 || zy > 0) return zx > 0 && zy > 0;
  return std::abs(s) <= kLogTol;
}

double log_product_ratio(const DiscreteDistribution& p, const CountDiff& d) {
  return log_ratio_raw(p.masses(), d);
}

double constraint_residual(const DiscreteDistribution& p, const NullSpec& null) {
  if (!(p.alphabet() == null.alphabet()))
    throw Error(ErrorCode::DimensionMismatch, "distribution and null use different alphabets");
  return residual_raw(p.masses(), null);
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> linear_constraints(const NullSpec& null) {
  const auto k = static_cast<Eigen::Index>(null.alphabet().size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  rows.push_back(Eigen::VectorXd::Ones(k));
  rhs.push_back(1.0);
  if (is_class_family(null)) {
    for (const auto& c : equality_classes(null)) {
      if (c.size() != 2) continue;
      Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
      r(static_cast<Eigen::Index>(c[0])) = 1.0;
      r(static_cast<Eigen::Index>(c[1])) = -1.0;
      rows.push_back(r);
      rhs.push_back(0.0);
    }
  } else {
    const auto [v, beta] = single_constraint(null);
    rows.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), k));
    rhs.push_back(beta);
  }
  Eigen::MatrixXd b(static_cast<Eigen::Index>(rows.size()), k);
  Eigen::VectorXd c(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    b.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    c(static_cast<Eigen::Index>(r)) = rhs[r];
  }
  return {b, c};
}

DiscreteDistribution sample_null_distribution(const NullSpec& null, rng::Engine& engine) {
  std::exponential_distribution<double> expo(1.0);
  const std::size_t k = null.alphabet().size();
  std::vector<double> p(k, 0.0);
  if (is_class_family(null)) {
    const auto classes = equality_classes(null);
    std::vector<double> w(classes.size());
    double z = 0.0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      w[c] = expo(engine);
      z += w[c] * static_cast<double>(classes[c].size());
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (auto i : classes[c]) p[i] = w[c] / z;
  } else {
    const auto [v, beta] = single_constraint(null);
    const double tie = 1e-12 * std::max(1.0, std::abs(beta));
    double z = 0.0;
    auto add = [&](std::size_t i, double mass, double w) { p[i] += w * mass; };
    for (std::size_t i = 0; i < k; ++i) {
      if (std::abs(v[i] - beta) <= tie) {
        const double w = expo(engine);
        add(i, 1.0, w);
        z += w;
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (!(v[a] < beta - tie)) continue;
      for (std::size_t b = 0; b < k; ++b) {
        if (!(v[b] > beta + tie)) continue;
        const double w = expo(engine);
        const double pa = (v[b] - beta) / (v[b] - v[a]);
        add(a, pa, w);
        add(b, 1.0 - pa, w);
        z += w;
      }
    }
    for (auto& m : p) m /= z;
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& m : p) m /= total;
  return DiscreteDistribution(null.alphabet(), std::move(p));
}

bool affine_witness(const CountDiff& d, const NullSpec& null) {
  require_same_alphabet(d, null);
  return affine_check(affine_forms(null), d);
}

Counterexample counterexample_distribution(const CountDiff& d, const NullSpec& null,
                                           const CounterexampleOptions& options) {
  if (d.is_zero()) throw Error(ErrorCode::ZeroDiff, "count difference is zero");
  require_same_alphabet(d, null);
  const bool moment = std::holds_alternative<MomentNull>(null.family());
  if (!moment && !std::holds_alternative<QuantileNull>(null.family()))
    throw Error(ErrorCode::InvalidArgument, "counterexample search covers moment and quantile nulls");

  double eps = options.epsilon;
  for (int r = 0; r <= options.rounds; ++r, eps *= options.shrink) {
    auto c = moment ? moment_recipes(d, null, eps) : quantile_recipes(d, null, eps);
    if (c) return *std::move(c);
  }
  if (auto c = optimize(d, null, options)) return *std::move(c);
  throw Error(ErrorCode::NoCounterexampleFound, "no null member separates the products for this count difference");
}

WitnessCheck is_witness(const CountDiff& d, const NullSpec& null, const CounterexampleOptions& options) {
  return check_with(d, null, nullptr, options);
}

std::vector<CountDiff> enumerate_count_diffs(const Alphabet& alphabet, std::size_t n) {
  const std::size_t k = alphabet.size();
  const auto cap = static_cast<long long>(n);
  std::vector<CountDiff> out;
  std::vector<long long> d(k, 0);
  // pos/neg: positive and negative mass used so far.
  auto rec = [&](auto&& self, std::size_t i, long long pos, long long neg) -> void {
    if (i + 1 == k) {
      const long long last = neg - pos;
      const long long p2 = pos + std::max(last, 0LL);
      const long long n2 = neg + std::max(-last, 0LL);
      if (p2 > cap || n2 > cap) return;
      d[i] = last;
      if (p2 > 0) out.emplace_back(alphabet, d);
      return;
    }
    for (long long v = -(cap - neg); v <= cap - pos; ++v) {
      d[i] = v;
      self(self, i + 1, pos + std::max(v, 0LL), neg + std::max(-v, 0LL));
    }
  };
  rec(rec, 0, 0, 0);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> realize_pair(const CountDiff& d, std::size_t n) {
  const auto need = static_cast<std::size_t>(d.positive_mass());
  if (need > n) throw Error(ErrorCode::InvalidArgument, "count difference needs more than n coordinates");
  const auto& alphabet = d.alphabet();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const std::size_t extra = i == 0 ? n - need : 0;
    x.insert(x.end(), static_cast<std::size_t>(std::max(d[i], 0LL)) + extra, alphabet[i]);
    y.insert(y.end(), static_cast<std::size_t>(std::max(-d[i], 0LL)) + extra, alphabet[i]);
  }
  return {x, y};
}

WitnessSearch find_witness(const NullSpec& null, std::size_t n, std::size_t budget,
                           const CounterexampleOptions& options) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  const auto diffs = enumerate_count_diffs(null.alphabet(), n);
  std::optional<AffineForms> forms;
  if (!is_class_family(null)) forms = affine_forms(null);

  WitnessSearch out;
  out.total = diffs.size();
  for (std::size_t idx = 0; idx < diffs.size(); ++idx) {
    if (out.examined == budget)
      throw Error(ErrorCode::BudgetExceeded, "examined " + std::to_string(budget) + " of " +
                                                 std::to_string(diffs.size()) + " count differences");
    const auto& d = diffs[idx];
    CounterexampleOptions per = options;
    per.seed = rng::derive(options.seed, static_cast<std::uint64_t>(idx));
    auto check = check_with(d, null, forms ? &*forms : nullptr, per);
    ++out.examined;
    switch (check.verdict) {
      case Verdict::Yes: {
        auto [x, y] = realize_pair(d, n);
        auto group = groups::witness_to_group(x, y);
        out.witness = Witness{std::move(x), std::move(y), d, std::move(group), check.method};
        return out;
      }
      case Verdict::No: {
        const auto& p = *check.counterexample;
        out.ledger.push_back({d, p, log_product_ratio(p, d), constraint_residual(p, null), check.method});
        break;
      }
      case Verdict::Unknown:
        out.unknown.push_back(d);
        break;
    }
  }
  return out;
}

HypothesisDecision decide_randomization_hypothesis(const NullSpec& null, std::size_t n, std::size_t budget,
                                                   const CounterexampleOptions& options) {
  HypothesisDecision out;
  try {
    out.search = find_witness(null, n, budget, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
    out.status = HypothesisStatus::Inconclusive;
    out.budget_exhausted = true;
    out.note = e.what();
    return out;
  }
  if (out.search.witness) {
    out.status = HypothesisStatus::Satisfied;
  } else if (out.search.unknown.empty()) {
    out.status = HypothesisStatus::NotSatisfied;
  } else {
    out.status = HypothesisStatus::Inconclusive;
    out.note = std::to_string(out.search.unknown.size()) + " count differences left undecided";
  }
  return out;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(HypothesisStatus s) noexcept {
  switch (s) {
    case HypothesisStatus::Satisfied: return "satisfied";
    case HypothesisStatus::NotSatisfied: return "not_satisfied";
    case HypothesisStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace randinf::finite_null
