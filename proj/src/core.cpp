#include "randinf/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace randinf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::UnsortedAlphabet: return "UnsortedAlphabet";
    case ErrorCode::MassNotNormalized: return "MassNotNormalized";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AtomNotInAlphabet: return "AtomNotInAlphabet";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::EqualPoints: return "EqualPoints";
    case ErrorCode::SameAtom: return "SameAtom";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::NotExplicitGroup: return "NotExplicitGroup";
    case ErrorCode::IncompatibleTransforms: return "IncompatibleTransforms";
    case ErrorCode::ZeroDiff: return "ZeroDiff";
    case ErrorCode::UnknownDgp: return "UnknownDgp";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::WidthBoundViolated: return "WidthBoundViolated";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::NoGapInterval: return "NoGapInterval";
    case ErrorCode::QuantileNotInterior: return "QuantileNotInterior";
    case ErrorCode::BisectionFailed: return "BisectionFailed";
    case ErrorCode::NoCounterexampleFound: return "NoCounterexampleFound";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::SizeCap: return "SizeCap";
    case ErrorCode::OrderExceedsCap: return "OrderExceedsCap";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

bool is_exhaustion(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::GroupTooLarge:
    case ErrorCode::SizeCap:
    case ErrorCode::OrderExceedsCap:
    case ErrorCode::BudgetExceeded:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::EmptySample, "sample has no observations");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::NonFiniteValue, "observation " + std::to_string(i) + " is not finite");
  }
}

Alphabet::Alphabet(std::vector<double> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.size() < 2) throw Error(ErrorCode::InvalidArgument, "alphabet needs at least two atoms");
  for (double a : atoms_) {
    if (!std::isfinite(a)) throw Error(ErrorCode::NonFiniteValue, "alphabet atom is not finite");
  }
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (!(atoms_[i - 1] < atoms_[i]))
      throw Error(ErrorCode::UnsortedAlphabet, "atoms must be strictly increasing");
  }
}

std::optional<std::size_t> Alphabet::index_of(double value) const noexcept {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), value);
  if (it == atoms_.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - atoms_.begin());
}

std::size_t Alphabet::require_index(double value) const {
  auto idx = index_of(value);
  if (!idx) throw Error(ErrorCode::AtomNotInAlphabet, "value " + std::to_string(value) + " is not an atom");
  return *idx;
}

bool Alphabet::closed_under_negation() const noexcept {
  return std::all_of(atoms_.begin(), atoms_.end(), [this](double a) { return index_of(-a).has_value(); });
}

DiscreteDistribution::DiscreteDistribution(Alphabet alphabet, std::vector<double> masses)
    : alphabet_(std::move(alphabet)), masses_(std::move(masses)) {
  if (masses_.size() != alphabet_.size())
    throw Error(ErrorCode::DimensionMismatch, "one mass per atom required");
  double total = 0.0;
  for (double m : masses_) {
    if (!std::isfinite(m)) throw Error(ErrorCode::NonFiniteValue, "mass is not finite");
    if (m < 0.0 || m > 1.0) throw Error(ErrorCode::MassNotNormalized, "mass outside [0,1]");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::MassNotNormalized, "masses sum to " + std::to_string(total));
}

// ---------------------------------------------------------------------------

Statistic Statistic::mean() {
  return Statistic("mean", [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
  });
}

Statistic Statistic::abs_mean() {
  return Statistic("abs_mean", [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return std::abs(s / static_cast<double>(x.size()));
  });
}

namespace {

double t_statistic(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += v;
  const double m = s / n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  // Zero spread: the statistic degenerates to the sign of the mean.
  if (sd == 0.0) return m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m);
  return std::sqrt(n) * m / sd;
}

}  // namespace

Statistic Statistic::t_stat() { return Statistic("t_stat", t_statistic); }

Statistic Statistic::abs_t_stat() {
  return Statistic("abs_t_stat", [](std::span<const double> x) { return std::abs(t_statistic(x)); });
}

Statistic Statistic::max_abs() {
  return Statistic("max_abs", [](std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  });
}

Statistic Statistic::custom(std::string name, Fn fn) {
  if (!fn) throw Error(ErrorCode::InvalidArgument, "custom statistic needs a callable");
  return Statistic(std::move(name), std::move(fn));
}

Statistic Statistic::from_name(const std::string& name) {
  if (name == "mean") return mean();
  if (name == "abs_mean") return abs_mean();
  if (name == "t_stat" || name == "tstat") return t_stat();
  if (name == "abs_t_stat" || name == "abs_tstat") return abs_t_stat();
  if (name == "max_abs") return max_abs();
  throw Error(ErrorCode::InvalidArgument, "unknown statistic '" + name + "'");
}

// ---------------------------------------------------------------------------

CountDiff::CountDiff(Alphabet alphabet, std::vector<long long> d)
    : alphabet_(std::move(alphabet)), d_(std::move(d)) {
  if (d_.size() != alphabet_.size())
    throw Error(ErrorCode::DimensionMismatch, "one count difference per atom required");
  if (std::accumulate(d_.begin(), d_.end(), 0LL) != 0)
    throw Error(ErrorCode::InvalidArgument, "count differences must sum to zero");
}

bool CountDiff::is_zero() const noexcept {
  return std::all_of(d_.begin(), d_.end(), [](long long v) { return v == 0; });
}

long long CountDiff::positive_mass() const noexcept {
  long long s = 0;
  for (long long v : d_) s += std::max(v, 0LL);
  return s;
}

NullSpec::NullSpec(Alphabet alphabet, NullFamily family)
    : alphabet_(std::move(alphabet)), family_(std::move(family)) {
  const auto atoms = alphabet_.atoms();
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, SymmetricAboutZero>) {
          if (!alphabet_.closed_under_negation())
            throw Error(ErrorCode::InvalidArgument, "symmetric null needs an alphabet closed under negation");
        } else if constexpr (std::is_same_v<F, EqualMass>) {
          if (f.first >= atoms.size() || f.second >= atoms.size())
            throw Error(ErrorCode::InvalidArgument, "equal-mass atom index out of range");
          if (f.first == f.second) throw Error(ErrorCode::SameAtom, "equal-mass null needs two distinct atoms");
        } else if constexpr (std::is_same_v<F, MomentNull>) {
          if (f.t < 1) throw Error(ErrorCode::InvalidArgument, "moment order must be positive");
          if (!std::isfinite(f.beta)) throw Error(ErrorCode::NonFiniteValue, "moment target not finite");
          double lo = std::numeric_limits<double>::infinity();
          double hi = -lo;
          for (double a : atoms) {
            const double v = std::pow(a, f.t);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
          if (!(lo < f.beta && f.beta < hi))
            throw Error(ErrorCode::TargetOutOfRange, "moment target must lie strictly inside the attainable range");
        } else {
          if (!(atoms.front() < f.q && f.q < atoms.back()))
            throw Error(ErrorCode::QuantileNotInterior, "quantile point must lie strictly inside the alphabet range");
          if (!(f.prob > 0.0 && f.prob < 1.0))
            throw Error(ErrorCode::TargetOutOfRange, "quantile probability must lie in (0,1)");
        }
      },
      family_);
}

std::string NullSpec::family_name() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, SymmetricAboutZero>) return "symmetric";
        else if constexpr (std::is_same_v<F, EqualMass>) return "equal_mass";
        else if constexpr (std::is_same_v<F, MomentNull>) return "moment";
        else return "quantile";
      },
      family_);
}

// ---------------------------------------------------------------------------

std::string_view to_string(GroupClassification c) noexcept {
  switch (c) {
    case GroupClassification::AllDistributions: return "AllDistributions";
    case GroupClassification::SymmetricAboutZero: return "SymmetricAboutZero";
    case GroupClassification::GaussianAnyMeanVar: return "GaussianAnyMeanVar";
    case GroupClassification::GaussianZeroMean: return "GaussianZeroMean";
    case GroupClassification::Empty: return "Empty";
  }
  return "Empty";
}

GroupClassification classification_from_string(std::string_view s) {
  for (auto c : {GroupClassification::AllDistributions, GroupClassification::SymmetricAboutZero,
                 GroupClassification::GaussianAnyMeanVar, GroupClassification::GaussianZeroMean,
                 GroupClassification::Empty}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::ParseError, "unknown classification '" + std::string(s) + "'");
}

GroupClassification meet(GroupClassification a, GroupClassification b) noexcept {
  using G = GroupClassification;
  if (a == b) return a;
  if (a == G::AllDistributions) return b;
  if (b == G::AllDistributions) return a;
  if (a == G::Empty || b == G::Empty) return G::Empty;
  // The remaining pairs are drawn from {Symmetric, GaussianAny, GaussianZero}
  // and any two distinct ones intersect in the zero-mean Gaussians.
  return G::GaussianZeroMean;
}

// ---------------------------------------------------------------------------

PiecewiseDensity::PiecewiseDensity(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  for (const auto& p : pieces_) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.value))
      throw Error(ErrorCode::NonFiniteValue, "density piece is not finite");
    if (!(p.lo < p.hi)) throw Error(ErrorCode::InvalidArgument, "density interval must have positive width");
    if (p.value < 0.0) throw Error(ErrorCode::InvalidArgument, "density values must be nonnegative");
  }
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].lo < pieces_[i - 1].hi)
      throw Error(ErrorCode::InvalidArgument, "density intervals overlap");
  }
  if (!pieces_.empty() && !(mass() > 0.0))
    throw Error(ErrorCode::InvalidArgument, "density integral must be positive");
}

PiecewiseDensity PiecewiseDensity::uniform(double lo, double hi) {
  return PiecewiseDensity({Piece{lo, hi, 1.0 / (hi - lo)}});
}

double PiecewiseDensity::mass() const noexcept {
  double m = 0.0;
  for (const auto& p : pieces_) m += p.value * (p.hi - p.lo);
  return m;
}

double PiecewiseDensity::raw_moment(int t) const noexcept {
  double m = 0.0;
  for (const auto& p : pieces_) {
    m += p.value * (std::pow(p.hi, t + 1) - std::pow(p.lo, t + 1)) / static_cast<double>(t + 1);
  }
  return m;
}

double PiecewiseDensity::cdf(double q) const noexcept {
  double c = 0.0;
  for (const auto& p : pieces_) {
    if (q <= p.lo) break;
    c += p.value * (std::min(q, p.hi) - p.lo);
  }
  return c;
}

double PiecewiseDensity::operator()(double x) const noexcept {
  for (const auto& p : pieces_) {
    if (x >= p.lo && x < p.hi) return p.value;
  }
  if (!pieces_.empty() && x == pieces_.back().hi) return pieces_.back().value;
  return 0.0;
}

std::vector<std::pair<double, double>> PiecewiseDensity::components() const {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : pieces_) {
    if (!out.empty() && out.back().second == p.lo) {
      out.back().second = p.hi;
    } else {
      out.emplace_back(p.lo, p.hi);
    }
  }
  return out;
}

double PiecewiseDensity::max_component_width() const {
  double w = 0.0;
  for (const auto& [lo, hi] : components()) w = std::max(w, hi - lo);
  return w;
}

PiecewiseDensity PiecewiseDensity::scaled(double factor) const {
  auto pieces = pieces_;
  for (auto& p : pieces) p.value *= factor;
  PiecewiseDensity out;
  out.pieces_ = std::move(pieces);
  return out;
}

PiecewiseDensity PiecewiseDensity::normalized() const {
  if (pieces_.empty()) throw Error(ErrorCode::InvalidArgument, "cannot normalize an empty density");
  return scaled(1.0 / mass());
}

}  // namespace randinf
