#include "randinf/mc_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include "randinf/engine.hpp"
#include "randinf/groups.hpp"

namespace randinf::mc {

namespace {

template <class F>
void parallel_for(std::size_t count, F body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), (count + 999) / 1000));
  if (workers == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : threads) t.join();
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

RateEstimate estimate_rejection_rate(const Dgp& dgp, std::size_t n, std::size_t reps, std::uint64_t seed,
                                     const TestFn& test) {
  if (reps < kMinReps) throw Error(ErrorCode::InvalidArgument, "at least 1000 replicates required");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  std::vector<double> phi(reps), pv(reps);
  parallel_for(reps, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(n);
    for (std::size_t r = lo; r < hi; ++r) {
      auto eng = rng::engine(rng::derive(seed, static_cast<std::uint64_t>(r)));
      dgp.fill(x, eng);
      std::tie(phi[r], pv[r]) = test(x, r);
    }
  });

  RateEstimate out;
  out.reps = reps;
  double sum = 0.0;
  for (double v : phi) sum += v;
  const double nr = static_cast<double>(reps);
  out.rate = sum / nr;
  out.se = std::sqrt(out.rate * (1.0 - out.rate) / nr);
  out.ci_lo = out.rate - 1.96 * out.se;
  out.ci_hi = out.rate + 1.96 * out.se;
  for (double u : kPValueGrid) {
    const auto hits = std::count_if(pv.begin(), pv.end(), [u](double p) { return p <= u; });
    out.pvalue_cdf.push_back(static_cast<double>(hits) / nr);
  }
  return out;
}

RateEstimate estimate_rejection_rate(const Dgp& dgp, const GroupSpec& group, const Statistic& statistic,
                                     double level, std::size_t n, std::size_t reps, std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::LevelOutOfRange, "level must lie in (0,1)");
  if (const auto* sampled = std::get_if<SampledGroup>(&group)) {
    const SampledGroup base = *sampled;
    const std::uint64_t group_seed = rng::derive(seed, "group");
    return estimate_rejection_rate(dgp, n, reps, seed, [&](std::span<const double> x, std::size_t r) {
      SampledGroup g = base;
      g.seed = rng::derive(group_seed, static_cast<std::uint64_t>(r));
      const auto elements = groups::realize(g);
      const auto d = engine::run_randomization_test(x, elements, statistic, level);
      return std::pair{d.phi, d.p_value};
    });
  }
  const auto elements = groups::realize(group);
  for (const auto& e : elements)
    if (e.dimension() != 0 && e.dimension() != n)
      throw Error(ErrorCode::DimensionMismatch, "group acts on a different sample length");
  return estimate_rejection_rate(dgp, n, reps, seed, [&](std::span<const double> x, std::size_t) {
    const auto d = engine::run_randomization_test(x, elements, statistic, level);
    return std::pair{d.phi, d.p_value};
  });
}

GroupBuilder group_builder(const std::string& kind, std::uint64_t seed) {
  if (kind == "sign_change") return [](std::size_t n) { return groups::sign_change_group(n); };
  if (kind == "permutation")
    return [seed](std::size_t n) {
      return groups::permutation_group(
          n, n <= groups::kMaxFullPermutationN ? groups::PermutationMode::Full : groups::PermutationMode::Sampled,
          1000, rng::derive(seed, "permutation"));
    };
  if (kind == "block_rotation") return [](std::size_t n) { return groups::block_rotation_group(n); };
  throw Error(ErrorCode::InvalidArgument, "no simulation group named '" + kind + "'");
}

std::vector<StudyRow> size_study(const StudyGrid& grid, const GroupBuilder& group, const Statistic& statistic,
                                 std::size_t reps, std::uint64_t seed) {
  std::vector<StudyRow> rows;
  for (const auto& name : grid.dgps) {
    const auto dgp = Dgp::from_name(name);
    for (std::size_t n : grid.ns) {
      const auto spec = group(n);
      for (double level : grid.levels) {
        StudyRow row;
        row.dgp = name;
        row.n = n;
        row.level = level;
        row.reps = reps;
        row.seed = rng::derive(seed, name + "/" + std::to_string(n) + "/" + format_double(level));
        row.estimate = estimate_rejection_rate(dgp, spec, statistic, level, n, reps, row.seed);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string study_csv(std::span<const StudyRow> rows) {
  std::ostringstream os;
  os << "dgp,n,level,reps,rate,se,ci_lo,ci_hi,seed\n";
  for (const auto& r : rows) {
    os << r.dgp << ',' << r.n << ',' << format_double(r.level) << ',' << r.reps << ','
       << format_double(r.estimate.rate) << ',' << format_double(r.estimate.se) << ','
       << format_double(r.estimate.ci_lo) << ',' << format_double(r.estimate.ci_hi) << ',' << r.seed << '\n';
  }
  return os.str();
}

RotationDemo gaussian_rotation_demo(std::size_t n, std::size_t reps, std::uint64_t seed, double level) {
  RotationDemo out;
  out.n = n;
  out.level = level;
  const auto group = groups::block_rotation_group(n);
  const auto stat = Statistic::max_abs();
  const auto gauss = Dgp(DgpKind::Normal34);
  const auto unif = Dgp(DgpKind::Uniform01);
  out.gaussian = estimate_rejection_rate(gauss, group, stat, level, n, reps, rng::derive(seed, "demo/gaussian"));
  out.uniform = estimate_rejection_rate(unif, group, stat, level, n, reps, rng::derive(seed, "demo/uniform"));
  const Eigen::MatrixXd a = groups::block_diagonal_rotation(n);
  out.gaussian_invariance =
      linear_classify::empirical_invariance_check(a, gauss, reps, rng::derive(seed, "demo/invariance/gaussian"));
  out.uniform_invariance =
      linear_classify::empirical_invariance_check(a, unif, reps, rng::derive(seed, "demo/invariance/uniform"));
  return out;
}

}  // namespace randinf::mc
