#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "randinf/dense_construct.hpp"
#include "randinf/engine.hpp"
#include "randinf/finite_null.hpp"
#include "randinf/groups.hpp"
#include "randinf/io.hpp"
#include "randinf/linear_classify.hpp"
#include "randinf/mc_harness.hpp"

namespace randinf::cli {

namespace {

using io::Json;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kExhausted = 3;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// A group given by name, or a path to a JSON group spec.
GroupSpec resolve_group(const std::string& arg, std::size_t n, std::uint64_t seed, std::size_t draws,
                        std::size_t cap) {
  if (ends_with(arg, ".json")) return io::group_from_json(io::read_json(arg));
  if (arg == "sign_change") return groups::sign_change_group(n, std::nullopt, cap);
  if (arg == "permutation")
    return groups::permutation_group(
        n, n <= groups::kMaxFullPermutationN ? groups::PermutationMode::Full : groups::PermutationMode::Sampled, draws,
        rng::derive(seed, "permutation"));
  if (arg == "haar") return groups::haar_orthogonal_sampler(n, draws, rng::derive(seed, "haar"));
  if (arg == "block_rotation") return groups::block_rotation_group(n, groups::BlockRotationMode::CyclicPerBlock, cap);
  throw Error(ErrorCode::InvalidArgument, "unknown group '" + arg + "'");
}

template <class T>
std::vector<T> split_list(const std::string& s, T (*conv)(const std::string&)) {
  std::vector<T> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(conv(item));
  }
  return out;
}

double to_double(const std::string& s) { return std::stod(s); }
std::size_t to_size(const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); }
std::string to_str(const std::string& s) { return s; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomization tests: exact tests, invariance groups and null-hypothesis checks", "randinf"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string output = "json";
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--output", output, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  // test
  auto* test = app.add_subcommand("test", "Run the randomization test on one sample");
  std::string sample_path, group_arg = "sign_change", stat_name = "abs_mean";
  double level = 0.05;
  std::size_t draws = 1000, cap = kDefaultGroupCap;
  test->add_option("--sample", sample_path, "CSV file, one value per line")->required();
  test->add_option("--group", group_arg, "sign_change, permutation, haar, block_rotation or a JSON spec file");
  test->add_option("--statistic", stat_name, "mean, abs_mean, t_stat, abs_t_stat, max_abs");
  test->add_option("--level", level);
  test->add_option("--draws", draws, "Draws for sampled groups");
  test->add_option("--cap", cap, "Largest group to enumerate");
  test->add_option("--seed", seed);
  test->add_option("--output", output)->check(CLI::IsMember({"json", "csv"}));

  // check-null
  auto* check = app.add_subcommand("check-null", "Decide the randomization hypothesis on a finite support");
  std::string spec_path, ledger_path;
  std::size_t n = 1, budget = 100000;
  check->add_option("--spec", spec_path, "Null spec JSON")->required();
  check->add_option("--n", n, "Sample size");
  check->add_option("--budget", budget, "Count differences to examine");
  check->add_option("--ledger", ledger_path, "Also write the counterexample ledger CSV here");
  check->add_option("--seed", seed);
  check->add_option("--output", output)->check(CLI::IsMember({"json", "csv"}));

  // classify
  auto* classify = app.add_subcommand("classify", "Classify a group generated by matrices");
  std::string matrices_path;
  double zero_tol = linear_classify::kDefaultZeroTol;
  classify->add_option("--matrices", matrices_path, "JSON (array of rows, or list) or CSV")->required();
  classify->add_option("--zero-tol", zero_tol);
  classify->add_option("--output", output)->check(CLI::IsMember({"json", "csv"}));

  // construct-density
  auto* construct = app.add_subcommand("construct-density", "Build a mixture density hitting a target functional");
  std::string config_path;
  construct->add_option("--config", config_path, "JSON with base, target and optional support")->required();
  construct->add_option("--output", output)->check(CLI::IsMember({"json", "csv"}));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo size study");
  std::string dgps = "normal", ns = "10", levels = "0.05", sim_group = "sign_change", sim_config, demo;
  std::size_t reps = 10000;
  simulate->add_option("--dgp", dgps, "Comma-separated DGP names");
  simulate->add_option("--n", ns, "Comma-separated sample sizes");
  simulate->add_option("--level", levels, "Comma-separated levels");
  simulate->add_option("--group", sim_group, "sign_change, permutation or block_rotation");
  simulate->add_option("--statistic", stat_name);
  simulate->add_option("--reps", reps);
  simulate->add_option("--config", sim_config, "JSON study config (as emitted with --output json)");
  simulate->add_option("--demo", demo, "rotation: block-rotation Gaussian demo")->check(CLI::IsMember({"rotation"}));
  simulate->add_option("--seed", seed);
  simulate->add_option("--output", output)->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalid;
  }

  try {
    if (*test) {
      const auto sample = io::read_sample_csv(sample_path);
      const auto group = resolve_group(group_arg, sample.size(), seed, draws, cap);
      const auto d = engine::run_randomization_test(sample, group, Statistic::from_name(stat_name), level, cap);
      if (output == "csv") {
        out << "phi,p_value,M,k,M_plus,M_zero,a_x,T_obs,level\n";
        out.precision(17);
        out << d.phi << ',' << d.p_value << ',' << d.M << ',' << d.k << ',' << d.M_plus << ',' << d.M_zero << ','
            << d.a_x << ',' << d.T_obs << ',' << d.level << '\n';
      } else {
        out << io::to_json(d).dump(2) << '\n';
      }
    } else if (*check) {
      const auto null = io::null_from_json(io::read_json(spec_path));
      finite_null::CounterexampleOptions opts;
      opts.seed = rng::derive(seed, "check-null");
      const auto d = finite_null::decide_randomization_hypothesis(null, n, budget, opts);
      if (!ledger_path.empty()) write_text(ledger_path, io::ledger_csv(d.search.ledger));
      if (output == "csv") {
        out << io::ledger_csv(d.search.ledger);
      } else {
        out << io::to_json(d, null, n).dump(2) << '\n';
      }
      if (d.budget_exhausted)
        return kExhausted;
    } else if (*classify) {
      const auto mats = ends_with(matrices_path, ".csv") ? io::matrices_from_csv(io::read_file(matrices_path))
                                                         : io::matrices_from_json(io::read_json(matrices_path));
      const auto r = linear_classify::classify_group_report(mats, zero_tol);
      if (output == "csv") {
        out << "generator,label,derived,orthogonality_residual,ones_residual\n";
        for (std::size_t i = 0; i < r.generators.size(); ++i) {
          const auto& g = r.generators[i];
          out << i << ',' << to_string(g.label) << ',' << (g.derived ? "true" : "false") << ','
              << g.orthogonality_residual << ',' << g.ones_residual << '\n';
        }
        out << "meet," << to_string(r.meet) << ",,,\n";
      } else {
        out << io::to_json(r, mats).dump(2) << '\n';
      }
    } else if (*construct) {
      const auto cfg = io::read_json(config_path);
      if (!cfg.contains("base") || !cfg.contains("target"))
        throw Error(ErrorCode::ParseError, "config needs 'base' and 'target'");
      const auto base = io::density_from_json(cfg.at("base"));
      const auto target = io::target_from_json(cfg.at("target"));
      std::optional<BoundedSupport> support;
      if (cfg.contains("support"))
        support = BoundedSupport{cfg.at("support").at("lo").get<double>(), cfg.at("support").at("hi").get<double>()};
      MixtureConstruction c;
      switch (target.kind) {
        case TargetKind::Moment: c = dense_construct::match_moment_density(base, target.t, target.value, support); break;
        case TargetKind::Quantile: c = dense_construct::match_quantile_density(base, target.q, target.value, support); break;
        case TargetKind::Variance:
          if (support) throw Error(ErrorCode::InvalidArgument, "variance matching is on the real line only");
          c = dense_construct::match_variance_density(base, target.value);
          break;
      }
      const auto check_report = dense_construct::numeric_check_mixture(c);
      if (output == "csv") {
        out << "lo,hi,value\n";
        out.precision(17);
        for (const auto& p : c.density.pieces()) out << p.lo << ',' << p.hi << ',' << p.value << '\n';
      } else {
        auto j = io::to_json(c);
        j["check"] = io::to_json(check_report);
        out << j.dump(2) << '\n';
      }
    } else if (*simulate) {
      const auto stat = Statistic::from_name(stat_name);
      if (!demo.empty()) {
        const auto nn = split_list<std::size_t>(ns, to_size);
        const auto lv = split_list<double>(levels, to_double);
        const auto r = mc::gaussian_rotation_demo(nn.at(0), reps, seed, lv.at(0));
        Json j = {{"n", r.n},
                  {"level", r.level},
                  {"gaussian", io::to_json(r.gaussian)},
                  {"uniform", io::to_json(r.uniform)},
                  {"gaussian_invariance", io::to_json(r.gaussian_invariance)},
                  {"uniform_invariance", io::to_json(r.uniform_invariance)}};
        out << j.dump(2) << '\n';
        return kOk;
      }
      mc::StudyGrid grid{split_list<std::string>(dgps, to_str), split_list<std::size_t>(ns, to_size),
                         split_list<double>(levels, to_double)};
      std::string group_kind = sim_group;
      std::string statistic_name = stat_name;
      if (!sim_config.empty()) {
        const auto cfg = io::read_json(sim_config);
        grid.dgps = cfg.at("dgps").get<std::vector<std::string>>();
        grid.ns = cfg.at("ns").get<std::vector<std::size_t>>();
        grid.levels = cfg.at("levels").get<std::vector<double>>();
        group_kind = cfg.at("group").get<std::string>();
        statistic_name = cfg.at("statistic").get<std::string>();
        reps = cfg.at("reps").get<std::size_t>();
        seed = cfg.at("seed").get<std::uint64_t>();
      }
      const auto rows = mc::size_study(grid, mc::group_builder(group_kind, seed), Statistic::from_name(statistic_name),
                                       reps, seed);
      if (output == "csv") {
        out << mc::study_csv(rows);
      } else {
        Json table = Json::array();
        for (const auto& r : rows) {
          auto e = io::to_json(r.estimate);
          e["dgp"] = r.dgp;
          e["n"] = r.n;
          e["level"] = r.level;
          e["seed"] = r.seed;
          table.push_back(std::move(e));
        }
        Json j = {{"dgps", grid.dgps}, {"ns", grid.ns},     {"levels", grid.levels}, {"group", group_kind},
                  {"statistic", statistic_name}, {"reps", reps}, {"seed", seed},         {"rows", table}};
        out << j.dump(2) << '\n';
      }
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return is_exhaustion(e.code()) ? kExhausted : kInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "ParseError: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    err << "ParseError: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::out_of_range& e) {
    err << "InvalidArgument: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}

}  // namespace randinf::cli
