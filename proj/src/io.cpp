#include "randinf/io.hpp"

#include <fstream>
#include <sstream>

#include "randinf/groups.hpp"

namespace randinf::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    parse_fail("not a number: '" + s + "'");
  }
  if (pos != s.size()) parse_fail("not a number: '" + s + "'");
  return v;
}

template <class T>
std::string join(std::span<const T> v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  return os.str();
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(e.what());
  }
}

Json read_json(const std::string& path) { return parse_json(read_file(path)); }

Sample parse_sample_csv(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    values.push_back(parse_double(line));
  }
  return Sample(std::move(values));
}

Sample read_sample_csv(const std::string& path) { return parse_sample_csv(read_file(path)); }

Json to_json(const Sample& s) { return Json(std::vector<double>(s.values().begin(), s.values().end())); }

Sample sample_from_json(const Json& j) {
  const Json& v = j.is_object() ? field(j, "values") : j;
  try {
    return Sample(v.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    parse_fail(e.what());
  }
}

Json to_json(const Alphabet& a) { return Json(std::vector<double>(a.atoms().begin(), a.atoms().end())); }

Alphabet alphabet_from_json(const Json& j) {
  try {
    return Alphabet(j.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    parse_fail(e.what());
  }
}

Json to_json(const DiscreteDistribution& p) {
  return {{"atoms", to_json(p.alphabet())},
          {"masses", std::vector<double>(p.masses().begin(), p.masses().end())}};
}

DiscreteDistribution distribution_from_json(const Json& j) {
  return DiscreteDistribution(alphabet_from_json(field(j, "atoms")), get<std::vector<double>>(j, "masses"));
}

Json to_json(const Transform& g) {
  return std::visit(
      [](const auto& v) -> Json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, SignedPermutation>) {
          return {{"type", "signed_permutation"}, {"perm", v.perm}, {"signs", v.signs}};
        } else if constexpr (std::is_same_v<V, MatrixMap>) {
          return {{"type", "matrix"}, {"rows", to_json(v.a)}};
        } else if constexpr (std::is_same_v<V, AtomMap>) {
          return {{"type", "atom_map"}, {"atoms", v.atoms}, {"image", v.image}};
        } else {
          return {{"type", "point_swap"}, {"x", v.x}, {"y", v.y}};
        }
      },
      g.variant());
}

Transform transform_from_json(const Json& j) {
  const auto type = get<std::string>(j, "type");
  if (type == "signed_permutation") {
    auto perm = get<std::vector<std::size_t>>(j, "perm");
    auto signs = get_or<std::vector<int>>(j, "signs", std::vector<int>(perm.size(), 1));
    return Transform::signed_permutation(std::move(perm), std::move(signs));
  }
  if (type == "matrix") return Transform::matrix(matrix_from_json(field(j, "rows")));
  if (type == "atom_map")
    return Transform::atom_map(alphabet_from_json(field(j, "atoms")), get<std::vector<std::size_t>>(j, "image"));
  if (type == "point_swap")
    return Transform::point_swap(get<std::vector<double>>(j, "x"), get<std::vector<double>>(j, "y"));
  parse_fail("unknown transform type '" + type + "'");
}

namespace {

std::string_view sampler_name(SamplerKind k) {
  switch (k) {
    case SamplerKind::Permutation: return "permutation";
    case SamplerKind::SignChange: return "sign_change";
    case SamplerKind::Haar: return "haar";
  }
  return "permutation";
}

SamplerKind sampler_from(const std::string& s) {
  if (s == "permutation") return SamplerKind::Permutation;
  if (s == "sign_change") return SamplerKind::SignChange;
  if (s == "haar") return SamplerKind::Haar;
  parse_fail("unknown sampler '" + s + "'");
}

std::vector<Transform> transforms_from(const Json& j) {
  if (!j.is_array()) parse_fail("expected an array of transforms");
  std::vector<Transform> out;
  for (const auto& e : j) out.push_back(transform_from_json(e));
  return out;
}

Json transforms_to(std::span<const Transform> ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(to_json(t));
  return a;
}

}  // namespace

Json to_json(const GroupSpec& g) {
  return std::visit(
      [](const auto& v) -> Json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ExplicitGroup>) {
          return {{"kind", "explicit"}, {"elements", transforms_to(v.elements)}};
        } else if constexpr (std::is_same_v<V, GeneratedGroup>) {
          return {{"kind", "generated"}, {"generators", transforms_to(v.generators)}, {"closure_cap", v.closure_cap}};
        } else {
          return {{"kind", "sampled"},     {"sampler", sampler_name(v.sampler)}, {"n", v.n},
                  {"seed", v.seed},        {"draws", v.draws},
                  {"include_identity", v.include_identity}};
        }
      },
      g);
}

GroupSpec group_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  const auto cap = get_or<std::size_t>(j, "cap", kDefaultGroupCap);
  if (kind == "explicit") return ExplicitGroup{transforms_from(field(j, "elements"))};
  if (kind == "generated")
    return GeneratedGroup{transforms_from(field(j, "generators")), get_or<std::size_t>(j, "closure_cap", cap)};
  if (kind == "sampled") {
    SampledGroup s;
    s.sampler = sampler_from(get<std::string>(j, "sampler"));
    s.n = get<std::size_t>(j, "n");
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    s.draws = get_or<std::size_t>(j, "draws", 1000);
    s.include_identity = get_or<bool>(j, "include_identity", true);
    return s;
  }
  if (kind == "sign_change") {
    std::optional<std::vector<std::size_t>> subset;
    if (j.contains("subset")) subset = get<std::vector<std::size_t>>(j, "subset");
    return groups::sign_change_group(get<std::size_t>(j, "n"), subset, cap);
  }
  if (kind == "permutation") {
    const auto mode = get_or<std::string>(j, "mode", "full");
    if (mode != "full" && mode != "sampled") parse_fail("permutation mode must be full or sampled");
    return groups::permutation_group(get<std::size_t>(j, "n"),
                                     mode == "full" ? groups::PermutationMode::Full : groups::PermutationMode::Sampled,
                                     get_or<std::size_t>(j, "draws", 1000), get_or<std::uint64_t>(j, "seed", 0));
  }
  if (kind == "cyclic") return groups::generate_cyclic(transform_from_json(field(j, "generator")), cap);
  if (kind == "atom_swap")
    return groups::atom_swap_group(alphabet_from_json(field(j, "atoms")), get<std::size_t>(j, "first"),
                                   get<std::size_t>(j, "second"));
  if (kind == "haar")
    return groups::haar_orthogonal_sampler(get<std::size_t>(j, "n"), get_or<std::size_t>(j, "draws", 1000),
                                           get_or<std::uint64_t>(j, "seed", 0));
  if (kind == "block_rotation") {
    const auto mode = get_or<std::string>(j, "mode", "cyclic_per_block");
    groups::BlockRotationMode m;
    if (mode == "cyclic_per_block") m = groups::BlockRotationMode::CyclicPerBlock;
    else if (mode == "with_block_permutations") m = groups::BlockRotationMode::WithBlockPermutations;
    else parse_fail("unknown block rotation mode '" + mode + "'");
    return groups::block_rotation_group(get<std::size_t>(j, "n"), m, cap);
  }
  parse_fail("unknown group kind '" + kind + "'");
}

Json to_json(const Decision& d) {
  return {{"phi", d.phi},       {"p_value", d.p_value}, {"M", d.M},         {"k", d.k},
          {"M_plus", d.M_plus}, {"M_zero", d.M_zero},   {"a_x", d.a_x},     {"T_obs", d.T_obs},
          {"level", d.level}};
}

Decision decision_from_json(const Json& j) {
  Decision d;
  d.phi = get<double>(j, "phi");
  d.p_value = get<double>(j, "p_value");
  d.M = get<std::size_t>(j, "M");
  d.k = get<std::size_t>(j, "k");
  d.M_plus = get<std::size_t>(j, "M_plus");
  d.M_zero = get<std::size_t>(j, "M_zero");
  d.a_x = get<double>(j, "a_x");
  d.T_obs = get<double>(j, "T_obs");
  d.level = get<double>(j, "level");
  return d;
}

Json to_json(const CountDiff& d) { return Json(std::vector<long long>(d.values().begin(), d.values().end())); }

CountDiff count_diff_from_json(const Json& j, const Alphabet& alphabet) {
  try {
    return CountDiff(alphabet, j.get<std::vector<long long>>());
  } catch (const nlohmann::json::exception& e) {
    parse_fail(e.what());
  }
}

Json to_json(const NullSpec& n) {
  Json j = {{"alphabet", to_json(n.alphabet())}, {"family", n.family_name()}};
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, EqualMass>) {
          j["first"] = f.first;
          j["second"] = f.second;
        } else if constexpr (std::is_same_v<F, MomentNull>) {
          j["t"] = f.t;
          j["beta"] = f.beta;
        } else if constexpr (std::is_same_v<F, QuantileNull>) {
          j["q"] = f.q;
          j["prob"] = f.prob;
        }
      },
      n.family());
  return j;
}

NullSpec null_from_json(const Json& in) {
  const Json& j = in.is_object() && in.contains("null") ? in.at("null") : in;
  auto alphabet = alphabet_from_json(field(j, "alphabet"));
  const auto family = get<std::string>(j, "family");
  if (family == "symmetric") return NullSpec(std::move(alphabet), SymmetricAboutZero{});
  if (family == "equal_mass")
    return NullSpec(std::move(alphabet), EqualMass{get<std::size_t>(j, "first"), get<std::size_t>(j, "second")});
  if (family == "moment") return NullSpec(std::move(alphabet), MomentNull{get<int>(j, "t"), get<double>(j, "beta")});
  if (family == "quantile")
    return NullSpec(std::move(alphabet), QuantileNull{get<double>(j, "q"), get<double>(j, "prob")});
  parse_fail("unknown null family '" + family + "'");
}

Json to_json(const finite_null::HypothesisDecision& d, const NullSpec& null, std::size_t n) {
  Json j = {{"null", to_json(null)},
            {"n", n},
            {"status", finite_null::to_string(d.status)},
            {"examined", d.search.examined},
            {"total", d.search.total},
            {"budget_exhausted", d.budget_exhausted}};
  if (!d.note.empty()) j["note"] = d.note;
  if (d.search.witness) {
    const auto& w = *d.search.witness;
    j["witness"] = {{"x", w.x}, {"y", w.y}, {"d", to_json(w.d)}, {"method", w.method}, {"group", to_json(w.group)}};
  }
  Json ledger = Json::array();
  for (const auto& e : d.search.ledger) {
    ledger.push_back({{"d", to_json(e.d)},
                      {"masses", std::vector<double>(e.p.masses().begin(), e.p.masses().end())},
                      {"log_ratio", e.log_ratio},
                      {"residual", e.residual},
                      {"method", e.method}});
  }
  j["ledger"] = std::move(ledger);
  Json unknown = Json::array();
  for (const auto& u : d.search.unknown) unknown.push_back(to_json(u));
  j["unknown"] = std::move(unknown);
  return j;
}

std::string ledger_csv(std::span<const finite_null::LedgerEntry> ledger) {
  std::ostringstream os;
  os.precision(17);
  os << "d,masses,log_ratio,residual,method\n";
  for (const auto& e : ledger) {
    os << join<long long>(e.d.values()) << ',' << join<double>(e.p.masses()) << ',' << e.log_ratio << ','
       << e.residual << ',' << e.method << '\n';
  }
  return os.str();
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  std::vector<std::vector<double>> rows;
  try {
    rows = j.get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("matrix must be an array of rows: ") + e.what());
  }
  if (rows.empty()) parse_fail("matrix has no rows");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) parse_fail("matrix rows differ in length");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return a;
}

Json to_json(const Eigen::MatrixXd& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index k = 0; k < a.cols(); ++k) r[static_cast<std::size_t>(k)] = a(i, k);
    rows.push_back(r);
  }
  return rows;
}

std::vector<Eigen::MatrixXd> matrices_from_json(const Json& j) {
  const Json& list = j.is_object() ? field(j, "generators") : j;
  if (!list.is_array() || list.empty()) parse_fail("expected a matrix or a list of matrices");
  const bool single = list[0].is_array() && !list[0].empty() && list[0][0].is_number();
  std::vector<Eigen::MatrixXd> out;
  if (single) {
    out.push_back(matrix_from_json(list));
  } else {
    for (const auto& m : list) out.push_back(matrix_from_json(m));
  }
  return out;
}

std::vector<Eigen::MatrixXd> matrices_from_csv(const std::string& text) {
  std::vector<Eigen::MatrixXd> out;
  std::vector<std::vector<double>> rows;
  auto flush = [&] {
    if (rows.empty()) return;
    out.push_back(matrix_from_json(Json(rows)));
    rows.clear();
  };
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(parse_double(trim(cell)));
    rows.push_back(std::move(row));
  }
  flush();
  if (out.empty()) parse_fail("no matrices found");
  return out;
}

Json to_json(const linear_classify::GroupReport& r, std::span<const Eigen::MatrixXd> generators) {
  Json gens = Json::array();
  Json labels = Json::array();
  for (std::size_t i = 0; i < r.generators.size(); ++i) {
    const auto& g = r.generators[i];
    labels.push_back({{"label", to_string(g.label)},
                      {"monomial", g.monomial},
                      {"derived", g.derived},
                      {"reason", g.reason},
                      {"zero_threshold", g.zero_threshold},
                      {"orthogonality_residual", g.orthogonality_residual},
                      {"ones_residual", g.ones_residual}});
    gens.push_back(to_json(generators[i]));
  }
  return {{"generators", gens}, {"labels", labels}, {"meet", to_string(r.meet)}, {"zero_tol", r.zero_tol}};
}

Json to_json(const linear_classify::InvarianceReport& r) {
  return {{"statistics", r.statistics},
          {"p_values", r.p_values},
          {"per_coordinate_level", r.per_coordinate_level},
          {"family_level", r.family_level},
          {"reps", r.reps},
          {"seed", r.seed},
          {"pass", r.pass}};
}

Json to_json(const PiecewiseDensity& d) {
  Json a = Json::array();
  for (const auto& p : d.pieces()) a.push_back({{"lo", p.lo}, {"hi", p.hi}, {"value", p.value}});
  return a;
}

PiecewiseDensity density_from_json(const Json& j) {
  if (!j.is_array()) parse_fail("density must be an array of pieces");
  std::vector<Piece> pieces;
  for (const auto& p : j) pieces.push_back({get<double>(p, "lo"), get<double>(p, "hi"), get_or<double>(p, "value", 1.0)});
  return PiecewiseDensity(std::move(pieces));
}

Json to_json(const TargetFunctional& t) {
  switch (t.kind) {
    case TargetKind::Moment: return {{"kind", "moment"}, {"t", t.t}, {"value", t.value}};
    case TargetKind::Quantile: return {{"kind", "quantile"}, {"q", t.q}, {"value", t.value}};
    case TargetKind::Variance: return {{"kind", "variance"}, {"value", t.value}};
  }
  return {};
}

TargetFunctional target_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  TargetFunctional t;
  t.value = get<double>(j, "value");
  if (kind == "moment") {
    t.kind = TargetKind::Moment;
    t.t = get<int>(j, "t");
  } else if (kind == "quantile") {
    t.kind = TargetKind::Quantile;
    t.q = get<double>(j, "q");
  } else if (kind == "variance") {
    t.kind = TargetKind::Variance;
    t.t = 2;
  } else {
    parse_fail("unknown target kind '" + kind + "'");
  }
  return t;
}

Json to_json(const MixtureConstruction& c) {
  Json j = {{"alpha", c.alpha},
            {"base", to_json(c.base)},
            {"complement", to_json(c.complement)},
            {"density", to_json(c.density)},
            {"target", to_json(c.target)}};
  if (c.support) j["support"] = {{"lo", c.support->lo}, {"hi", c.support->hi}};
  if (c.width_bound) j["width_bound"] = *c.width_bound;
  return j;
}

Json to_json(const dense_construct::MixtureCheck& c) {
  return {{"mass", c.mass},
          {"mass_residual", c.mass_residual},
          {"restriction_residual", c.restriction_residual},
          {"target_value", c.target_value},
          {"target_residual", c.target_residual},
          {"complement_disjoint", c.complement_disjoint},
          {"ok", c.ok()}};
}

Json to_json(const mc::RateEstimate& r) {
  return {{"rate", r.rate},   {"se", r.se},     {"ci_lo", r.ci_lo},
          {"ci_hi", r.ci_hi}, {"reps", r.reps}, {"pvalue_cdf", r.pvalue_cdf}};
}

}  // namespace randinf::io
