#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "randinf/dense_construct.hpp"
#include "randinf/engine.hpp"
#include "randinf/finite_null.hpp"
#include "randinf/groups.hpp"
#include "randinf/io.hpp"
#include "randinf/linear_classify.hpp"
#include "randinf/mc_harness.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace randinf;

namespace {

// Dicts cross the boundary as JSON text; the Python package wraps them.
std::string dump(const io::Json& j) { return j.dump(); }

GroupSpec group_arg(const std::string& group_json) { return io::group_from_json(io::parse_json(group_json)); }

std::string randomization_test(const std::vector<double>& sample, const std::string& group, const std::string& statistic,
                               double level, std::size_t cap) {
  const auto d = engine::run_randomization_test(Sample(sample), group_arg(group), Statistic::from_name(statistic),
                                                level, cap);
  return dump(io::to_json(d));
}

std::vector<double> group_average(const std::vector<double>& sample, const std::string& group,
                                  const std::string& statistic, const std::vector<double>& levels) {
  return engine::group_average_phi(Sample(sample), group_arg(group), Statistic::from_name(statistic), levels);
}

std::size_t group_order(const std::string& group, std::size_t cap) { return groups::realize(group_arg(group), cap).size(); }

std::string check_null(const std::string& spec, std::size_t n, std::size_t budget, std::uint64_t seed) {
  const auto null = io::null_from_json(io::parse_json(spec));
  finite_null::CounterexampleOptions opts;
  opts.seed = rng::derive(seed, "check-null");
  return dump(io::to_json(finite_null::decide_randomization_hypothesis(null, n, budget, opts), null, n));
}

std::string classify(const std::string& matrices, double zero_tol) {
  const auto mats = io::matrices_from_json(io::parse_json(matrices));
  return dump(io::to_json(linear_classify::classify_group_report(mats, zero_tol), mats));
}

std::string invariance_check(const std::string& matrix, const std::string& dgp, std::size_t reps, std::uint64_t seed,
                             double family_level) {
  const auto a = io::matrix_from_json(io::parse_json(matrix));
  return dump(io::to_json(
      linear_classify::empirical_invariance_check(a, mc::Dgp::from_name(dgp), reps, seed, family_level)));
}

std::string construct_density(const std::string& base, const std::string& target, std::optional<double> lo,
                              std::optional<double> hi) {
  const auto b = io::density_from_json(io::parse_json(base));
  const auto t = io::target_from_json(io::parse_json(target));
  std::optional<BoundedSupport> support;
  if (lo || hi) {
    if (!lo || !hi) throw Error(ErrorCode::InvalidArgument, "bounded support needs both lo and hi");
    support = BoundedSupport{*lo, *hi};
  }
  MixtureConstruction c;
  switch (t.kind) {
    case TargetKind::Moment: c = dense_construct::match_moment_density(b, t.t, t.value, support); break;
    case TargetKind::Quantile: c = dense_construct::match_quantile_density(b, t.q, t.value, support); break;
    case TargetKind::Variance:
      if (support) throw Error(ErrorCode::InvalidArgument, "variance matching is on the real line only");
      c = dense_construct::match_variance_density(b, t.value);
      break;
  }
  auto j = io::to_json(c);
  j["check"] = io::to_json(dense_construct::numeric_check_mixture(c));
  return dump(j);
}

std::string rejection_rate(const std::string& dgp, const std::string& group, const std::string& statistic,
                           double level, std::size_t n, std::size_t reps, std::uint64_t seed) {
  const auto spec = mc::group_builder(group, seed)(n);
  return dump(io::to_json(
      mc::estimate_rejection_rate(mc::Dgp::from_name(dgp), spec, Statistic::from_name(statistic), level, n, reps, seed)));
}

}  // namespace

PYBIND11_MODULE(_randinf, m) {
  m.doc() = "Randomization tests and the randomization hypothesis";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() -> py::object { return py::exception<Error>(m, "RandinfError", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object inst = type(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  m.def("randomization_test", &randomization_test, "sample"_a, "group"_a, "statistic"_a, "level"_a,
        "cap"_a = kDefaultGroupCap);
  m.def("group_average_phi", &group_average, "sample"_a, "group"_a, "statistic"_a, "levels"_a);
  m.def("group_order", &group_order, "group"_a, "cap"_a = kDefaultGroupCap);
  m.def("check_null", &check_null, "spec"_a, "n"_a, "budget"_a, "seed"_a);
  m.def("classify", &classify, "matrices"_a, "zero_tol"_a);
  m.def("invariance_check", &invariance_check, "matrix"_a, "dgp"_a, "reps"_a, "seed"_a, "family_level"_a);
  m.def("construct_density", &construct_density, "base"_a, "target"_a, "lo"_a = py::none(), "hi"_a = py::none());
  m.def("rejection_rate", &rejection_rate, "dgp"_a, "group"_a, "statistic"_a, "level"_a, "n"_a, "reps"_a, "seed"_a);
  m.def("ks_two_sample", [](std::vector<double> a, std::vector<double> b) {
    const auto r = linear_classify::ks_two_sample(std::move(a), std::move(b));
    return py::make_tuple(r.statistic, r.p_value);
  }, "a"_a, "b"_a);
}
