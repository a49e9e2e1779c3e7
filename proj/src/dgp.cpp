#include "randinf/dgp.hpp"

#include <cmath>
#include <random>

#include "randinf/error.hpp"

namespace randinf::mc {

namespace {

struct Named {
  const char* name;
  DgpKind kind;
};

constexpr Named kPanel[] = {
    {"normal", DgpKind::Normal},
    {"normal_3_4", DgpKind::Normal34},
    {"uniform01", DgpKind::Uniform01},
    {"uniform_pm1", DgpKind::UniformPm1},
    {"exp_centered", DgpKind::ExpCentered},
    {"laplace", DgpKind::Laplace},
    {"lognormal_centered", DgpKind::LognormalCentered},
};

}  // namespace

Dgp Dgp::from_name(const std::string& name) {
  for (const auto& n : kPanel)
    if (name == n.name) return Dgp(n.kind);
  throw Error(ErrorCode::UnknownDgp, "unknown data-generating process '" + name + "'");
}

std::vector<std::string> Dgp::panel() {
  std::vector<std::string> out;
  for (const auto& n : kPanel) out.emplace_back(n.name);
  return out;
}

std::string Dgp::name() const {
  for (const auto& n : kPanel)
    if (n.kind == kind_) return n.name;
  return "unknown";
}

bool Dgp::symmetric() const noexcept {
  return kind_ == DgpKind::Normal || kind_ == DgpKind::UniformPm1 || kind_ == DgpKind::Laplace;
}

double Dgp::draw(rng::Engine& engine) const {
  switch (kind_) {
    case DgpKind::Normal:
      return std::normal_distribution<double>(0.0, 1.0)(engine);
    case DgpKind::Normal34:
      return std::normal_distribution<double>(3.0, 2.0)(engine);
    case DgpKind::Uniform01:
      return std::uniform_real_distribution<double>(0.0, 1.0)(engine);
    case DgpKind::UniformPm1:
      return std::uniform_real_distribution<double>(-1.0, 1.0)(engine);
    case DgpKind::ExpCentered:
      return std::exponential_distribution<double>(1.0)(engine) - 1.0;
    case DgpKind::Laplace: {
      const double e = std::exponential_distribution<double>(1.0)(engine);
      return (engine() >> 63) ? -e : e;
    }
    case DgpKind::LognormalCentered:
      return std::lognormal_distribution<double>(0.0, 1.0)(engine) - std::exp(0.5);
  }
  return 0.0;
}

void Dgp::fill(std::span<double> out, rng::Engine& engine) const {
  for (auto& v : out) v = draw(engine);
}

}  // namespace randinf::mc
