#include "randinf/groups.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace randinf::groups {

namespace {

Transform identity_like(const Transform& f) {
  switch (f.kind()) {
    case TransformKind::Matrix: {
      const auto n = static_cast<Eigen::Index>(f.dimension());
      return Transform::matrix(Eigen::MatrixXd::Identity(n, n));
    }
    case TransformKind::AtomMap: {
      const auto& g = std::get<AtomMap>(f.variant());
      std::vector<std::size_t> image(g.atoms.size());
      std::iota(image.begin(), image.end(), std::size_t{0});
      return Transform::atom_map(Alphabet(g.atoms), std::move(image));
    }
    default:
      return Transform::identity(f.dimension());
  }
}

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

std::vector<Transform> draw_sampled(const SampledGroup& s) {
  std::vector<Transform> out;
  out.reserve(s.draws);
  std::size_t first_draw = 0;
  if (s.include_identity) {
    out.push_back(s.sampler == SamplerKind::Haar
                      ? Transform::matrix(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(s.n), static_cast<Eigen::Index>(s.n)))
                      : Transform::identity(s.n));
    first_draw = 1;
  }
  for (std::size_t i = first_draw; i < s.draws; ++i) {
    auto engine = rng::engine(rng::derive(s.seed, static_cast<std::uint64_t>(i)));
    switch (s.sampler) {
      case SamplerKind::Permutation: {
        std::vector<std::size_t> perm(s.n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), engine);
        out.push_back(Transform::permutation(std::move(perm)));
        break;
      }
      case SamplerKind::SignChange: {
        std::vector<int> signs(s.n);
        for (auto& v : signs) v = (engine() >> 63) ? -1 : 1;
        out.push_back(Transform::sign_flip(std::move(signs)));
        break;
      }
      case SamplerKind::Haar:
        out.push_back(Transform::matrix(draw_haar_orthogonal(s.n, engine)));
        break;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<std::size_t> ElementIndex::find(const Transform& g) const {
  if (auto it = by_key_.find(g.key()); it != by_key_.end()) return it->second;
  if (g.kind() == TransformKind::Matrix) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i].same_as(g, tol_)) return i;
    }
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> ElementIndex::insert(const Transform& g) {
  if (auto idx = find(g)) return {*idx, false};
  elements_.push_back(g);
  by_key_.emplace(g.key(), elements_.size() - 1);
  return {elements_.size() - 1, true};
}

// ---------------------------------------------------------------------------

GroupSpec sign_change_group(std::size_t n, std::optional<std::vector<std::size_t>> subset, std::size_t cap) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sign-change group needs n >= 1");
  std::vector<std::size_t> coords;
  if (subset) {
    coords = *subset;
    std::sort(coords.begin(), coords.end());
    if (std::adjacent_find(coords.begin(), coords.end()) != coords.end())
      throw Error(ErrorCode::InvalidArgument, "sign-change subset has duplicates");
    if (!coords.empty() && coords.back() >= n) throw Error(ErrorCode::InvalidArgument, "sign-change subset index out of range");
  } else {
    coords.resize(n);
    std::iota(coords.begin(), coords.end(), std::size_t{0});
  }
  const std::size_t size = checked_pow(2, coords.size(), cap);
  if (size > cap)
    throw Error(ErrorCode::SizeCap, "2^" + std::to_string(coords.size()) + " sign changes exceed cap " +
                                        std::to_string(cap) + "; use a sampled group");
  ExplicitGroup g;
  g.elements.reserve(size);
  for (std::size_t mask = 0; mask < size; ++mask) {
    std::vector<int> signs(n, 1);
    for (std::size_t b = 0; b < coords.size(); ++b)
      if (mask & (std::size_t{1} << b)) signs[coords[b]] = -1;
    g.elements.push_back(Transform::sign_flip(std::move(signs)));
  }
  return g;
}

GroupSpec permutation_group(std::size_t n, PermutationMode mode, std::size_t draws, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "permutation group needs n >= 1");
  if (mode == PermutationMode::Sampled) {
    if (draws == 0) throw Error(ErrorCode::InvalidArgument, "sampled group needs at least one draw");
    return SampledGroup{SamplerKind::Permutation, n, seed, draws, true};
  }
  if (n > kMaxFullPermutationN)
    throw Error(ErrorCode::SizeCap, "S_" + std::to_string(n) + " exceeds the enumeration cap; use a sampled group");
  ExplicitGroup g;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    g.elements.push_back(Transform::permutation(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return g;
}

GroupSpec generate_cyclic(const Transform& f, std::size_t cap) {
  ExplicitGroup g;
  g.elements.push_back(identity_like(f));
  Transform power = f;
  while (!power.is_identity(1e-9)) {
    if (g.elements.size() >= cap)
      throw Error(ErrorCode::OrderExceedsCap, "order of generator exceeds cap " + std::to_string(cap));
    g.elements.push_back(power);
    power = compose(f, power);
  }
  return g;
}

GroupSpec witness_to_group(const std::vector<double>& x, const std::vector<double>& y) {
  if (x == y) throw Error(ErrorCode::EqualPoints, "witness pair must differ");
  auto swap = Transform::point_swap(x, y);
  return ExplicitGroup{{Transform::identity(x.size()), std::move(swap)}};
}

GroupSpec atom_swap_group(const Alphabet& alphabet, std::size_t first, std::size_t second) {
  auto swap = Transform::atom_swap(alphabet, first, second);
  std::vector<std::size_t> image(alphabet.size());
  std::iota(image.begin(), image.end(), std::size_t{0});
  return ExplicitGroup{{Transform::atom_map(alphabet, std::move(image)), std::move(swap)}};
}

GroupSpec haar_orthogonal_sampler(std::size_t n, std::size_t draws, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Haar sampler needs n >= 2");
  if (draws < 2) throw Error(ErrorCode::InvalidArgument, "Haar sampler needs at least two draws");
  return SampledGroup{SamplerKind::Haar, n, seed, draws, true};
}

Eigen::MatrixXd draw_haar_orthogonal(std::size_t n, rng::Engine& engine) {
  const auto dim = static_cast<Eigen::Index>(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = normal(engine);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::Matrix3d block_rotation_matrix() {
  Eigen::Matrix3d a;
  a << 2.0, -1.0, 2.0,
       2.0, 2.0, -1.0,
       -1.0, 2.0, 2.0;
  return a / 3.0;
}

Eigen::MatrixXd block_diagonal_rotation(std::size_t n) {
  if (n == 0 || n % 3 != 0) throw Error(ErrorCode::InvalidArgument, "block rotation needs n divisible by 3");
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; b += 3) m.block<3, 3>(b, b) = block_rotation_matrix();
  return m;
}

GroupSpec block_rotation_group(std::size_t n, BlockRotationMode mode, std::size_t cap) {
  if (n == 0 || n % 3 != 0) throw Error(ErrorCode::InvalidArgument, "block rotation needs n divisible by 3");
  const std::size_t blocks = n / 3;
  std::size_t order = checked_pow(6, blocks, cap);
  if (mode == BlockRotationMode::WithBlockPermutations) {
    for (std::size_t b = 2; b <= blocks && order <= cap; ++b) order = order > cap / b ? cap + 1 : order * b;
  }
  if (order > cap) throw Error(ErrorCode::OrderExceedsCap, "block rotation group exceeds cap " + std::to_string(cap));

  const auto dim = static_cast<Eigen::Index>(n);
  GeneratedGroup g;
  g.closure_cap = cap;
  for (Eigen::Index b = 0; b < dim; b += 3) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
    m.block<3, 3>(b, b) = block_rotation_matrix();
    g.generators.push_back(Transform::matrix(std::move(m)));
  }
  if (mode == BlockRotationMode::WithBlockPermutations) {
    for (Eigen::Index b = 0; b + 3 < dim; b += 3) {
      Eigen::MatrixXd p = Eigen::MatrixXd::Identity(dim, dim);
      p.block<3, 3>(b, b).setZero();
      p.block<3, 3>(b + 3, b + 3).setZero();
      p.block<3, 3>(b, b + 3).setIdentity();
      p.block<3, 3>(b + 3, b).setIdentity();
      g.generators.push_back(Transform::matrix(std::move(p)));
    }
  }
  return g;
}

std::vector<Transform> closure(const std::vector<Transform>& generators, std::size_t cap) {
  if (generators.empty()) throw Error(ErrorCode::InvalidArgument, "closure needs at least one generator");
  ElementIndex index;
  index.insert(identity_like(generators.front()));
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t e = frontier.front();
    frontier.pop_front();
    for (const auto& s : generators) {
      auto [idx, inserted] = index.insert(compose(s, index.elements()[e]));
      if (inserted) {
        if (index.size() > cap)
          throw Error(ErrorCode::GroupTooLarge, "closure exceeds cap " + std::to_string(cap));
        frontier.push_back(idx);
      }
    }
  }
  return std::move(index).release();
}

std::vector<Transform> realize(const GroupSpec& spec, std::size_t cap) {
  return std::visit(
      [cap](const auto& g) -> std::vector<Transform> {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, ExplicitGroup>) {
          if (g.elements.empty()) throw Error(ErrorCode::InvalidArgument, "explicit group is empty");
          if (g.elements.size() > cap) throw Error(ErrorCode::GroupTooLarge, "explicit group exceeds cap");
          return g.elements;
        } else if constexpr (std::is_same_v<G, GeneratedGroup>) {
          return closure(g.generators, std::min(cap, g.closure_cap));
        } else {
          if (g.draws == 0) throw Error(ErrorCode::InvalidArgument, "sampled group needs at least one draw");
          if (g.draws > cap) throw Error(ErrorCode::GroupTooLarge, "sampled draw count exceeds cap");
          return draw_sampled(g);
        }
      },
      spec);
}

AxiomReport verify_group_axioms(const GroupSpec& spec) {
  const auto* g = std::get_if<ExplicitGroup>(&spec);
  if (!g) throw Error(ErrorCode::NotExplicitGroup, "axiom check needs an explicit element list");
  AxiomReport report;
  ElementIndex index;
  for (const auto& e : g->elements) index.insert(e);
  const auto& elems = g->elements;
  report.has_identity = std::any_of(elems.begin(), elems.end(), [](const Transform& e) { return e.is_identity(1e-9); });
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      try {
        if (!index.find(compose(elems[i], elems[j]))) report.closure_violations.emplace_back(i, j);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::IncompatibleTransforms) throw;
        report.incompatible.emplace_back(i, j);
      }
    }
    if (!index.find(elems[i].inverse())) report.inverse_violations.push_back(i);
  }
  return report;
}

}  // namespace randinf::groups
