#include <algorithm>
#include <cmath>
#include <cstring>

#include "randinf/core.hpp"

namespace randinf {

namespace {

constexpr double kMaxCondition = 1e12;

void require_permutation(const std::vector<std::size_t>& perm, const char* what) {
  std::vector<char> seen(perm.size(), 0);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not a bijection");
    seen[p] = 1;
  }
}

std::vector<std::size_t> invert_permutation(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

template <typename T>
void append_bytes(std::string& out, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

// Collapses -0.0 onto +0.0 so that equal values share an encoding.
double canonical_zero(double v) { return v + 0.0; }

bool same_points(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

Transform Transform::identity(std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  return signed_permutation(std::move(perm), std::vector<int>(n, 1));
}

Transform Transform::signed_permutation(std::vector<std::size_t> perm, std::vector<int> signs) {
  if (perm.empty()) throw Error(ErrorCode::InvalidArgument, "transform dimension must be positive");
  if (perm.size() != signs.size()) throw Error(ErrorCode::DimensionMismatch, "permutation and sign vector differ in length");
  require_permutation(perm, "permutation");
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidArgument, "signs must be +1 or -1");
  }
  return Transform(SignedPermutation{std::move(perm), std::move(signs)});
}

Transform Transform::permutation(std::vector<std::size_t> perm) {
  const auto n = perm.size();
  return signed_permutation(std::move(perm), std::vector<int>(n, 1));
}

Transform Transform::sign_flip(std::vector<int> signs) {
  std::vector<std::size_t> perm(signs.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  return signed_permutation(std::move(perm), std::move(signs));
}

Transform Transform::matrix(Eigen::MatrixXd a) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix must be square and non-empty");
  if (!a.allFinite()) throw Error(ErrorCode::NonFiniteValue, "matrix has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || smax / smin > kMaxCondition)
    throw Error(ErrorCode::SingularMatrix, "matrix condition number exceeds 1e12");
  return Transform(MatrixMap{std::move(a)});
}

Transform Transform::atom_map(const Alphabet& alphabet, std::vector<std::size_t> image) {
  if (image.size() != alphabet.size()) throw Error(ErrorCode::DimensionMismatch, "atom map needs one image per atom");
  require_permutation(image, "atom map");
  std::vector<double> atoms(alphabet.atoms().begin(), alphabet.atoms().end());
  return Transform(AtomMap{std::move(atoms), std::move(image)});
}

Transform Transform::atom_swap(const Alphabet& alphabet, std::size_t first, std::size_t second) {
  if (first >= alphabet.size() || second >= alphabet.size())
    throw Error(ErrorCode::InvalidArgument, "atom index out of range");
  if (first == second) throw Error(ErrorCode::SameAtom, "cannot swap an atom with itself");
  std::vector<std::size_t> image(alphabet.size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = i;
  std::swap(image[first], image[second]);
  return atom_map(alphabet, std::move(image));
}

Transform Transform::point_swap(std::vector<double> x, std::vector<double> y) {
  if (x.empty()) throw Error(ErrorCode::InvalidArgument, "points must be non-empty");
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "swapped points differ in length");
  for (double v : x) if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "point coordinate not finite");
  for (double v : y) if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "point coordinate not finite");
  if (same_points(x, y)) throw Error(ErrorCode::EqualPoints, "point swap needs x != y");
  return Transform(PointSwap{std::move(x), std::move(y)});
}

TransformKind Transform::kind() const noexcept {
  return static_cast<TransformKind>(v_.index());
}

std::size_t Transform::dimension() const noexcept {
  switch (kind()) {
    case TransformKind::SignedPermutation: return std::get<SignedPermutation>(v_).perm.size();
    case TransformKind::Matrix: return static_cast<std::size_t>(std::get<MatrixMap>(v_).a.rows());
    case TransformKind::AtomMap: return 0;
    case TransformKind::PointSwap: return std::get<PointSwap>(v_).x.size();
  }
  return 0;
}

void Transform::apply_into(std::span<const double> in, std::span<double> out) const {
  const std::size_t dim = dimension();
  if ((dim != 0 && in.size() != dim) || out.size() != in.size())
    throw Error(ErrorCode::DimensionMismatch,
                "transform of dimension " + std::to_string(dim) + " applied to length " + std::to_string(in.size()));
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, SignedPermutation>) {
          for (std::size_t i = 0; i < in.size(); ++i) {
            const double v = in[g.perm[i]];
            out[i] = static_cast<double>(g.signs[i]) * v;
          }
        } else if constexpr (std::is_same_v<G, MatrixMap>) {
          Eigen::Map<const Eigen::VectorXd> x(in.data(), static_cast<Eigen::Index>(in.size()));
          Eigen::Map<Eigen::VectorXd> y(out.data(), static_cast<Eigen::Index>(out.size()));
          y.noalias() = g.a * x;
        } else if constexpr (std::is_same_v<G, AtomMap>) {
          for (std::size_t i = 0; i < in.size(); ++i) {
            auto it = std::lower_bound(g.atoms.begin(), g.atoms.end(), in[i]);
            if (it == g.atoms.end() || *it != in[i])
              throw Error(ErrorCode::AtomNotInAlphabet, "value " + std::to_string(in[i]) + " is not an atom");
            out[i] = g.atoms[g.image[static_cast<std::size_t>(it - g.atoms.begin())]];
          }
        } else {
          std::span<const double> src = in;
          if (same_points(in, g.x)) src = g.y;
          else if (same_points(in, g.y)) src = g.x;
          std::copy(src.begin(), src.end(), out.begin());
        }
      },
      v_);
}

std::vector<double> Transform::apply(std::span<const double> in) const {
  std::vector<double> out(in.size());
  apply_into(in, out);
  return out;
}

Transform Transform::inverse() const {
  return std::visit(
      [](const auto& g) -> Transform {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, SignedPermutation>) {
          auto inv = invert_permutation(g.perm);
          std::vector<int> signs(inv.size());
          for (std::size_t j = 0; j < inv.size(); ++j) signs[j] = g.signs[inv[j]];
          return Transform(SignedPermutation{std::move(inv), std::move(signs)});
        } else if constexpr (std::is_same_v<G, MatrixMap>) {
          return Transform(MatrixMap{g.a.inverse()});
        } else if constexpr (std::is_same_v<G, AtomMap>) {
          return Transform(AtomMap{g.atoms, invert_permutation(g.image)});
        } else {
          return Transform(g);
        }
      },
      v_);
}

bool Transform::is_identity(double matrix_tol) const {
  return std::visit(
      [&](const auto& g) -> bool {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, SignedPermutation>) {
          for (std::size_t i = 0; i < g.perm.size(); ++i)
            if (g.perm[i] != i || g.signs[i] != 1) return false;
          return true;
        } else if constexpr (std::is_same_v<G, MatrixMap>) {
          const auto n = g.a.rows();
          return (g.a - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= matrix_tol;
        } else if constexpr (std::is_same_v<G, AtomMap>) {
          for (std::size_t i = 0; i < g.image.size(); ++i)
            if (g.image[i] != i) return false;
          return true;
        } else {
          return false;
        }
      },
      v_);
}

std::string Transform::key() const {
  std::string out;
  out.push_back(static_cast<char>('0' + v_.index()));
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, SignedPermutation>) {
          for (std::size_t i = 0; i < g.perm.size(); ++i) {
            append_bytes(out, static_cast<std::uint32_t>(g.perm[i]));
            out.push_back(g.signs[i] < 0 ? '-' : '+');
          }
        } else if constexpr (std::is_same_v<G, MatrixMap>) {
          append_bytes(out, static_cast<std::uint32_t>(g.a.rows()));
          for (Eigen::Index i = 0; i < g.a.rows(); ++i)
            for (Eigen::Index j = 0; j < g.a.cols(); ++j)
              append_bytes(out, static_cast<std::int64_t>(std::llround(g.a(i, j) * 1e9)));
        } else if constexpr (std::is_same_v<G, AtomMap>) {
          for (double a : g.atoms) append_bytes(out, canonical_zero(a));
          for (std::size_t i : g.image) append_bytes(out, static_cast<std::uint32_t>(i));
        } else {
          // Unordered pair: the swap x<->y equals the swap y<->x.
          const bool ordered = std::lexicographical_compare(g.x.begin(), g.x.end(), g.y.begin(), g.y.end());
          const auto& first = ordered ? g.x : g.y;
          const auto& second = ordered ? g.y : g.x;
          for (double v : first) append_bytes(out, canonical_zero(v));
          out.push_back('|');
          for (double v : second) append_bytes(out, canonical_zero(v));
        }
      },
      v_);
  return out;
}

Eigen::MatrixXd Transform::as_matrix() const {
  if (const auto* g = std::get_if<SignedPermutation>(&v_)) {
    const auto n = static_cast<Eigen::Index>(g->perm.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, static_cast<Eigen::Index>(g->perm[i])) = g->signs[i];
    return m;
  }
  if (const auto* g = std::get_if<MatrixMap>(&v_)) return g->a;
  throw Error(ErrorCode::IncompatibleTransforms, "transform has no matrix representation");
}

bool Transform::same_as(const Transform& other, double matrix_tol) const {
  const bool linear_a = kind() == TransformKind::SignedPermutation || kind() == TransformKind::Matrix;
  const bool linear_b = other.kind() == TransformKind::SignedPermutation || other.kind() == TransformKind::Matrix;
  if (kind() == TransformKind::Matrix || other.kind() == TransformKind::Matrix) {
    if (!linear_a || !linear_b || dimension() != other.dimension()) return false;
    return (as_matrix() - other.as_matrix()).cwiseAbs().maxCoeff() < matrix_tol;
  }
  return kind() == other.kind() && key() == other.key();
}

Transform compose(const Transform& outer, const Transform& inner) {
  const auto d_out = outer.dimension();
  const auto d_in = inner.dimension();
  if (d_out != 0 && d_in != 0 && d_out != d_in)
    throw Error(ErrorCode::DimensionMismatch, "composing transforms of different dimensions");
  if (inner.is_identity(0.0)) return outer;
  if (outer.is_identity(0.0)) return inner;

  const auto ko = outer.kind();
  const auto ki = inner.kind();
  using K = TransformKind;
  if (ko == K::SignedPermutation && ki == K::SignedPermutation) {
    const auto& g = std::get<SignedPermutation>(outer.v_);
    const auto& h = std::get<SignedPermutation>(inner.v_);
    const auto n = g.perm.size();
    std::vector<std::size_t> perm(n);
    std::vector<int> signs(n);
    for (std::size_t i = 0; i < n; ++i) {
      perm[i] = h.perm[g.perm[i]];
      signs[i] = g.signs[i] * h.signs[g.perm[i]];
    }
    return Transform(SignedPermutation{std::move(perm), std::move(signs)});
  }
  if ((ko == K::Matrix || ko == K::SignedPermutation) && (ki == K::Matrix || ki == K::SignedPermutation)) {
    return Transform(MatrixMap{outer.as_matrix() * inner.as_matrix()});
  }
  if (ko == K::AtomMap && ki == K::AtomMap) {
    const auto& g = std::get<AtomMap>(outer.v_);
    const auto& h = std::get<AtomMap>(inner.v_);
    if (g.atoms != h.atoms) throw Error(ErrorCode::IncompatibleTransforms, "atom maps over different alphabets");
    std::vector<std::size_t> image(h.image.size());
    for (std::size_t i = 0; i < image.size(); ++i) image[i] = g.image[h.image[i]];
    return Transform(AtomMap{g.atoms, std::move(image)});
  }
  if (ko == K::PointSwap && ki == K::PointSwap) {
    const auto& g = std::get<PointSwap>(outer.v_);
    const auto& h = std::get<PointSwap>(inner.v_);
    const bool same = (same_points(g.x, h.x) && same_points(g.y, h.y)) || (same_points(g.x, h.y) && same_points(g.y, h.x));
    if (same) return Transform::identity(g.x.size());
  }
  throw Error(ErrorCode::IncompatibleTransforms, "composition is not representable by a single transform");
}

}  // namespace randinf
