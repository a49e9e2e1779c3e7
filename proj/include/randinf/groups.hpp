#pragma once

// Group constructors, closure of generated groups, and group-axiom checks.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "randinf/core.hpp"
#include "randinf/rng.hpp"

namespace randinf::groups {

inline constexpr std::size_t kMaxFullPermutationN = 9;

/// All 2^|subset| sign changes on the given coordinates (all coordinates
/// when subset is empty). Identity first. SizeCap when 2^|subset| > cap.
GroupSpec sign_change_group(std::size_t n, std::optional<std::vector<std::size_t>> subset = std::nullopt,
                            std::size_t cap = kDefaultGroupCap);

enum class PermutationMode { Full, Sampled };

/// Full symmetric group S_n for n <= 9; otherwise `draws` uniform
/// permutations with the identity first.
GroupSpec permutation_group(std::size_t n, PermutationMode mode, std::size_t draws = 1000, std::uint64_t seed = 0);

/// {f^0, ..., f^(r-1)} where r is the order of f.
GroupSpec generate_cyclic(const Transform& f, std::size_t cap = kDefaultGroupCap);

/// {identity, swap(x <-> y)}.
GroupSpec witness_to_group(const std::vector<double>& x, const std::vector<double>& y);

/// {identity, coordinatewise exchange of atoms `first` and `second`}.
GroupSpec atom_swap_group(const Alphabet& alphabet, std::size_t first, std::size_t second);

/// Sampled spec of rotation-invariant (Haar) orthogonal matrices.
GroupSpec haar_orthogonal_sampler(std::size_t n, std::size_t draws, std::uint64_t seed);

/// Orthogonal Q from the Haar measure on O(n): QR of a Gaussian matrix with
/// the sign of diag(R) folded into Q.
Eigen::MatrixXd draw_haar_orthogonal(std::size_t n, rng::Engine& engine);

/// The 3x3 rotation with rows (2,-1,2)/3, (2,2,-1)/3, (-1,2,2)/3. Orthogonal,
/// fixes the ones vector, order 6.
Eigen::Matrix3d block_rotation_matrix();

/// Block-diagonal matrix with the 3x3 rotation on every block.
Eigen::MatrixXd block_diagonal_rotation(std::size_t n);

enum class BlockRotationMode { CyclicPerBlock, WithBlockPermutations };

/// Generated group: one generator per 3x3 block (rotation on that block,
/// identity elsewhere); optionally adjacent block transpositions too.
GroupSpec block_rotation_group(std::size_t n, BlockRotationMode mode = BlockRotationMode::CyclicPerBlock,
                               std::size_t cap = kDefaultGroupCap);

/// Materializes the group: Explicit as-is, Generated by breadth-first
/// closure, Sampled by drawing. GroupTooLarge when the element count
/// exceeds cap.
std::vector<Transform> realize(const GroupSpec& spec, std::size_t cap = kDefaultGroupCap);

/// Breadth-first closure of generators under composition, identity first.
std::vector<Transform> closure(const std::vector<Transform>& generators, std::size_t cap);

struct AxiomReport {
  bool has_identity = false;
  std::vector<std::pair<std::size_t, std::size_t>> closure_violations;  // (i, j): g_i∘g_j not in G
  std::vector<std::size_t> inverse_violations;                          // i: g_i^{-1} not in G
  std::vector<std::pair<std::size_t, std::size_t>> incompatible;        // compositions that could not be formed
  bool is_group() const noexcept {
    return has_identity && closure_violations.empty() && inverse_violations.empty() && incompatible.empty();
  }
};

AxiomReport verify_group_axioms(const GroupSpec& spec);

/// Membership index that dedups by canonical key, falling back to
/// tolerance comparison for matrices.
class ElementIndex {
 public:
  explicit ElementIndex(double matrix_tol = 1e-9) : tol_(matrix_tol) {}
  std::optional<std::size_t> find(const Transform& g) const;
  /// Inserts when absent; returns (index, inserted).
  std::pair<std::size_t, bool> insert(const Transform& g);
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<Transform>& elements() const noexcept { return elements_; }
  std::vector<Transform> release() && { return std::move(elements_); }

 private:
  double tol_;
  std::vector<Transform> elements_;
  std::unordered_map<std::string, std::size_t> by_key_;
};

}  // namespace randinf::groups
