#pragma once

// Data-generating processes for simulations: each draws i.i.d. coordinates.

#include <span>
#include <string>
#include <vector>

#include "randinf/rng.hpp"

namespace randinf::mc {

enum class DgpKind { Normal, Normal34, Uniform01, UniformPm1, ExpCentered, Laplace, LognormalCentered };

class Dgp {
 public:
  explicit Dgp(DgpKind kind) : kind_(kind) {}
  /// normal, normal_3_4, uniform01, uniform_pm1, exp_centered, laplace,
  /// lognormal_centered. UnknownDgp otherwise.
  static Dgp from_name(const std::string& name);
  static std::vector<std::string> panel();

  DgpKind kind() const noexcept { return kind_; }
  std::string name() const;
  /// Symmetric about zero (sign changes leave it invariant).
  bool symmetric() const noexcept;
  bool gaussian() const noexcept { return kind_ == DgpKind::Normal || kind_ == DgpKind::Normal34; }

  double draw(rng::Engine& engine) const;
  void fill(std::span<double> out, rng::Engine& engine) const;

 private:
  DgpKind kind_;
};

}  // namespace randinf::mc
