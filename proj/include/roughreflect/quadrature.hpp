#pragma once

#include <cstddef>
#include <vector>

namespace roughreflect {

/// Product-integration weights for
///   int_0^{L} phi(v) v^p dv   (unit spacing, phi linear on each [l, l+1]).
/// Cell l contributes left(l)*phi_l + right(l)*phi_{l+1}.  For p <= -1 the
/// left weight of cell 0 diverges; callers must have phi_0 = 0 and it is
/// stored as 0.  Physical spacing h multiplies everything by h^{p+1}.
class PowerWeights {
 public:
  PowerWeights() = default;
  PowerWeights(double p, std::size_t cells);

  double p() const noexcept { return p_; }
  std::size_t cells() const noexcept { return a_.size(); }
  double left(std::size_t l) const noexcept { return a_[l]; }
  double right(std::size_t l) const noexcept { return b_[l]; }

  /// Weight of node j in an integral over L cells (0 <= j <= L, L >= 1).
  double node(std::size_t j, std::size_t L) const noexcept {
    if (j == 0) return a_[0];
    if (j < L) return interior_[j];
    return b_[L - 1];
  }
  /// left(j) + right(j-1), the weight of an interior node j >= 1.
  double interior(std::size_t j) const noexcept { return interior_[j]; }
  /// Sum of node(j, L) over 1 <= j <= L.
  double total(std::size_t L) const noexcept { return prefix_[L - 1] + b_[L - 1]; }

 private:
  double p_ = 0.0;
  std::vector<double> a_, b_, interior_, prefix_;
};

}  // namespace roughreflect
