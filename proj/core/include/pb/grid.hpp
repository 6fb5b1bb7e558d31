#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pb/errors.hpp"

namespace pb {

/// Skew-symmetric spectral differentiation matrix for N equispaced points on
/// a periodic interval of the given length. Exact (to roundoff) on all
/// resolved Fourier modes; skew-symmetry makes discrete integration by parts
/// an identity, which every bracket antisymmetry test below relies on.
std::vector<double> spectral_diff_matrix(int n, double length);

enum class Axis { r1 = 0, r2 = 1, r3 = 2, p1 = 3, p2 = 4, p3 = 5 };

/// Periodic spatial lattice on a box [0,L1)x[0,L2)x[0,L3).
class Grid3 {
 public:
  Grid3(std::array<int, 3> dims, std::array<double, 3> lengths);

  const std::array<int, 3>& dims() const { return dims_; }
  const std::array<double, 3>& lengths() const { return lengths_; }
  double spacing(int axis) const { return lengths_[axis] / dims_[axis]; }
  std::size_t size() const { return npts_; }
  /// Rectangle-rule volume element, prod_i L_i/N_i.
  double quad_weight() const { return qw_; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
  }
  /// Coordinate of grid point index along an axis.
  double coord(int axis, int i) const { return i * spacing(axis); }

  /// d/dr_axis of a scalar sample array, spectral collocation.
  void derivative(std::span<const double> in, std::span<double> out,
                  int axis) const;

  double integrate(std::span<const double> f) const;

  bool operator==(const Grid3& o) const {
    return dims_ == o.dims_ && lengths_ == o.lengths_;
  }

  const std::vector<double>& diff_matrix(int axis) const { return diff_[axis]; }

 private:
  std::array<int, 3> dims_;
  std::array<double, 3> lengths_;
  std::size_t npts_;
  double qw_;
  std::array<std::vector<double>, 3> diff_;
};

/// Spatial x momentum lattice. Momentum axes cover [-pmax, pmax) and are
/// treated periodically; physical validity requires the distribution to be
/// negligible at the momentum boundary (reported, not enforced).
class PhaseGrid {
 public:
  PhaseGrid(Grid3 spatial, std::array<int, 3> pdims,
            std::array<double, 3> pmax);

  const Grid3& spatial() const { return spatial_; }
  const std::array<int, 3>& pdims() const { return pdims_; }
  const std::array<double, 3>& pmax() const { return pmax_; }
  std::size_t momentum_size() const { return npmom_; }
  std::size_t size() const { return spatial_.size() * npmom_; }
  double pspacing(int axis) const { return 2.0 * pmax_[axis] / pdims_[axis]; }
  /// Momentum coordinate of index i along momentum axis.
  double pcoord(int axis, int i) const {
    return -pmax_[axis] + i * pspacing(axis);
  }
  /// Full phase-space volume element.
  double quad_weight() const { return spatial_.quad_weight() * pqw_; }
  double momentum_quad_weight() const { return pqw_; }

  std::size_t index(std::size_t spatial_idx, std::size_t mom_idx) const {
    return spatial_idx * npmom_ + mom_idx;
  }

  /// Derivative along any of the six axes (Axis::r1..p3).
  void derivative(std::span<const double> in, std::span<double> out,
                  Axis axis) const;

  double integrate(std::span<const double> f) const;

  /// Momentum integral: reduces a phase sample array to a spatial one,
  /// out(r) = sum_p w_p f(r,p).
  void momentum_integral(std::span<const double> f,
                         std::span<double> out) const;

  /// max |f| over the outermost momentum shell (any momentum index at the
  /// box edge) -- the truncation diagnostic.
  double boundary_mass(std::span<const double> f) const;

  bool operator==(const PhaseGrid& o) const {
    return spatial_ == o.spatial_ && pdims_ == o.pdims_ && pmax_ == o.pmax_;
  }

 private:
  Grid3 spatial_;
  std::array<int, 3> pdims_;
  std::array<double, 3> pmax_;
  std::size_t npmom_;
  double pqw_;
  std::array<std::vector<double>, 3> pdiff_;
};

using GridPtr = std::shared_ptr<const Grid3>;
using PhaseGridPtr = std::shared_ptr<const PhaseGrid>;

namespace detail {
/// Apply a dense n x n matrix along one axis of a row-major
/// multi-dimensional sample array.
void apply_along_axis(std::span<const double> in, std::span<double> out,
                      std::span<const std::size_t> shape, int axis,
                      std::span<const double> mat);
}  // namespace detail

}  // namespace pb
