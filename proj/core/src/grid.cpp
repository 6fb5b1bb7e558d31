#include "pb/grid.hpp"

#include <cmath>
#include <numbers>

namespace pb {

std::vector<double> spectral_diff_matrix(int n, double length) {
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  if (n <= 1) return d;
  const double scale = 2.0 * std::numbers::pi / length;
  const bool even = (n % 2 == 0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int m = j - k;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const double arg = std::numbers::pi * m / n;
      double v;
      if (even) {
        v = 0.5 * sign / std::tan(arg);
      } else {
        v = 0.5 * sign / std::sin(arg);
      }
      d[static_cast<std::size_t>(j) * n + k] = scale * v;
    }
  }
  // Enforce exact skew-symmetry at the bit level.
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < j; ++k) {
      const std::size_t a = static_cast<std::size_t>(j) * n + k;
      const std::size_t b = static_cast<std::size_t>(k) * n + j;
      d[b] = -d[a];
    }
  return d;
}

namespace detail {

void apply_along_axis(std::span<const double> in, std::span<double> out,
                      std::span<const std::size_t> shape, int axis,
                      std::span<const double> mat) {
  const std::size_t n = shape[axis];
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * n * inner;
    for (std::size_t j = 0; j < n; ++j) {
      const double* row = mat.data() + j * n;
      double* dst = out.data() + base + j * inner;
      for (std::size_t i = 0; i < inner; ++i) dst[i] = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double c = row[k];
        if (c == 0.0) continue;
        const double* src = in.data() + base + k * inner;
        for (std::size_t i = 0; i < inner; ++i) dst[i] += c * src[i];
      }
    }
  }
}

}  // namespace detail

Grid3::Grid3(std::array<int, 3> dims, std::array<double, 3> lengths)
    : dims_(dims), lengths_(lengths) {
  npts_ = 1;
  qw_ = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (dims_[a] < 1) throw ValidationError("Grid3: dims must be >= 1");
    if (!(lengths_[a] > 0.0))
      throw ValidationError("Grid3: lengths must be > 0");
    npts_ *= dims_[a];
    qw_ *= lengths_[a] / dims_[a];
    diff_[a] = spectral_diff_matrix(dims_[a], lengths_[a]);
  }
}

void Grid3::derivative(std::span<const double> in, std::span<double> out,
                       int axis) const {
  if (in.size() != npts_ || out.size() != npts_)
    throw SchemaError("Grid3::derivative: sample size mismatch");
  const std::array<std::size_t, 3> shape{
      static_cast<std::size_t>(dims_[0]), static_cast<std::size_t>(dims_[1]),
      static_cast<std::size_t>(dims_[2])};
  detail::apply_along_axis(in, out, shape, axis, diff_[axis]);
}

double Grid3::integrate(std::span<const double> f) const {
  double s = 0.0;
  for (double v : f) s += v;
  return s * qw_;
}

PhaseGrid::PhaseGrid(Grid3 spatial, std::array<int, 3> pdims,
                     std::array<double, 3> pmax)
    : spatial_(std::move(spatial)), pdims_(pdims), pmax_(pmax) {
  npmom_ = 1;
  pqw_ = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (pdims_[a] < 1) throw ValidationError("PhaseGrid: pdims must be >= 1");
    if (!(pmax_[a] > 0.0)) throw ValidationError("PhaseGrid: pmax must be > 0");
    npmom_ *= pdims_[a];
    pqw_ *= 2.0 * pmax_[a] / pdims_[a];
    pdiff_[a] = spectral_diff_matrix(pdims_[a], 2.0 * pmax_[a]);
  }
}

void PhaseGrid::derivative(std::span<const double> in, std::span<double> out,
                           Axis axis) const {
  if (in.size() != size() || out.size() != size())
    throw SchemaError("PhaseGrid::derivative: sample size mismatch");
  const auto& sd = spatial_.dims();
  const std::array<std::size_t, 6> shape{
      static_cast<std::size_t>(sd[0]),     static_cast<std::size_t>(sd[1]),
      static_cast<std::size_t>(sd[2]),     static_cast<std::size_t>(pdims_[0]),
      static_cast<std::size_t>(pdims_[1]), static_cast<std::size_t>(pdims_[2])};
  const int a = static_cast<int>(axis);
  const auto& mat = a < 3 ? spatial_.diff_matrix(a) : pdiff_[a - 3];
  detail::apply_along_axis(in, out, shape, a, mat);
}

double PhaseGrid::integrate(std::span<const double> f) const {
  double s = 0.0;
  for (double v : f) s += v;
  return s * quad_weight();
}

void PhaseGrid::momentum_integral(std::span<const double> f,
                                  std::span<double> out) const {
  if (f.size() != size() || out.size() != spatial_.size())
    throw SchemaError("PhaseGrid::momentum_integral: size mismatch");
  for (std::size_t r = 0; r < spatial_.size(); ++r) {
    double s = 0.0;
    const double* src = f.data() + r * npmom_;
    for (std::size_t q = 0; q < npmom_; ++q) s += src[q];
    out[r] = s * pqw_;
  }
}

double PhaseGrid::boundary_mass(std::span<const double> f) const {
  double m = 0.0;
  for (std::size_t r = 0; r < spatial_.size(); ++r) {
    for (int q0 = 0; q0 < pdims_[0]; ++q0)
      for (int q1 = 0; q1 < pdims_[1]; ++q1)
        for (int q2 = 0; q2 < pdims_[2]; ++q2) {
          const bool edge = (pdims_[0] > 1 && q0 == 0) ||
                            (pdims_[1] > 1 && q1 == 0) ||
                            (pdims_[2] > 1 && q2 == 0);
          if (!edge) continue;
          const std::size_t q =
              (static_cast<std::size_t>(q0) * pdims_[1] + q1) * pdims_[2] + q2;
          m = std::max(m, std::abs(f[index(r, q)]));
        }
  }
  return m;
}

}  // namespace pb
