#include "pb/dense.hpp"

#include <cmath>

namespace pb {

std::vector<double> dense_bivector(const Bracket& b, const Constants& c,
                                   const State& x) {
  const std::size_t n = x.ncoeffs();
  if (n > 4096)
    throw ValidationError("dense_bivector: state too large (" +
                          std::to_string(n) + " coefficients)");
  std::vector<double> A(n * n, 0.0);
  State e = b.make_state();
  State v = b.make_state();
  for (std::size_t j = 0; j < n; ++j) {
    e.fill(0.0);
    e.set_coeff(j, 1.0);
    b.apply_into(c, x, e, v);
    for (std::size_t i = 0; i < n; ++i) A[i * n + j] = v.coeff(i);
  }
  return A;
}

double dense_antisymmetry_residual(const Bracket& b, const Constants& c,
                                   const State& x) {
  const auto A = dense_bivector(b, c, x);
  const std::size_t n = x.ncoeffs();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = x.coeff_weight(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double wj = x.coeff_weight(j);
      worst = std::max(worst, std::abs(wi * A[i * n + j] + wj * A[j * n + i]));
    }
  }
  return worst;
}

namespace {

/// d/dx of S(x) = dot(b_cov, apply(x, c_cov)), returned as a derivative
/// density (divided by quadrature weights).
State bracket_gradient(const Bracket& br, const Constants& c, const State& x,
                       const State& b_cov, const State& c_cov, double eps) {
  State g = br.make_state();
  State xp = x;
  State v = br.make_state();
  const std::size_t n = x.ncoeffs();
  for (std::size_t i = 0; i < n; ++i) {
    const double base = x.coeff(i);
    xp.set_coeff(i, base + eps);
    br.apply_into(c, xp, c_cov, v);
    const double sp = dot(b_cov, v);
    xp.set_coeff(i, base - eps);
    br.apply_into(c, xp, c_cov, v);
    const double sm = dot(b_cov, v);
    xp.set_coeff(i, base);
    g.set_coeff(i, (sp - sm) / (2.0 * eps * x.coeff_weight(i)));
  }
  return g;
}

}  // namespace

double jacobi_cyclic_residual(const Bracket& b, const Constants& c,
                              const State& x, const State& a, const State& bb,
                              const State& cc, double fd_eps) {
  auto nested = [&](const State& dF, const State& dG, const State& dH) {
    // {F, {G, H}}(x) with constant covectors
    const State grad = bracket_gradient(b, c, x, dG, dH, fd_eps);
    return dot(dF, b.apply(c, x, grad));
  };
  return nested(a, bb, cc) + nested(bb, cc, a) + nested(cc, a, bb);
}

}  // namespace pb
