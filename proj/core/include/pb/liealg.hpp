#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pb/errors.hpp"

namespace pb {

class Config;

/// Finite-dimensional real Lie algebra given by structure constants,
/// [e_i, e_j] = c^k_{ij} e_k. Antisymmetry and Jacobi are checked at
/// construction; the tolerance is 1e-12 up to dim 20 and scales as
/// n^3 * machine epsilon above that.
class LieAlgebra {
 public:
  LieAlgebra(int dim, std::vector<double> c, std::string name = "");

  int dim() const { return n_; }
  const std::string& name() const { return name_; }
  /// c^k_{ij}
  double c(int k, int i, int j) const {
    return c_[(static_cast<std::size_t>(k) * n_ + i) * n_ + j];
  }
  const std::vector<double>& constants() const { return c_; }

  /// [x, y]^k = c^k_{ij} x_i y_j.
  std::vector<double> bracket(const std::vector<double>& x,
                              const std::vector<double>& y) const;

  /// Worst Jacobi residual of the stored constants.
  double jacobi_residual() const;

  static LieAlgebra abelian(int dim);
  static LieAlgebra so3();
  static LieAlgebra from_config(const Config& cfg, const std::string& section);

 private:
  int n_;
  std::vector<double> c_;  // c[(k*n + i)*n + j]
  std::string name_;
};

/// Matched pair (g, k) with mutual actions
///   (eta |> xi)^a = L^a_{alpha b} eta^alpha xi^b   (k acting on g)
///   (eta <| xi)^alpha = R^alpha_{beta b} eta^beta xi^b   (g acting on k).
/// Both compatibility identities are checked literally at construction;
/// violations report the worst-violating index tuple and which identity
/// failed.
struct MatchedPairSpec {
  LieAlgebra g;
  LieAlgebra k;
  std::vector<double> left;   // L[(a*m + alpha)*n + b], size n*m*n
  std::vector<double> right;  // R[(alpha*m + beta)*n + b], size m*m*n

  MatchedPairSpec(LieAlgebra g_, LieAlgebra k_, std::vector<double> left_,
                  std::vector<double> right_);

  double L(int a, int alpha, int b) const {
    return left[(static_cast<std::size_t>(a) * k.dim() + alpha) * g.dim() + b];
  }
  double R(int alpha, int beta, int b) const {
    return right[(static_cast<std::size_t>(alpha) * k.dim() + beta) * g.dim() +
                 b];
  }

  /// Worst residuals of the two compatibility identities.
  std::pair<double, double> compatibility_residuals() const;

  static MatchedPairSpec from_config(const Config& cfg);
};

/// The (n+m)-dimensional matched-pair Lie algebra: g components first, then
/// k. [(xi1,eta1),(xi2,eta2)] = ([xi1,xi2] + eta1|>xi2 - eta2|>xi1,
/// [eta1,eta2] + eta1<|xi2 - eta2<|xi1).
LieAlgebra matched_pair_algebra(const MatchedPairSpec& spec);

/// Plus Lie-Poisson bracket {F,H}(mu) = <mu, [dF, dH]> = mu_k c^k_{ij}
/// dF_i dH_j.
double lie_poisson_bracket(const LieAlgebra& alg, const std::vector<double>& mu,
                           const std::vector<double>& dF,
                           const std::vector<double>& dH);

/// The unique mudot with dot(dF, mudot) = lie_poisson_bracket(mu, dF, dH)
/// for all dF: mudot_i = mu_k c^k_{ij} dH_j.
std::vector<double> lie_poisson_evolution(const LieAlgebra& alg,
                                          const std::vector<double>& mu,
                                          const std::vector<double>& dH);

/// Constant canonical bivector J = [[0, I], [-I, 0]] on (r, p) pairs.
/// The bracket value follows the convention {F,H} = H_r.F_p - H_p.F_r, in
/// which evolution reads Fdot = {H, F}; apply() returns (dH_p, -dH_r) so
/// that xdot = apply(dH) reproduces rdot = H_p, pdot = -H_r.
class CanonicalBivector {
 public:
  explicit CanonicalBivector(int n_pairs);

  int n_pairs() const { return np_; }
  int dim() const { return 2 * np_; }

  /// (r-block, p-block) -> (d_p, -d_r).
  std::vector<double> apply(const std::vector<double>& d) const;
  /// {F,H} = H_r.F_p - H_p.F_r = dot(dH, apply(dF)).
  double bracket(const std::vector<double>& dF,
                 const std::vector<double>& dH) const;

 private:
  int np_;
};

struct CasimirReport {
  double max_residual = 0.0;
  bool pass = false;
  double tolerance = 1e-10;
};

/// Samples random mu and random dF; residual = |<mu, [dF, gradC(mu)]>|.
/// The gradient is linearization-tested against C before sampling.
CasimirReport casimir_check(
    const LieAlgebra& alg, const std::function<double(const std::vector<double>&)>& C,
    const std::function<std::vector<double>(const std::vector<double>&)>& gradC,
    int samples, std::uint64_t seed = 2026);

}  // namespace pb
