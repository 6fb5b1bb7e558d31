#include "pb/liealg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pb/config.hpp"

namespace pb {

namespace {

double tensor_tolerance(int n) {
  if (n <= 20) return 1e-12;
  const double eps = std::numeric_limits<double>::epsilon();
  return static_cast<double>(n) * n * n * eps;
}

}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<double> constants,
                       std::string name)
    : n_(dim), c_(std::move(constants)), name_(std::move(name)) {
  if (n_ < 1) throw ValidationError("LieAlgebra: dim must be >= 1");
  const std::size_t want = static_cast<std::size_t>(n_) * n_ * n_;
  if (c_.size() != want)
    throw ValidationError("LieAlgebra: expected " + std::to_string(want) +
                          " structure constants, got " +
                          std::to_string(c_.size()));
  const double tol = tensor_tolerance(n_);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (std::abs(c(k, i, j) + c(k, j, i)) > tol) {
          std::ostringstream os;
          os << "LieAlgebra: antisymmetry violated at c^" << k << "_{" << i
             << j << "}";
          throw ValidationError(os.str());
        }
  const double jac = jacobi_residual();
  if (jac > tol)
    throw ValidationError("LieAlgebra: Jacobi identity violated, residual " +
                          std::to_string(jac));
}

std::vector<double> LieAlgebra::bracket(const std::vector<double>& x,
                                        const std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
    throw ValidationError("LieAlgebra::bracket: dimension mismatch");
  std::vector<double> out(n_, 0.0);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[k] += c(k, i, j) * x[i] * y[j];
  return out;
}

double LieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          double s = 0.0;
          for (int m = 0; m < n_; ++m)
            s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) +
                 c(m, k, i) * c(l, m, j);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

LieAlgebra LieAlgebra::abelian(int dim) {
  return LieAlgebra(dim,
                    std::vector<double>(
                        static_cast<std::size_t>(dim) * dim * dim, 0.0),
                    "abelian");
}

LieAlgebra LieAlgebra::so3() {
  // [e_i, e_j] = eps_{ijk} e_k.
  std::vector<double> c(27, 0.0);
  auto set = [&](int k, int i, int j, double v) {
    c[(static_cast<std::size_t>(k) * 3 + i) * 3 + j] = v;
  };
  set(2, 0, 1, 1.0);
  set(2, 1, 0, -1.0);
  set(0, 1, 2, 1.0);
  set(0, 2, 1, -1.0);
  set(1, 2, 0, 1.0);
  set(1, 0, 2, -1.0);
  return LieAlgebra(3, std::move(c), "so3");
}

LieAlgebra LieAlgebra::from_config(const Config& cfg,
                                   const std::string& section) {
  const int n = cfg.get_int(section, "dim");
  if (n < 1) throw ValidationError("config: dim must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (const std::string& line : cfg.get_all(section, "c")) {
    auto tok = split_tokens(line);
    if (tok.size() != 4)
      throw SchemaError("config: c entries need 'k i j value', got: " + line);
    const int k = std::stoi(tok[0]), i = std::stoi(tok[1]),
              j = std::stoi(tok[2]);
    if (k < 0 || k >= n || i < 0 || i >= n || j < 0 || j >= n)
      throw SchemaError("config: c index out of range in: " + line);
    const double v = std::stod(tok[3]);
    c[(static_cast<std::size_t>(k) * n + i) * n + j] = v;
    // Antisymmetric partner filled automatically unless listed explicitly.
    c[(static_cast<std::size_t>(k) * n + j) * n + i] = -v;
  }
  return LieAlgebra(n, std::move(c), section);
}

MatchedPairSpec::MatchedPairSpec(LieAlgebra g_, LieAlgebra k_,
                                 std::vector<double> left_,
                                 std::vector<double> right_)
    : g(std::move(g_)), k(std::move(k_)), left(std::move(left_)),
      right(std::move(right_)) {
  const std::size_t n = g.dim(), m = k.dim();
  if (left.size() != n * m * n)
    throw ValidationError("MatchedPairSpec: left action tensor has wrong size");
  if (right.size() != m * m * n)
    throw ValidationError(
        "MatchedPairSpec: right action tensor has wrong size");
  const double tol = tensor_tolerance(static_cast<int>(n + m));

  // First identity: eta |> [xi1, xi2] expansion; free indices (a, alpha, b, c).
  for (int a = 0; a < g.dim(); ++a)
    for (int al = 0; al < k.dim(); ++al)
      for (int b = 0; b < g.dim(); ++b)
        for (int cc = 0; cc < g.dim(); ++cc) {
          double s = 0.0;
          for (int mm = 0; mm < g.dim(); ++mm)
            s += L(a, al, mm) * g.c(mm, b, cc) - g.c(a, mm, cc) * L(mm, al, b) -
                 g.c(a, b, mm) * L(mm, al, cc);
          for (int be = 0; be < k.dim(); ++be)
            s += -L(a, be, cc) * R(be, al, b) + L(a, be, b) * R(be, al, cc);
          if (std::abs(s) > tol) {
            std::ostringstream os;
            os << "matched pair: first compatibility identity violated at "
               << "(a=" << a << ", alpha=" << al << ", b=" << b << ", c=" << cc
               << "), residual " << s;
            throw ValidationError(os.str());
          }
        }

  // Second identity: [eta1, eta2] <| xi expansion; free (alpha, beta, gamma, b).
  for (int al = 0; al < k.dim(); ++al)
    for (int be = 0; be < k.dim(); ++be)
      for (int ga = 0; ga < k.dim(); ++ga)
        for (int b = 0; b < g.dim(); ++b) {
          double s = 0.0;
          for (int mu = 0; mu < k.dim(); ++mu)
            s += R(al, mu, b) * k.c(mu, be, ga) - k.c(al, be, mu) * R(mu, ga, b) -
                 k.c(al, mu, ga) * R(mu, be, b);
          for (int mm = 0; mm < g.dim(); ++mm)
            s += -R(al, be, mm) * L(mm, ga, b) + R(al, ga, mm) * L(mm, be, b);
          if (std::abs(s) > tol) {
            std::ostringstream os;
            os << "matched pair: second compatibility identity violated at "
               << "(alpha=" << al << ", beta=" << be << ", gamma=" << ga
               << ", b=" << b << "), residual " << s;
            throw ValidationError(os.str());
          }
        }
}

std::pair<double, double> MatchedPairSpec::compatibility_residuals() const {
  double r1 = 0.0, r2 = 0.0;
  for (int a = 0; a < g.dim(); ++a)
    for (int al = 0; al < k.dim(); ++al)
      for (int b = 0; b < g.dim(); ++b)
        for (int cc = 0; cc < g.dim(); ++cc) {
          double s = 0.0;
          for (int mm = 0; mm < g.dim(); ++mm)
            s += L(a, al, mm) * g.c(mm, b, cc) - g.c(a, mm, cc) * L(mm, al, b) -
                 g.c(a, b, mm) * L(mm, al, cc);
          for (int be = 0; be < k.dim(); ++be)
            s += -L(a, be, cc) * R(be, al, b) + L(a, be, b) * R(be, al, cc);
          r1 = std::max(r1, std::abs(s));
        }
  for (int al = 0; al < k.dim(); ++al)
    for (int be = 0; be < k.dim(); ++be)
      for (int ga = 0; ga < k.dim(); ++ga)
        for (int b = 0; b < g.dim(); ++b) {
          double s = 0.0;
          for (int mu = 0; mu < k.dim(); ++mu)
            s += R(al, mu, b) * k.c(mu, be, ga) - k.c(al, be, mu) * R(mu, ga, b) -
                 k.c(al, mu, ga) * R(mu, be, b);
          for (int mm = 0; mm < g.dim(); ++mm)
            s += -R(al, be, mm) * L(mm, ga, b) + R(al, ga, mm) * L(mm, be, b);
          r2 = std::max(r2, std::abs(s));
        }
  return {r1, r2};
}

MatchedPairSpec MatchedPairSpec::from_config(const Config& cfg) {
  LieAlgebra g = LieAlgebra::from_config(cfg, "g");
  LieAlgebra k = LieAlgebra::from_config(cfg, "k");
  const std::size_t n = g.dim(), m = k.dim();
  std::vector<double> left(n * m * n, 0.0), right(m * m * n, 0.0);
  for (const std::string& line : cfg.get_all("actions", "left_action")) {
    auto tok = split_tokens(line);
    if (tok.size() != 4)
      throw SchemaError("config: left_action needs 'a alpha b value': " +
                        line);
    const std::size_t a = std::stoul(tok[0]), al = std::stoul(tok[1]),
                      b = std::stoul(tok[2]);
    if (a >= n || al >= m || b >= n)
      throw SchemaError("config: left_action index out of range: " + line);
    left[(a * m + al) * n + b] = std::stod(tok[3]);
  }
  for (const std::string& line : cfg.get_all("actions", "right_action")) {
    auto tok = split_tokens(line);
    if (tok.size() != 4)
      throw SchemaError("config: right_action needs 'alpha beta b value': " +
                        line);
    const std::size_t al = std::stoul(tok[0]), be = std::stoul(tok[1]),
                      b = std::stoul(tok[2]);
    if (al >= m || be >= m || b >= n)
      throw SchemaError("config: right_action index out of range: " + line);
    right[(al * m + be) * n + b] = std::stod(tok[3]);
  }
  return MatchedPairSpec(std::move(g), std::move(k), std::move(left),
                         std::move(right));
}

LieAlgebra matched_pair_algebra(const MatchedPairSpec& spec) {
  const int n = spec.g.dim(), m = spec.k.dim(), N = n + m;
  std::vector<double> c(static_cast<std::size_t>(N) * N * N, 0.0);
  auto at = [&](int K, int I, int J) -> double& {
    return c[(static_cast<std::size_t>(K) * N + I) * N + J];
  };
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) at(k, i, j) = spec.g.c(k, i, j);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) at(n + k, n + i, n + j) = spec.k.c(k, i, j);
  // Mixed blocks: [e_{n+alpha}, e_b] = L^a_{alpha b} e_a + R^beta_{alpha b}
  // e_{n+beta}.
  for (int al = 0; al < m; ++al)
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        at(a, n + al, b) = spec.L(a, al, b);
        at(a, b, n + al) = -spec.L(a, al, b);
      }
      for (int be = 0; be < m; ++be) {
        at(n + be, n + al, b) = spec.R(be, al, b);
        at(n + be, b, n + al) = -spec.R(be, al, b);
      }
    }
  std::string name = spec.g.name() + "><" + spec.k.name();
  return LieAlgebra(N, std::move(c), std::move(name));
}

double lie_poisson_bracket(const LieAlgebra& alg, const std::vector<double>& mu,
                           const std::vector<double>& dF,
                           const std::vector<double>& dH) {
  const int n = alg.dim();
  if (static_cast<int>(mu.size()) != n || static_cast<int>(dF.size()) != n ||
      static_cast<int>(dH.size()) != n)
    throw ValidationError("lie_poisson_bracket: dimension mismatch");
  auto br = alg.bracket(dF, dH);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += mu[k] * br[k];
  return s;
}

std::vector<double> lie_poisson_evolution(const LieAlgebra& alg,
                                          const std::vector<double>& mu,
                                          const std::vector<double>& dH) {
  const int n = alg.dim();
  if (static_cast<int>(mu.size()) != n || static_cast<int>(dH.size()) != n)
    throw ValidationError("lie_poisson_evolution: dimension mismatch");
  // mudot_i = mu_k c^k_{ij} dH_j, the unique vector with dot(dF, mudot)
  // = {F, H} for every dF.
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out[i] += mu[k] * alg.c(k, i, j) * dH[j];
  return out;
}

CanonicalBivector::CanonicalBivector(int n_pairs) : np_(n_pairs) {
  if (np_ < 1) throw ValidationError("CanonicalBivector: n_pairs must be >= 1");
}

std::vector<double> CanonicalBivector::apply(
    const std::vector<double>& d) const {
  if (static_cast<int>(d.size()) != dim())
    throw ValidationError("CanonicalBivector::apply: dimension mismatch");
  std::vector<double> out(d.size());
  for (int i = 0; i < np_; ++i) {
    out[i] = d[np_ + i];
    out[np_ + i] = -d[i];
  }
  return out;
}

double CanonicalBivector::bracket(const std::vector<double>& dF,
                                  const std::vector<double>& dH) const {
  // {F,H} = H_r.F_p - H_p.F_r; Fdot = {H,F} recovers rdot = H_p.
  double s = 0.0;
  for (int i = 0; i < np_; ++i)
    s += dH[i] * dF[np_ + i] - dH[np_ + i] * dF[i];
  return s;
}

CasimirReport casimir_check(
    const LieAlgebra& alg,
    const std::function<double(const std::vector<double>&)>& C,
    const std::function<std::vector<double>(const std::vector<double>&)>& gradC,
    int samples, std::uint64_t seed) {
  const int n = alg.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CasimirReport rep;

  // Linearization test of the supplied gradient.
  {
    std::vector<double> mu(n), dir(n);
    for (auto& v : mu) v = u(rng);
    for (auto& v : dir) v = u(rng);
    const double h = 1e-6;
    std::vector<double> mup = mu, mum = mu;
    for (int i = 0; i < n; ++i) {
      mup[i] += h * dir[i];
      mum[i] -= h * dir[i];
    }
    const double fd = (C(mup) - C(mum)) / (2.0 * h);
    auto g = gradC(mu);
    double an = 0.0;
    for (int i = 0; i < n; ++i) an += g[i] * dir[i];
    if (std::abs(fd - an) > 1e-4 * (1.0 + std::abs(fd)))
      throw ValidationError(
          "casimir_check: gradient inconsistent with functional");
  }

  for (int s = 0; s < samples; ++s) {
    std::vector<double> mu(n), dF(n);
    for (auto& v : mu) v = u(rng);
    for (auto& v : dF) v = u(rng);
    const double r =
        std::abs(lie_poisson_bracket(alg, mu, dF, gradC(mu)));
    rep.max_residual = std::max(rep.max_residual, r);
  }
  rep.pass = rep.max_residual < rep.tolerance;
  return rep;
}

}  // namespace pb
