#include "pb/ocrr.hpp"

#include <cmath>

#include "pb/dense.hpp"

namespace pb {

namespace {

struct BlockInfo {
  std::string name;
  std::size_t offset;
  std::size_t size;
  int parity;
};

std::vector<BlockInfo> blocks_of(const State& x) {
  std::vector<BlockInfo> blocks;
  std::size_t off = 0;
  for (std::size_t i = 0; i < x.nfields(); ++i) {
    const auto& e = x.schema().entries()[i];
    if (e.kind == FieldKind::phase)
      throw ValidationError(
          "ocrr: parity undefined for phase-density field '" + e.name + "'");
    if (e.parity == 0)
      throw ValidationError("ocrr: parity undefined for field '" + e.name +
                            "'");
    const std::size_t sz = x.field(static_cast<int>(i)).data().size();
    blocks.push_back({e.name, off, sz, e.parity});
    off += sz;
  }
  return blocks;
}

}  // namespace

double ParityReport::max_residual() const {
  double m = 0.0;
  for (const auto& b : blocks)
    m = std::max({m, b.residual_reversal, b.residual_dressed});
  return m;
}

ParityReport check_combined(
    const Bracket& b, const Constants& c, const State& x,
    const std::function<std::vector<double>(const State&)>& M_sym,
    double tol) {
  const auto blocks = blocks_of(x);
  const std::size_t n = x.ncoeffs();
  const State Ix = time_reversal(x);

  const auto A = dense_bivector(b, c, x);
  const auto AI = dense_bivector(b, c, Ix);

  std::vector<double> K = A, KI = AI;
  if (M_sym) {
    const auto M = M_sym(x);
    const auto MI = M_sym(Ix);
    if (M.size() != n * n || MI.size() != n * n)
      throw ValidationError("check_combined: M has wrong dimensions");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(M[i * n + j] - M[j * n + i]) > tol)
          throw ValidationError("check_combined: M is not symmetric");
    for (std::size_t i = 0; i < n * n; ++i) {
      K[i] += M[i];
      KI[i] += MI[i];
    }
  }

  ParityReport rep;
  rep.tolerance = tol;
  rep.pass = true;
  for (const auto& bi : blocks)
    for (const auto& bj : blocks) {
      ParityBlock blk;
      blk.field_i = bi.name;
      blk.field_j = bj.name;
      blk.parity_product = bi.parity * bj.parity;
      const double pp = blk.parity_product;
      for (std::size_t i = bi.offset; i < bi.offset + bi.size; ++i)
        for (std::size_t j = bj.offset; j < bj.offset + bj.size; ++j) {
          blk.residual_reversal =
              std::max(blk.residual_reversal,
                       std::abs(AI[i * n + j] + pp * A[i * n + j]));
          blk.residual_dressed =
              std::max(blk.residual_dressed,
                       std::abs(K[i * n + j] - pp * KI[j * n + i]));
        }
      blk.pass = blk.residual_reversal < tol && blk.residual_dressed < tol;
      rep.pass = rep.pass && blk.pass;
      rep.blocks.push_back(blk);
    }
  return rep;
}

ParityReport check_bivector_parity(const Bracket& b, const Constants& c,
                                   const State& x, double tol) {
  return check_combined(b, c, x, nullptr, tol);
}

}  // namespace pb
