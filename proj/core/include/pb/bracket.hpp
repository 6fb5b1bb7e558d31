#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pb/state.hpp"

namespace pb {

/// Named residual monitored along the flow (Gauss laws, div B). Returns one
/// sample per spatial grid point.
struct Constraint {
  std::string name;
  std::function<std::vector<double>(const Constants&, const State&)> residual;
};

/// A Poisson bivector: apply(c, x, dH) = L(x).dH, a tangent at x. The
/// bracket value {F,H}(x) is always dot(dF, apply(x, dH)); antisymmetry is a
/// property of the implementation, tested rather than built in.
class Bracket {
 public:
  using ApplyFn =
      std::function<void(const Constants&, const State&, const State&, State&)>;

  Bracket(std::string name, StateSchema schema, GridPtr grid,
          PhaseGridPtr phase, ApplyFn apply, std::vector<Constraint> constraints = {},
          std::vector<std::string> positive_fields = {});

  const std::string& name() const { return name_; }
  const StateSchema& schema() const { return schema_; }
  const GridPtr& grid() const { return grid_; }
  const PhaseGridPtr& phase_grid() const { return phase_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<std::string>& positive_fields() const {
    return positive_fields_;
  }

  /// Zero state with this bracket's schema and grids.
  State make_state() const;

  State apply(const Constants& c, const State& x, const State& dH) const;
  void apply_into(const Constants& c, const State& x, const State& dH,
                  State& out) const;

  /// {F,H}(x) = dot(dF, L(x).dH).
  double value(const Constants& c, const State& x, const State& dF,
               const State& dH) const;

 private:
  std::string name_;
  StateSchema schema_;
  GridPtr grid_;
  PhaseGridPtr phase_;
  ApplyFn apply_;
  std::vector<Constraint> constraints_;
  std::vector<std::string> positive_fields_;
};

/// Catalog lookup. Exact names: em_canonical, em, vlasov, hydro,
/// hydro_binary, classical_binary, ked, ked_binary, emhd, emhd_total, bemhd,
/// cbemhd, mhd, ehd. Phase grid required only for the kinetic brackets.
Bracket make_bracket(const std::string& name, GridPtr grid,
                     PhaseGridPtr phase = nullptr);
std::vector<std::string> bracket_names();

/// Blockwise product on disjoint variable names over shared grids.
Bracket direct_product(const Bracket& a, const Bracket& b);

/// Same bivector with fields renamed (old name -> new name; unlisted names
/// kept).
Bracket renamed(const Bracket& b, const std::map<std::string, std::string>& mapping,
                const std::string& new_name);

/// Extra variables dragged along by the momentum variable of a base bracket.
struct Attachment {
  enum class Kind {
    /// Scalar density a: adot = -div(a dH_m), mdot_i -= a d_i(dH_a).
    advected_density,
    /// Canonically paired one-form/vector-density (A, Y), the momentum
    /// acting by minus the Lie derivative; kappa scales the canonical block
    /// ({F,H} += (1/kappa) int (F_A.H_Y - H_A.F_Y)).
    cotangent_pair,
  };
  Kind kind;
  std::string name;         // density name, or the one-form A
  std::string dual = "";    // Y for cotangent_pair
  double kappa = 1.0;
  int parity = 1;           // parity of the attached field(s); 0 for (A, Y)
};

/// Semidirect extension of a bracket containing a vector momentum variable.
/// The momentum flow advects each attachment and receives the dual force
/// terms; antisymmetry is inherited from the construction.
Bracket semidirect_vector(const Bracket& base, const std::string& momentum,
                          const std::vector<Attachment>& attachments,
                          const std::string& new_name);

/// The bare momentum (vector-field dual) bracket on one vector variable:
/// mdot_i = -d_j(m_i dH_mj) - m_j d_i(dH_mj). Building block for the
/// semidirect constructions; hydro == semidirect_vector(momentum("u"), u,
/// {rho, s}).
Bracket momentum_bracket(GridPtr grid, const std::string& var = "m",
                         int parity = -1);

}  // namespace pb
