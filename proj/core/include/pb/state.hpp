#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pb/grid.hpp"

namespace pb {

enum class FieldKind { scalar, vector, phase };

/// Time-reversal parity: +1 even, -1 odd, 0 undefined (phase densities and
/// the canonical EM pair carry no parity assignment).
struct SchemaEntry {
  std::string name;
  FieldKind kind;
  int parity = 0;
};

class StateSchema {
 public:
  StateSchema() = default;
  explicit StateSchema(std::vector<SchemaEntry> entries);

  const std::vector<SchemaEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  int index_of(const std::string& name) const;  // -1 if absent
  const SchemaEntry& at(const std::string& name) const;
  bool has_phase() const;

  bool operator==(const StateSchema& o) const;

 private:
  std::vector<SchemaEntry> entries_;
  std::map<std::string, int> by_name_;
};

/// A sampled field: scalar/vector on a Grid3, or a phase-space density.
/// Vector data is component-major: data[c * npoints + idx].
class Field {
 public:
  Field(FieldKind kind, GridPtr grid);          // scalar or vector
  Field(FieldKind kind, PhaseGridPtr phase);    // phase

  FieldKind kind() const { return kind_; }
  int ncomp() const { return kind_ == FieldKind::vector ? 3 : 1; }
  std::size_t npoints() const { return npoints_; }
  const GridPtr& grid() const { return grid_; }
  const PhaseGridPtr& phase_grid() const { return phase_; }
  double quad_weight() const;

  std::span<double> data() { return {data_.data(), data_.size()}; }
  std::span<const double> data() const { return {data_.data(), data_.size()}; }
  std::span<double> comp(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * npoints_, npoints_};
  }
  std::span<const double> comp(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * npoints_, npoints_};
  }

  void fill(double v);
  void scale(double a);
  void axpy(double a, const Field& other);
  bool finite() const;
  double max_abs() const;

 private:
  FieldKind kind_;
  GridPtr grid_;
  PhaseGridPtr phase_;
  std::size_t npoints_;
  std::vector<double> data_;
};

/// Physical constants; c^2 = 1/(eps0*mu0). Per-species mass and charge
/// number, one or two species.
struct Constants {
  double eps0 = 1.0;
  double mu0 = 1.0;
  double e = 1.0;
  std::vector<double> m{1.0};
  std::vector<double> z{1.0};

  double c2() const { return 1.0 / (eps0 * mu0); }
  void validate() const;
};

/// Named, schema-checked collection of fields. Value semantics; brackets
/// evaluate derivatives at frozen states.
class State {
 public:
  State() = default;
  State(StateSchema schema, GridPtr grid, PhaseGridPtr phase = nullptr);

  const StateSchema& schema() const { return schema_; }
  const GridPtr& grid() const { return grid_; }
  const PhaseGridPtr& phase_grid() const { return phase_; }
  std::size_t nfields() const { return fields_.size(); }

  Field& field(int i) { return fields_[i]; }
  const Field& field(int i) const { return fields_[i]; }
  Field& field(const std::string& name);
  const Field& field(const std::string& name) const;

  void require_compatible(const State& other) const;

  void fill(double v);
  /// this += a * other (identical schemas).
  void axpy(double a, const State& other);
  void scale(double a);
  bool finite() const;

  /// Total number of scalar coefficients across fields.
  std::size_t ncoeffs() const;
  /// Flat coefficient access (field-major, then component-major).
  double coeff(std::size_t i) const;
  void set_coeff(std::size_t i, double v);
  /// Quadrature weight of the field owning flat coefficient i.
  double coeff_weight(std::size_t i) const;
  /// Field index owning flat coefficient i.
  int coeff_field(std::size_t i) const;

 private:
  StateSchema schema_;
  GridPtr grid_;
  PhaseGridPtr phase_;
  std::vector<Field> fields_;
};

/// Quadrature ( L^2 ) pairing; realizes the duality <dF, v>.
double dot(const State& a, const State& b);
double norm(const State& a);

/// Multiply each field by its parity. Involution. Throws on schemas with
/// phase densities or parity-undefined entries.
State time_reversal(const State& x);

}  // namespace pb
