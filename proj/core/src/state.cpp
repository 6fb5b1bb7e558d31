#include "pb/state.hpp"

#include <cmath>

namespace pb {

StateSchema::StateSchema(std::vector<SchemaEntry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto [it, inserted] =
        by_name_.emplace(entries_[i].name, static_cast<int>(i));
    if (!inserted)
      throw SchemaError("duplicate field name in schema: " + entries_[i].name);
  }
}

int StateSchema::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

const SchemaEntry& StateSchema::at(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw SchemaError("no such field: " + name);
  return entries_[i];
}

bool StateSchema::has_phase() const {
  for (const auto& e : entries_)
    if (e.kind == FieldKind::phase) return true;
  return false;
}

bool StateSchema::operator==(const StateSchema& o) const {
  if (entries_.size() != o.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& a = entries_[i];
    const auto& b = o.entries_[i];
    if (a.name != b.name || a.kind != b.kind || a.parity != b.parity)
      return false;
  }
  return true;
}

Field::Field(FieldKind kind, GridPtr grid)
    : kind_(kind), grid_(std::move(grid)) {
  if (kind_ == FieldKind::phase)
    throw SchemaError("phase field requires a PhaseGrid");
  npoints_ = grid_->size();
  data_.assign(npoints_ * ncomp(), 0.0);
}

Field::Field(FieldKind kind, PhaseGridPtr phase)
    : kind_(kind), phase_(std::move(phase)) {
  if (kind_ != FieldKind::phase)
    throw SchemaError("scalar/vector field requires a Grid3");
  npoints_ = phase_->size();
  data_.assign(npoints_, 0.0);
}

double Field::quad_weight() const {
  return kind_ == FieldKind::phase ? phase_->quad_weight()
                                   : grid_->quad_weight();
}

void Field::fill(double v) {
  for (double& x : data_) x = v;
}

void Field::scale(double a) {
  for (double& x : data_) x *= a;
}

void Field::axpy(double a, const Field& other) {
  if (other.data_.size() != data_.size())
    throw SchemaError("Field::axpy: size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * other.data_[i];
}

bool Field::finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

void Constants::validate() const {
  if (!(eps0 > 0) || !(mu0 > 0) || !(e > 0))
    throw ValidationError("constants eps0, mu0, e must be positive");
  if (m.size() < 1 || m.size() > 2 || z.size() != m.size())
    throw ValidationError("species count must be 1 or 2");
  for (double v : m)
    if (!(v > 0)) throw ValidationError("species masses must be positive");
  for (double v : z)
    if (!std::isfinite(v) || v == 0.0)
      throw ValidationError("charge numbers must be finite and nonzero");
}

State::State(StateSchema schema, GridPtr grid, PhaseGridPtr phase)
    : schema_(std::move(schema)), grid_(std::move(grid)),
      phase_(std::move(phase)) {
  fields_.reserve(schema_.size());
  for (const auto& e : schema_.entries()) {
    if (e.kind == FieldKind::phase) {
      if (!phase_) throw SchemaError("schema has phase field but no PhaseGrid");
      fields_.emplace_back(e.kind, phase_);
    } else {
      fields_.emplace_back(e.kind, grid_);
    }
  }
}

Field& State::field(const std::string& name) {
  int i = schema_.index_of(name);
  if (i < 0) throw SchemaError("no such field: " + name);
  return fields_[i];
}

const Field& State::field(const std::string& name) const {
  int i = schema_.index_of(name);
  if (i < 0) throw SchemaError("no such field: " + name);
  return fields_[i];
}

void State::require_compatible(const State& other) const {
  if (!(schema_ == other.schema_))
    throw SchemaError("incompatible state schemas");
  if (!grid_ || !other.grid_ || !(*grid_ == *other.grid_))
    throw SchemaError("incompatible grids");
  if ((phase_ == nullptr) != (other.phase_ == nullptr) ||
      (phase_ && !(*phase_ == *other.phase_)))
    throw SchemaError("incompatible phase grids");
}

void State::fill(double v) {
  for (auto& f : fields_) f.fill(v);
}

void State::axpy(double a, const State& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < fields_.size(); ++i)
    fields_[i].axpy(a, other.fields_[i]);
}

void State::scale(double a) {
  for (auto& f : fields_) f.scale(a);
}

bool State::finite() const {
  for (const auto& f : fields_)
    if (!f.finite()) return false;
  return true;
}

std::size_t State::ncoeffs() const {
  std::size_t n = 0;
  for (const auto& f : fields_) n += f.data().size();
  return n;
}

double State::coeff(std::size_t i) const {
  for (const auto& f : fields_) {
    if (i < f.data().size()) return f.data()[i];
    i -= f.data().size();
  }
  throw SchemaError("coefficient index out of range");
}

void State::set_coeff(std::size_t i, double v) {
  for (auto& f : fields_) {
    if (i < f.data().size()) {
      f.data()[i] = v;
      return;
    }
    i -= f.data().size();
  }
  throw SchemaError("coefficient index out of range");
}

double State::coeff_weight(std::size_t i) const {
  for (const auto& f : fields_) {
    if (i < f.data().size()) return f.quad_weight();
    i -= f.data().size();
  }
  throw SchemaError("coefficient index out of range");
}

int State::coeff_field(std::size_t i) const {
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    if (i < fields_[k].data().size()) return static_cast<int>(k);
    i -= fields_[k].data().size();
  }
  throw SchemaError("coefficient index out of range");
}

double dot(const State& a, const State& b) {
  a.require_compatible(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.nfields(); ++i) {
    const auto& fa = a.field(i);
    const auto& fb = b.field(i);
    double t = 0.0;
    auto da = fa.data();
    auto db = fb.data();
    for (std::size_t k = 0; k < da.size(); ++k) t += da[k] * db[k];
    s += t * fa.quad_weight();
  }
  return s;
}

double norm(const State& a) { return std::sqrt(dot(a, a)); }

State time_reversal(const State& x) {
  State out = x;
  for (std::size_t i = 0; i < x.nfields(); ++i) {
    const auto& e = x.schema().entries()[i];
    if (e.kind == FieldKind::phase)
      throw ValidationError(
          "time_reversal: parity undefined for phase density '" + e.name +
          "'");
    if (e.parity == 0)
      throw ValidationError("time_reversal: parity undefined for '" + e.name +
                            "'");
    if (e.parity < 0) out.field(i).scale(-1.0);
  }
  return out;
}

}  // namespace pb
