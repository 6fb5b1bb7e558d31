#include "pb/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pb/errors.hpp"

namespace pb {
namespace {

constexpr const char* kMagic = "PBSTATE 1";

const char* kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::scalar: return "scalar";
    case FieldKind::vector: return "vector";
    case FieldKind::phase: return "phase";
  }
  return "?";
}

FieldKind kind_from(const std::string& s) {
  if (s == "scalar") return FieldKind::scalar;
  if (s == "vector") return FieldKind::vector;
  if (s == "phase") return FieldKind::phase;
  throw SchemaError("snapshot: unknown field kind '" + s + "'");
}

// Arrays are stored little-endian; byte-swap on big-endian hosts.
void write_f64(std::ostream& os, std::span<const double> v) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
  } else {
    for (double x : v) {
      std::uint64_t u;
      std::memcpy(&u, &x, 8);
      char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(u >> (8 * i));
      os.write(b, 8);
    }
  }
}

void read_f64(std::istream& is, std::span<double> v) {
  if constexpr (std::endian::native == std::endian::little) {
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
  } else {
    for (double& x : v) {
      char b[8];
      is.read(b, 8);
      std::uint64_t u = 0;
      for (int i = 0; i < 8; ++i)
        u |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i]))
             << (8 * i);
      std::memcpy(&x, &u, 8);
    }
  }
  if (!is) throw ValidationError("snapshot: truncated array data");
}

}  // namespace

void save_state(const std::string& path, const State& x) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("snapshot: cannot open '" + path + "'");
  std::ostringstream hdr;
  hdr.precision(17);
  hdr << kMagic << "\n";
  const auto& g = *x.grid();
  hdr << "grid " << g.dims()[0] << " " << g.dims()[1] << " " << g.dims()[2]
      << " " << g.lengths()[0] << " " << g.lengths()[1] << " "
      << g.lengths()[2] << "\n";
  if (x.phase_grid()) {
    const auto& pg = *x.phase_grid();
    hdr << "phase " << pg.pdims()[0] << " " << pg.pdims()[1] << " "
        << pg.pdims()[2] << " " << pg.pmax()[0] << " " << pg.pmax()[1] << " "
        << pg.pmax()[2] << "\n";
  }
  for (const auto& e : x.schema().entries())
    hdr << "field " << e.name << " " << kind_name(e.kind) << " " << e.parity
        << "\n";
  hdr << "end\n";
  os << hdr.str();
  for (std::size_t i = 0; i < x.nfields(); ++i)
    write_f64(os, x.field(static_cast<int>(i)).data());
  if (!os) throw ValidationError("snapshot: write failed for '" + path + "'");
}

State load_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("snapshot: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line != kMagic)
    throw ValidationError("snapshot: bad magic in '" + path + "'");

  GridPtr grid;
  PhaseGridPtr phase;
  std::vector<SchemaEntry> entries;
  while (std::getline(is, line)) {
    if (line == "end") break;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "grid") {
      std::array<int, 3> d{};
      std::array<double, 3> L{};
      ls >> d[0] >> d[1] >> d[2] >> L[0] >> L[1] >> L[2];
      if (!ls) throw ValidationError("snapshot: malformed grid line");
      grid = std::make_shared<Grid3>(d, L);
    } else if (tag == "phase") {
      std::array<int, 3> d{};
      std::array<double, 3> pm{};
      ls >> d[0] >> d[1] >> d[2] >> pm[0] >> pm[1] >> pm[2];
      if (!ls || !grid)
        throw ValidationError("snapshot: malformed phase line");
      phase = std::make_shared<PhaseGrid>(*grid, d, pm);
    } else if (tag == "field") {
      SchemaEntry e;
      std::string kind;
      ls >> e.name >> kind >> e.parity;
      if (!ls) throw ValidationError("snapshot: malformed field line");
      e.kind = kind_from(kind);
      entries.push_back(e);
    } else {
      throw ValidationError("snapshot: unknown header line '" + line + "'");
    }
  }
  if (!grid) throw ValidationError("snapshot: missing grid header");
  for (const auto& e : entries)
    if (e.kind == FieldKind::phase && !phase)
      throw SchemaError("snapshot: phase field without phase header");

  State x(StateSchema(entries), grid, phase);
  for (std::size_t i = 0; i < x.nfields(); ++i)
    read_f64(is, x.field(static_cast<int>(i)).data());
  return x;
}

}  // namespace pb
