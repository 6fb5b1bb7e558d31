#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <string>

#include "pb/config.hpp"
#include "pb/functional.hpp"
#include "pb/plot.hpp"
#include "pb/snapshot.hpp"

using namespace pb;

namespace {

std::filesystem::path tmp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("snapshot round-trips a fluid state bit-exactly") {
  auto g = std::make_shared<Grid3>(std::array<int, 3>{6, 2, 1},
                                   std::array<double, 3>{2 * std::numbers::pi, 1.5, 1});
  State x(StateSchema({{"u", FieldKind::vector, -1},
                       {"rho", FieldKind::scalar, 1},
                       {"s", FieldKind::scalar, 1}}),
          g);
  std::mt19937_64 rng(6);
  randomize_state(x, 1, 0.3, rng);
  const auto path = tmp_file("pb_roundtrip.pbstate");
  save_state(path.string(), x);
  State y = load_state(path.string());
  REQUIRE(y.schema() == x.schema());
  CHECK(*y.grid() == *x.grid());
  for (std::size_t i = 0; i < x.ncoeffs(); ++i)
    CHECK(y.coeff(i) == x.coeff(i));
  std::filesystem::remove(path);
}

TEST_CASE("snapshot round-trips a kinetic state") {
  auto g = std::make_shared<Grid3>(std::array<int, 3>{4, 1, 1},
                                   std::array<double, 3>{2 * std::numbers::pi, 1, 1});
  auto ph = std::make_shared<PhaseGrid>(*g, std::array<int, 3>{8, 1, 1},
                                        std::array<double, 3>{4, 4, 4});
  State x(StateSchema({{"f", FieldKind::phase, 0},
                       {"E", FieldKind::vector, 1}}),
          g, ph);
  std::mt19937_64 rng(16);
  randomize_state(x, 1, 0.2, rng);
  const auto path = tmp_file("pb_kinetic.pbstate");
  save_state(path.string(), x);
  State y = load_state(path.string());
  REQUIRE(y.schema() == x.schema());
  CHECK(*y.phase_grid() == *x.phase_grid());
  for (std::size_t i = 0; i < x.ncoeffs(); ++i)
    CHECK(y.coeff(i) == x.coeff(i));
  std::filesystem::remove(path);
}

TEST_CASE("snapshot loader rejects malformed input") {
  const auto path = tmp_file("pb_bad.pbstate");
  {
    std::ofstream out(path);
    out << "NOTAPBSTATE 1\nend\n";
  }
  CHECK_THROWS_AS(load_state(path.string()), ValidationError);
  {
    std::ofstream out(path);
    out << "PBSTATE 1\ngrid 4 1 1 6.28 1 1\nfield rho scalar 1\nend\n";
    // truncated: no payload
  }
  CHECK_THROWS(load_state(path.string()));
  CHECK_THROWS(load_state("/nonexistent/path.pbstate"));
  std::filesystem::remove(path);
}

TEST_CASE("config parses sections, repeats and comments") {
  Config cfg = Config::parse(
      "top = 1\n"
      "[a]\n# comment\nx = 3.5 ; trailing\n"
      "multi = 1 2\nmulti = 3 4\n"
      "[b]\nname = hello world\n");
  CHECK(cfg.get_int("", "top") == 1);
  CHECK(cfg.get_double("a", "x") == 3.5);
  CHECK(cfg.get_all("a", "multi").size() == 2);
  CHECK(cfg.get("b", "name") == "hello world");
  CHECK(cfg.get_or("b", "missing", "dflt") == "dflt");
  CHECK_THROWS_AS(cfg.get("a", "multi"), SchemaError);  // repeated
  CHECK_THROWS_AS(cfg.get("a", "nope"), SchemaError);
  auto toks = split_tokens("  1 2\t3 ");
  REQUIRE(toks.size() == 3);
  CHECK(toks[2] == "3");
}

TEST_CASE("svg plot writes a well-formed file") {
  const auto path = tmp_file("pb_plot.svg");
  std::vector<double> xs{0, 1, 2, 3};
  std::vector<std::pair<std::string, std::vector<double>>> series{
      {"energy", {1.0, 0.9, 1.1, 1.0}}};
  write_svg_plot(path.string(), "title", "t", xs, series);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("energy") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
  std::filesystem::remove(path);
}
