#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "svc/error.hpp"
#include "svc/spp.hpp"
#include "svc/sweep.hpp"

using namespace svc;

namespace {

RunConfig basic_config() {
  return parse_config(
      "rho = 2.5\n"
      "n = 1\n"
      "G = 3\n"
      "V = 10\n"
      "L = 10\n"
      "axis = k:2:5:50\n");
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("svc_test_" + name);
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto config = parse_config(
      "# comment line\n"
      "rho = 3   # trailing comment\n"
      "n=0.5\n"
      "G = 4\n"
      "V = 12.5\n"
      "L = 2\n"
      "k = 1.5\n"
      "exponent_poly = 1, 0.5\n"
      "quantity = R_scaled\n"
      "oracle_check = true\n"
      "seed = 99\n"
      "axis = rho:1.5:4:10\n"
      "axis = G:1,2,3\n");
  CHECK(config.spec.rho == 3.0);
  CHECK(config.spec.n == 0.5);
  CHECK(config.spec.stage == 4);
  CHECK(config.spec.V == 12.5);
  CHECK(config.spec.L == 2.0);
  CHECK(config.k == 1.5);
  CHECK(config.spec.exponent_poly == std::vector<double>{1.0, 0.5});
  CHECK(config.quantity == Quantity::kRScaled);
  CHECK(config.oracle_check);
  CHECK(config.seed == 99);
  REQUIRE(config.axes.size() == 2);
  CHECK(config.axes[0].name == AxisName::kRho);
  CHECK(config.axes[0].count == 10);
  CHECK(config.axes[1].stages == std::vector<int>{1, 2, 3});
}

TEST_CASE("config errors carry origin and line") {
  try {
    parse_config("rho = 2\nbogus = 1\n", "run.cfg");
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(contains(e.what(), "run.cfg:2"));
    CHECK(contains(e.what(), "bogus"));
  }
  CHECK_THROWS_AS(parse_config("rho 2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("rho = two\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("G = 2.5\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("quantity = X\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("axis = q:1:2:3\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("axis = k:1:2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("oracle_check = maybe\n"), InvalidArgument);
  CHECK_THROWS_AS(load_config(temp_path("does_not_exist.cfg")), IoError);
}

TEST_CASE("axis parsing and description") {
  const auto k = Axis::parse("k:2:10:5");
  CHECK(k.values() == std::vector<double>{2.0, 4.0, 6.0, 8.0, 10.0});
  CHECK(k.describe() == "k linear 2 10 5");
  const auto g = Axis::parse("G:1,2,3");
  CHECK(g.values() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(g.describe() == "G list 1 2 3");
  CHECK(to_string(AxisName::kRho) == "rho");
  CHECK(parse_quantity(to_string(Quantity::kRScaled)) == Quantity::kRScaled);
}

TEST_CASE("config validation") {
  auto config = basic_config();
  CHECK_NOTHROW(config.validate());

  auto no_axis = config;
  no_axis.axes.clear();
  CHECK_THROWS_AS(no_axis.validate(), InvalidArgument);

  auto bad_rho = config;
  bad_rho.set("rho", "1");
  CHECK_THROWS_AS(bad_rho.validate(), InvalidArgument);

  auto rho_axis = config;
  rho_axis.axes.push_back(Axis::parse("rho:0.5:2:4"));
  CHECK_THROWS_AS(rho_axis.validate(), InvalidArgument);

  auto same = config;
  same.axes.push_back(Axis::parse("k:1:2:4"));
  CHECK_THROWS_AS(same.validate(), InvalidArgument);

  auto three = config;
  three.axes.push_back(Axis::parse("rho:2:3:4"));
  three.axes.push_back(Axis::parse("n:1:2:4"));
  CHECK_THROWS_AS(three.validate(), InvalidArgument);

  auto negative_k = config;
  negative_k.axes = {Axis::parse("k:-1:2:4")};
  CHECK_THROWS_AS(negative_k.validate(), InvalidArgument);

  auto deep_oracle = config;
  deep_oracle.oracle_check = true;
  deep_oracle.set("G", "15");
  CHECK_THROWS_AS(deep_oracle.validate(), InvalidArgument);

  auto n_with_poly = config;
  n_with_poly.set("exponent_poly", "0,1");
  n_with_poly.axes.push_back(Axis::parse("n:1:2:3"));
  CHECK_THROWS_AS(n_with_poly.validate(), InvalidArgument);
}

TEST_CASE("sweeps") {
  auto config = basic_config();
  const auto grid = run_sweep(config);
  REQUIRE(grid.values.size() == 50);
  CHECK(grid.rows() == 50);
  CHECK(grid.columns() == 1);
  const auto ks = config.axes[0].values();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(grid.values[i] == transmission(config.spec, ks[i] * ks[i]).T);
  }
  CHECK(run_sweep(config) == grid);

  auto transparent = config;
  transparent.set("V", "0");
  for (double v : run_sweep(transparent).values) CHECK(v == 1.0);

  auto reflection = config;
  reflection.set("quantity", "R");
  const auto r = run_sweep(reflection);
  for (std::size_t i = 0; i < r.values.size(); ++i) CHECK(std::abs(r.values[i] + grid.values[i] - 1.0) < 1e-12);

  auto two_d = config;
  two_d.axes.push_back(Axis::parse("G:0,2,4"));
  const auto g2 = run_sweep(two_d);
  CHECK(g2.columns() == 3);
  auto spec = config.spec;
  spec.stage = 4;
  CHECK(g2.at(7, 2) == transmission(spec, ks[7] * ks[7]).T);
}

TEST_CASE("oracle-checked sweeps") {
  auto config = basic_config();
  config.oracle_check = true;
  config.axes.push_back(Axis::parse("G:0,1,2,3,4,5,6"));
  CHECK_NOTHROW(run_sweep(config));

  auto rho = basic_config();
  rho.oracle_check = true;
  rho.axes = {Axis::parse("rho:1.3:4.5:12"), Axis::parse("n:-0.5:2:6")};
  rho.k = 2.7;
  CHECK_NOTHROW(run_sweep(rho));
}

TEST_CASE("grid round trip") {
  auto config = basic_config();
  config.axes = {Axis::parse("k:2:3:2"), Axis::parse("n:0.5:1:2")};
  const auto grid = run_sweep(config);
  const auto text = format_grid(grid, {.reproducible = true});
  CHECK(parse_grid(text) == grid);

  const auto path = temp_path("roundtrip.csv");
  write_grid(grid, path);
  CHECK(read_grid(path) == grid);
  std::filesystem::remove(path);
}

TEST_CASE("property: random grids round-trip exactly") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    SweepGrid grid;
    grid.fixed.rho = 1.0 + 4.0 * unit(rng);
    grid.fixed.n = -1.0 + 3.0 * unit(rng);
    grid.fixed.stage = static_cast<int>(rng() % 10);
    grid.fixed.V = 100.0 * unit(rng);
    grid.fixed.L = 1e-3 + 50.0 * unit(rng);
    grid.k = unit(rng) * 7.0 + 1e-9;
    if (trial % 3 == 0) grid.fixed.exponent_poly = {unit(rng), unit(rng)};
    grid.quantity = static_cast<Quantity>(trial % 3);
    Axis first;
    first.name = AxisName::kK;
    first.min = unit(rng);
    first.max = first.min + 10.0 * unit(rng) + 1e-6;
    first.count = 2 + static_cast<int>(rng() % 20);
    grid.axes.push_back(first);
    if (trial % 2 == 0) {
      Axis second;
      second.name = AxisName::kG;
      const int count = 2 + static_cast<int>(rng() % 4);
      for (int g = 0; g < count; ++g) second.stages.push_back(g);
      second.count = static_cast<int>(second.stages.size());
      grid.axes.push_back(second);
    }
    grid.values.resize(grid.rows() * grid.columns());
    for (auto& v : grid.values) v = std::ldexp(unit(rng), -static_cast<int>(rng() % 1000));
    CHECK(parse_grid(format_grid(grid)) == grid);
  }
}

TEST_CASE("grid metadata") {
  const auto grid = run_sweep(basic_config());
  const auto text = format_grid(grid);
  for (const char* key : {"# svcscatter sweep grid", "# version: ", "# generated: ", "# quantity: T",
                          "# rho: 2.5", "# n: 1", "# G: 3", "# V: 10", "# L: 10", "# k: ",
                          "# exponent_poly: none", "# axis: k linear 2 5 50", "# layout: "}) {
    CAPTURE(key);
    CHECK(contains(text, key));
  }
  const auto reproducible = format_grid(grid, {.reproducible = true});
  CHECK_FALSE(contains(reproducible, "# generated: "));
  CHECK(reproducible == format_grid(grid, {.reproducible = true}));
}

TEST_CASE("malformed grids report the line") {
  const auto text = format_grid(run_sweep(basic_config()), {.reproducible = true});
  auto expect_line = [](const std::string& broken, const std::string& marker) {
    try {
      parse_grid(broken, "grid.csv");
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CAPTURE(e.what());
      CHECK(contains(e.what(), marker));
    }
  };
  expect_line("not a grid\n", "grid.csv:1");

  auto lines = std::vector<std::string>{};
  {
    std::size_t start = 0;
    while (start < text.size()) {
      const auto end = text.find('\n', start);
      lines.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += p + "\n";
    return out;
  };
  const std::size_t header = 12;  // banner and 11 metadata lines come first
  REQUIRE(lines[header].rfind("k,T", 0) == 0);

  auto bad_cell = lines;
  bad_cell[header + 3] = "2.1,abc";
  expect_line(join(bad_cell), "grid.csv:" + std::to_string(header + 4));

  auto short_row = lines;
  short_row[header + 5] = "2.3";
  expect_line(join(short_row), "grid.csv:" + std::to_string(header + 6));

  auto truncated = lines;
  truncated.resize(header + 10);
  expect_line(join(truncated), "rows");

  auto wrong_axis = lines;
  wrong_axis[header + 1] = "2.5,0.5";
  expect_line(join(wrong_axis), "grid.csv:" + std::to_string(header + 2));
}

TEST_CASE("large grid write and read") {
  auto config = basic_config();
  config.axes = {Axis::parse("k:1:20:1000"), Axis::parse("rho:1.5:4:400")};
  const auto start = std::chrono::steady_clock::now();
  const auto grid = run_sweep(config);
  const auto path = temp_path("large.csv");
  write_grid(grid, path);
  const auto back = read_grid(path);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(back == grid);
  CHECK(seconds < 10.0);
  std::filesystem::remove(path);
}

TEST_CASE("unwritable paths raise IoError") {
  const auto grid = run_sweep(basic_config());
  CHECK_THROWS_AS(write_grid(grid, "/nonexistent_dir/grid.csv"), IoError);
  CHECK_THROWS_AS(read_grid("/nonexistent_dir/grid.csv"), IoError);
}
