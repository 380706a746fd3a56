#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "svc/geometry.hpp"

namespace svc {

enum class Quantity { kT, kR, kRScaled };
enum class AxisName { kK, kRho, kN, kG };

std::string_view to_string(Quantity q);
std::string_view to_string(AxisName a);
Quantity parse_quantity(std::string_view text);
AxisName parse_axis_name(std::string_view text);

/// One sweep axis. Continuous axes (k, rho, n) are linear ranges with
/// `count` points including both ends; the stage axis is an explicit list.
struct Axis {
  AxisName name = AxisName::kK;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  std::vector<int> stages;

  std::vector<double> values() const;
  std::size_t size() const;

  /// "k:2:10:400" or "G:1,2,3".
  static Axis parse(std::string_view text);
  std::string describe() const;

  bool operator==(const Axis&) const = default;
};

/// Everything needed to reproduce a sweep.
struct RunConfig {
  PotentialSpec spec;
  double k = 1.0;  // wave number used when k is not an axis
  std::vector<Axis> axes;
  Quantity quantity = Quantity::kT;
  bool oracle_check = false;
  std::uint64_t seed = 0;

  static constexpr int kMaxOracleStage = 14;

  /// Throws InvalidArgument on any inconsistency.
  void validate() const;

  /// Sets one key from the flat key = value vocabulary (see parse_config).
  void set(std::string_view key, std::string_view value);
};

/// Flat `key = value` text, '#' comments. Keys: rho, n, G, V, L, k,
/// exponent_poly (comma list, empty for none), quantity (T | R | R_scaled),
/// oracle_check (true | false), seed, axis (repeatable; first is the row axis).
/// `origin` prefixes error messages.
RunConfig parse_config(std::string_view text, std::string_view origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Row-major grid of one quantity over one or two axes.
struct SweepGrid {
  std::vector<Axis> axes;
  PotentialSpec fixed;
  double k = 1.0;
  Quantity quantity = Quantity::kT;
  std::vector<double> values;

  std::size_t rows() const { return axes.empty() ? 0 : axes[0].size(); }
  std::size_t columns() const { return axes.size() > 1 ? axes[1].size() : 1; }
  double at(std::size_t row, std::size_t column) const { return values[row * columns() + column]; }

  bool operator==(const SweepGrid&) const = default;
};

/// Evaluates every cell (in parallel, gathered by index). With oracle_check
/// each cell's T is compared with the brute-force product; a difference above
/// kOracleTolerance throws OracleMismatch naming the parameters and k.
SweepGrid run_sweep(const RunConfig& config);

inline constexpr double kOracleTolerance = 1e-9;

struct WriteOptions {
  bool reproducible = false;  // omit the generation timestamp
};

/// CSV with '#' metadata lines, a header row, then one row per value of the
/// first axis: `axis0 value, cell(row, col 0), cell(row, col 1), ...`.
/// Numbers use 17 significant digits. Throws IoError with the path on failure.
void write_grid(const SweepGrid& grid, const std::filesystem::path& path, WriteOptions options = {});
std::string format_grid(const SweepGrid& grid, WriteOptions options = {});

/// Inverse of write_grid. Malformed input throws IoError naming path and line.
SweepGrid read_grid(const std::filesystem::path& path);
SweepGrid parse_grid(std::string_view text, std::string_view origin = "<grid>");

/// 17 significant digits, as used in grid files.
std::string format_number(double value);

}  // namespace svc
