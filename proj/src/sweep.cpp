#include "svc/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>

#include "svc/analysis.hpp"
#include "svc/error.hpp"
#include "svc/oracle.hpp"
#include "svc/parallel.hpp"
#include "svc/spp.hpp"

namespace svc {
namespace {

constexpr std::string_view kGridBanner = "# svcscatter sweep grid";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InvalidArgument(std::string(what) + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InvalidArgument(std::string(what) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InvalidArgument(std::string(what) + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_poly(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty() || text == "none") return out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part, "exponent_poly"));
  return out;
}

std::string format_poly(const std::vector<double>& poly) {
  if (poly.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (i) out += ',';
    out += format_number(poly[i]);
  }
  return out;
}

// Spec of one cell: the fixed spec with the axis coordinates applied.
struct Cell {
  PotentialSpec spec;
  double k;
};

Cell make_cell(const PotentialSpec& fixed, double fixed_k, const std::vector<Axis>& axes,
               const std::vector<std::vector<double>>& axis_values, std::size_t row,
               std::size_t column) {
  Cell cell{fixed, fixed_k};
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const double v = axis_values[a][a == 0 ? row : column];
    switch (axes[a].name) {
      case AxisName::kK: cell.k = v; break;
      case AxisName::kRho: cell.spec.rho = v; break;
      case AxisName::kN: cell.spec.n = v; break;
      case AxisName::kG: cell.spec.stage = static_cast<int>(v); break;
    }
  }
  return cell;
}

std::string describe_cell(const Cell& cell) {
  std::ostringstream os;
  os << "(rho=" << format_number(cell.spec.rho) << ", n=" << format_number(cell.spec.n)
     << ", G=" << cell.spec.stage << ", V=" << format_number(cell.spec.V)
     << ", L=" << format_number(cell.spec.L) << ", k=" << format_number(cell.k) << ")";
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

[[noreturn]] void malformed(std::string_view origin, std::size_t line, const std::string& message) {
  throw IoError(std::string(origin) + ":" + std::to_string(line) + ": " + message);
}

}  // namespace

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::kT: return "T";
    case Quantity::kR: return "R";
    case Quantity::kRScaled: return "R_scaled";
  }
  return "?";
}

std::string_view to_string(AxisName a) {
  switch (a) {
    case AxisName::kK: return "k";
    case AxisName::kRho: return "rho";
    case AxisName::kN: return "n";
    case AxisName::kG: return "G";
  }
  return "?";
}

Quantity parse_quantity(std::string_view text) {
  text = trim(text);
  if (text == "T") return Quantity::kT;
  if (text == "R") return Quantity::kR;
  if (text == "R_scaled") return Quantity::kRScaled;
  throw InvalidArgument("quantity must be T, R or R_scaled, got '" + std::string(text) + "'");
}

AxisName parse_axis_name(std::string_view text) {
  text = trim(text);
  if (text == "k") return AxisName::kK;
  if (text == "rho") return AxisName::kRho;
  if (text == "n") return AxisName::kN;
  if (text == "G") return AxisName::kG;
  throw InvalidArgument("axis must be one of k, rho, n, G, got '" + std::string(text) + "'");
}

std::vector<double> Axis::values() const {
  if (name == AxisName::kG) return {stages.begin(), stages.end()};
  return linear_grid(min, max, count);
}

std::size_t Axis::size() const {
  return name == AxisName::kG ? stages.size() : static_cast<std::size_t>(std::max(count, 0));
}

Axis Axis::parse(std::string_view text) {
  const auto parts = split(text, ':');
  Axis axis;
  axis.name = parse_axis_name(parts.front());
  if (axis.name == AxisName::kG) {
    if (parts.size() != 2) throw InvalidArgument("stage axis is written G:g1,g2,...");
    for (auto g : split(parts[1], ',')) axis.stages.push_back(static_cast<int>(parse_integer(g, "G axis")));
    axis.count = static_cast<int>(axis.stages.size());
    return axis;
  }
  if (parts.size() != 4) {
    throw InvalidArgument("axis '" + std::string(text) + "' is not name:min:max:count");
  }
  axis.min = parse_double(parts[1], "axis min");
  axis.max = parse_double(parts[2], "axis max");
  axis.count = static_cast<int>(parse_integer(parts[3], "axis count"));
  return axis;
}

std::string Axis::describe() const {
  std::string out(to_string(name));
  if (name == AxisName::kG) {
    out += " list";
    for (int g : stages) out += " " + std::to_string(g);
    return out;
  }
  return out + " linear " + format_number(min) + " " + format_number(max) + " " +
         std::to_string(count);
}

void RunConfig::validate() const {
  if (axes.empty() || axes.size() > 2) throw InvalidArgument("a sweep needs one or two axes");
  if (axes.size() == 2 && axes[0].name == axes[1].name) {
    throw InvalidArgument("the two sweep axes must differ");
  }
  bool k_axis = false;
  int max_stage = spec.stage;
  for (const auto& axis : axes) {
    if (axis.size() < 2) throw InvalidArgument("axis " + std::string(to_string(axis.name)) + " needs >= 2 points");
    switch (axis.name) {
      case AxisName::kK:
        k_axis = true;
        if (!(axis.min > 0.0) || !(axis.max > 0.0)) throw InvalidArgument("k axis must be > 0");
        break;
      case AxisName::kRho:
        if (!(axis.min > 1.0) || !(axis.max > 1.0)) throw InvalidArgument("rho axis must stay > 1");
        break;
      case AxisName::kN:
        if (!spec.exponent_poly.empty()) {
          throw InvalidArgument("an n axis has no effect when exponent_poly is set");
        }
        break;
      case AxisName::kG:
        for (int g : axis.stages) {
          if (g < 0) throw InvalidArgument("stages must be >= 0");
          max_stage = std::max(max_stage, g);
        }
        break;
    }
    if (axis.name != AxisName::kG && (!std::isfinite(axis.min) || !std::isfinite(axis.max))) {
      throw InvalidArgument("axis bounds must be finite");
    }
  }
  if (!k_axis && !(k > 0.0)) throw InvalidArgument("fixed k must be > 0");
  if (oracle_check && max_stage > kMaxOracleStage) {
    throw InvalidArgument("oracle_check is limited to G <= " + std::to_string(kMaxOracleStage));
  }
  PotentialSpec probe = spec;
  for (const auto& axis : axes) {
    if (axis.name == AxisName::kRho) probe.rho = std::min(axis.min, axis.max);
  }
  probe.validate();
}

void RunConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  if (key == "rho") spec.rho = parse_double(value, key);
  else if (key == "n") spec.n = parse_double(value, key);
  else if (key == "G") spec.stage = static_cast<int>(parse_integer(value, key));
  else if (key == "V") spec.V = parse_double(value, key);
  else if (key == "L") spec.L = parse_double(value, key);
  else if (key == "k") k = parse_double(value, key);
  else if (key == "exponent_poly") spec.exponent_poly = parse_poly(value);
  else if (key == "quantity") quantity = parse_quantity(value);
  else if (key == "oracle_check") oracle_check = parse_bool(value, key);
  else if (key == "seed") seed = static_cast<std::uint64_t>(parse_integer(value, key));
  else if (key == "axis") axes.push_back(Axis::parse(value));
  else throw InvalidArgument("unknown configuration key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument(std::string(origin) + ":" + std::to_string(line_no) +
                            ": expected key = value");
    }
    try {
      config.set(view.substr(0, eq), view.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

SweepGrid run_sweep(const RunConfig& config) {
  config.validate();
  SweepGrid grid;
  grid.axes = config.axes;
  grid.fixed = config.spec;
  grid.k = config.k;
  grid.quantity = config.quantity;

  std::vector<std::vector<double>> axis_values;
  for (const auto& axis : grid.axes) axis_values.push_back(axis.values());
  const std::size_t rows = grid.rows();
  const std::size_t columns = grid.columns();

  grid.values = parallel_map(rows * columns, [&](std::size_t index) {
    const Cell cell = make_cell(config.spec, config.k, grid.axes, axis_values, index / columns,
                                index % columns);
    const double E = cell.k * cell.k;
    double value = 0.0;
    if (config.quantity == Quantity::kRScaled) {
      value = reflection_scaled(cell.spec, E);
    } else {
      const auto point = transmission(cell.spec, E);
      value = config.quantity == Quantity::kT ? point.T : point.R;
      if (config.oracle_check) {
        const auto chain = chain_from_layout(build_layout(cell.spec));
        const auto reference = brute_force_T(chain, cell.spec.V, E);
        if (!(std::abs(point.T - reference.T) < kOracleTolerance)) {
          throw OracleMismatch("oracle mismatch at " + describe_cell(cell) + ": closed form T=" +
                               format_number(point.T) + ", brute force T=" +
                               format_number(reference.T));
        }
      }
    }
    return value;
  });
  return grid;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string format_grid(const SweepGrid& grid, WriteOptions options) {
  std::string out;
  out.reserve(grid.values.size() * 24 + 1024);
  auto meta = [&](std::string_view key, const std::string& value) {
    out += "# ";
    out += key;
    out += ": ";
    out += value;
    out += '\n';
  };
  out += kGridBanner;
  out += '\n';
  meta("version", SVC_VERSION);
  if (!options.reproducible) meta("generated", utc_timestamp());
  meta("quantity", std::string(to_string(grid.quantity)));
  meta("rho", format_number(grid.fixed.rho));
  meta("n", format_number(grid.fixed.n));
  meta("G", std::to_string(grid.fixed.stage));
  meta("V", format_number(grid.fixed.V));
  meta("L", format_number(grid.fixed.L));
  meta("k", format_number(grid.k));
  meta("exponent_poly", format_poly(grid.fixed.exponent_poly));
  for (const auto& axis : grid.axes) meta("axis", axis.describe());
  meta("layout", grid.axes.size() > 1
                     ? "one row per first-axis value; columns follow the second axis"
                     : "one row per axis value");

  std::vector<std::vector<double>> axis_values;
  for (const auto& axis : grid.axes) axis_values.push_back(axis.values());

  out += to_string(grid.axes[0].name);
  if (grid.axes.size() > 1) {
    out += '|';
    out += to_string(grid.axes[1].name);
    for (double c : axis_values[1]) {
      out += ',';
      out += format_number(c);
    }
  } else {
    out += ',';
    out += to_string(grid.quantity);
  }
  out += '\n';

  const std::size_t columns = grid.columns();
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    out += format_number(axis_values[0][r]);
    for (std::size_t c = 0; c < columns; ++c) {
      out += ',';
      out += format_number(grid.values[r * columns + c]);
    }
    out += '\n';
  }
  return out;
}

void write_grid(const SweepGrid& grid, const std::filesystem::path& path, WriteOptions options) {
  const std::string text = format_grid(grid, options);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

SweepGrid parse_grid(std::string_view text, std::string_view origin) {
  SweepGrid grid;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool saw_banner = false;
  bool saw_header = false;
  std::vector<std::vector<double>> axis_values;

  auto wrap = [&](auto&& fn) {
    try {
      fn();
    } catch (const InvalidArgument& e) {
      malformed(origin, line_no, e.what());
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (!saw_banner) {
        if (view != kGridBanner) malformed(origin, line_no, "missing grid banner");
        saw_banner = true;
        continue;
      }
      if (saw_header) malformed(origin, line_no, "metadata after the header row");
      view.remove_prefix(1);
      const auto colon = view.find(':');
      if (colon == std::string_view::npos) malformed(origin, line_no, "metadata line without ':'");
      const auto key = trim(view.substr(0, colon));
      const auto value = trim(view.substr(colon + 1));
      wrap([&] {
        if (key == "quantity") grid.quantity = parse_quantity(value);
        else if (key == "rho") grid.fixed.rho = parse_double(value, key);
        else if (key == "n") grid.fixed.n = parse_double(value, key);
        else if (key == "G") grid.fixed.stage = static_cast<int>(parse_integer(value, key));
        else if (key == "V") grid.fixed.V = parse_double(value, key);
        else if (key == "L") grid.fixed.L = parse_double(value, key);
        else if (key == "k") grid.k = parse_double(value, key);
        else if (key == "exponent_poly") grid.fixed.exponent_poly = parse_poly(value);
        else if (key == "axis") {
          const auto words = split(value, ' ');
          Axis axis;
          axis.name = parse_axis_name(words.at(0));
          if (axis.name == AxisName::kG) {
            if (words.size() < 2 || words[1] != "list") throw InvalidArgument("bad stage axis");
            for (std::size_t i = 2; i < words.size(); ++i) {
              axis.stages.push_back(static_cast<int>(parse_integer(words[i], "stage")));
            }
            axis.count = static_cast<int>(axis.stages.size());
          } else {
            if (words.size() != 5 || words[1] != "linear") throw InvalidArgument("bad axis line");
            axis.min = parse_double(words[2], "axis min");
            axis.max = parse_double(words[3], "axis max");
            axis.count = static_cast<int>(parse_integer(words[4], "axis count"));
          }
          if (axis.size() < 2) throw InvalidArgument("axis needs >= 2 points");
          grid.axes.push_back(axis);
        }
        // version, generated, layout: informational.
      });
      continue;
    }

    if (!saw_banner) malformed(origin, line_no, "missing grid banner");
    if (!saw_header) {
      if (grid.axes.empty() || grid.axes.size() > 2) malformed(origin, line_no, "need one or two axis lines");
      for (const auto& axis : grid.axes) axis_values.push_back(axis.values());
      const auto cells = split(view, ',');
      if (grid.axes.size() == 1) {
        if (cells.size() != 2) malformed(origin, line_no, "header must have 2 columns");
      } else {
        if (cells.size() != axis_values[1].size() + 1) {
          malformed(origin, line_no, "header has " + std::to_string(cells.size() - 1) +
                                         " columns, axis defines " + std::to_string(axis_values[1].size()));
        }
        for (std::size_t c = 0; c < axis_values[1].size(); ++c) {
          double v = 0.0;
          wrap([&] { v = parse_double(cells[c + 1], "column value"); });
          if (v != axis_values[1][c]) malformed(origin, line_no, "column value does not match axis definition");
        }
      }
      saw_header = true;
      continue;
    }

    const std::size_t row = grid.values.size() / grid.columns();
    if (row >= grid.rows()) malformed(origin, line_no, "more rows than the first axis defines");
    const auto cells = split(view, ',');
    if (cells.size() != grid.columns() + 1) {
      malformed(origin, line_no, "expected " + std::to_string(grid.columns() + 1) + " fields, got " +
                                     std::to_string(cells.size()));
    }
    double axis_value = 0.0;
    wrap([&] { axis_value = parse_double(cells[0], "row value"); });
    if (axis_value != axis_values[0][row]) malformed(origin, line_no, "row value does not match axis definition");
    for (std::size_t c = 1; c < cells.size(); ++c) {
      double v = 0.0;
      wrap([&] { v = parse_double(cells[c], "cell"); });
      grid.values.push_back(v);
    }
  }
  if (!saw_header) malformed(origin, line_no, "no header row");
  if (grid.values.size() != grid.rows() * grid.columns()) {
    malformed(origin, line_no, "expected " + std::to_string(grid.rows()) + " rows, got " +
                                   std::to_string(grid.values.size() / grid.columns()));
  }
  return grid;
}

SweepGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open grid file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_grid(buffer.str(), path.string());
}

}  // namespace svc
