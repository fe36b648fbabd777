#include "novikov/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "novikov/error.hpp"

namespace novikov {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::config, "line " + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view s, std::size_t line) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail(line, "not a number: '" + std::string(s) + "'");
  if (!std::isfinite(value)) fail(line, "value must be finite");
  return value;
}

std::size_t to_size(std::string_view s, std::size_t line) {
  s = trim(s);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail(line, "not a non-negative integer: '" + std::string(s) + "'");
  return value;
}

template <class F>
auto to_list(std::string_view s, std::size_t line, F item) {
  std::vector<decltype(item(s, line))> out;
  while (true) {
    const auto comma = s.find(',');
    const auto piece = trim(s.substr(0, comma));
    if (piece.empty()) fail(line, "empty list item");
    out.push_back(item(piece, line));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

using Setter = std::function<void(RunConfig&, std::string_view, std::size_t)>;

Setter real(double RunConfig::*field) {
  return [field](RunConfig& c, std::string_view v, std::size_t l) { c.*field = to_double(v, l); };
}
Setter count(std::size_t RunConfig::*field) {
  return [field](RunConfig& c, std::string_view v, std::size_t l) { c.*field = to_size(v, l); };
}
Setter text(std::string RunConfig::*field) {
  return [field](RunConfig& c, std::string_view v, std::size_t) { c.*field = std::string(v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"datum.kind", text(&RunConfig::datum_kind)},
      {"datum.amplitude", real(&RunConfig::amplitude)},
      {"datum.width", real(&RunConfig::width)},
      {"datum.center", real(&RunConfig::center)},
      {"datum.crest", real(&RunConfig::center)},
      {"datum.speed", real(&RunConfig::speed)},
      {"datum.separation", real(&RunConfig::separation)},
      {"datum.sign",
       [](RunConfig& c, std::string_view v, std::size_t l) {
         c.sign = to_double(v, l) < 0.0 ? -1 : 1;
       }},
      {"datum.file", text(&RunConfig::samples_file)},
      {"run.x_lo", real(&RunConfig::x_lo)},
      {"run.x_hi", real(&RunConfig::x_hi)},
      {"run.half_width",
       [](RunConfig& c, std::string_view v, std::size_t l) {
         const double hw = to_double(v, l);
         c.x_lo = -hw;
         c.x_hi = hw;
       }},
      {"run.N", count(&RunConfig::N)},
      {"run.refinement",
       [](RunConfig& c, std::string_view v, std::size_t l) {
         c.refinement = static_cast<int>(to_size(v, l));
       }},
      {"run.edge_tol", real(&RunConfig::edge_tol)},
      {"run.dt", real(&RunConfig::dt)},
      {"run.T_end", real(&RunConfig::T_end)},
      {"run.snapshot_stride", count(&RunConfig::snapshot_stride)},
      {"run.breaking_tol", real(&RunConfig::breaking_tol)},
      {"tol.E", real(&RunConfig::tol_E)},
      {"tol.F", real(&RunConfig::tol_F)},
      {"tol.bound", real(&RunConfig::tol_bound)},
      {"tol.trace", real(&RunConfig::tol_trace)},
      {"tol.cross", real(&RunConfig::tol_cross)},
      {"tol.exact", real(&RunConfig::tol_exact)},
      {"trace.y_bar",
       [](RunConfig& c, std::string_view v, std::size_t l) { c.trace_y_bar = to_list(v, l, to_double); }},
      {"trace.substeps", count(&RunConfig::trace_substeps)},
      {"compare.N",
       [](RunConfig& c, std::string_view v, std::size_t l) { c.compare_N = to_list(v, l, to_size); }},
      {"compare.M",
       [](RunConfig& c, std::string_view v, std::size_t l) { c.compare_M = to_list(v, l, to_size); }},
      {"compare.reference_dt", real(&RunConfig::compare_reference_dt)},
      {"compare.min_ratio", real(&RunConfig::compare_min_ratio)},
      {"perturb.delta",
       [](RunConfig& c, std::string_view v, std::size_t l) { c.perturb_delta = to_list(v, l, to_double); }},
      {"perturb.center", real(&RunConfig::perturb_center)},
      {"perturb.width", real(&RunConfig::perturb_width)},
      {"perturb.window", real(&RunConfig::perturb_window)},
      {"output.dir", text(&RunConfig::out_dir)},
  };
  return table;
}

void check(const RunConfig& c) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::config, msg); };
  if (!(c.x_lo < c.x_hi)) bad("run.x_lo must be below run.x_hi");
  if (c.N < 16) bad("run.N must be at least 16");
  if (c.refinement < 8) bad("run.refinement must be at least 8");
  if (!(c.dt > 0.0)) bad("run.dt must be positive");
  if (!(c.T_end >= 0.0)) bad("run.T_end must be non-negative");
  if (c.snapshot_stride == 0) bad("run.snapshot_stride must be positive");
  if (!(c.tol_E > 0.0 && c.tol_F > 0.0 && c.tol_bound >= 0.0 && c.tol_cross > 0.0))
    bad("tolerances must be positive");
  if (c.trace_substeps == 0) bad("trace.substeps must be positive");
  if (!c.compare_M.empty() && c.compare_M.size() != c.compare_N.size())
    bad("compare.M must have as many entries as compare.N");
  for (std::size_t n : c.compare_N)
    if (n < 16) bad("compare.N entries must be at least 16");
  if (!(c.perturb_width > 0.0 && c.perturb_window > 0.0))
    bad("perturb.width and perturb.window must be positive");
  static const std::set<std::string> kinds = {"gaussian", "peakon", "antipeakon-pair",
                                              "antipeakon_pair", "tabulated", "zero"};
  if (!kinds.count(c.datum_kind)) bad("unknown datum kind '" + c.datum_kind + "'");
  if (c.datum_kind == "tabulated" && c.samples_file.empty())
    bad("datum.file is required for a tabulated datum");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (value.empty()) fail(line_no, "missing value for '" + std::string(key) + "'");

    const auto it = setters().find(key);
    if (it == setters().end()) fail(line_no, "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) fail(line_no, "repeated key '" + std::string(key) + "'");
    it->second(config, value, line_no);
  }
  check(config);
  if (!power_of_two(config.N))
    config.warnings.push_back("run.N = " + std::to_string(config.N) + " is not a power of two");
  for (std::size_t n : config.compare_N)
    if (!power_of_two(n))
      config.warnings.push_back("compare.N entry " + std::to_string(n) + " is not a power of two");
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

InitialDatum make_datum(const RunConfig& c) {
  if (c.datum_kind == "zero") return InitialDatum::zero();
  if (c.datum_kind == "tabulated") {
    std::ifstream in(c.samples_file);
    if (!in) throw Error(ErrorCode::config, "cannot open samples '" + c.samples_file + "'");
    std::vector<double> xs, us;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view s = trim(line);
      if (s.empty() || s.front() == '#') continue;
      const auto comma = s.find(',');
      if (comma == std::string_view::npos) fail(line_no, "expected 'x,u' in " + c.samples_file);
      // A non-numeric first row is a header.
      double x = 0.0;
      const auto head = trim(s.substr(0, comma));
      if (xs.empty() && std::from_chars(head.data(), head.data() + head.size(), x).ec != std::errc{})
        continue;
      xs.push_back(to_double(s.substr(0, comma), line_no));
      us.push_back(to_double(s.substr(comma + 1), line_no));
    }
    return InitialDatum::tabulated(std::move(xs), std::move(us));
  }
  switch (datum_kind_from_string(c.datum_kind)) {
    case DatumKind::peakon: return InitialDatum::peakon(c.speed, c.center, c.sign);
    case DatumKind::antipeakon_pair: return InitialDatum::antipeakon_pair(c.speed, c.separation, c.center);
    case DatumKind::gaussian: return InitialDatum::gaussian(c.amplitude, c.width, c.center);
    case DatumKind::tabulated: break;
  }
  throw Error(ErrorCode::config, "unsupported datum kind");
}

GridSpec make_grid(const RunConfig& c, std::size_t n) {
  GridSpec grid;
  grid.x_lo = c.x_lo;
  grid.x_hi = c.x_hi;
  grid.n = n;
  grid.refinement = c.refinement;
  grid.edge_tol = c.edge_tol;
  return grid;
}

StepperConfig make_stepper(const RunConfig& c) {
  StepperConfig s;
  s.dt = c.dt;
  s.t_end = c.T_end;
  s.snapshot_stride = c.snapshot_stride;
  s.tol.tol_E = c.tol_E;
  s.tol.tol_F = c.tol_F;
  s.tol.tol_bound = c.tol_bound;
  s.breaking_tol = c.breaking_tol;
  return s;
}

}  // namespace novikov
