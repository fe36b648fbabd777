#include "novikov/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "novikov/characteristics.hpp"
#include "novikov/error.hpp"
#include "novikov/eulerian.hpp"
#include "novikov/integrator.hpp"
#include "novikov/lagrangian.hpp"
#include "novikov/oracle.hpp"

namespace novikov {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::size_t no_snapshots = std::numeric_limits<std::size_t>::max();

// CSV writer: header row, comma separated, %.17g.
class Csv {
 public:
  Csv(const fs::path& path, const char* header) : f_(std::fopen(path.string().c_str(), "wb")) {
    if (!f_) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    std::fprintf(f_, "%s\n", header);
  }
  ~Csv() {
    if (f_) std::fclose(f_);
  }
  Csv(const Csv&) = delete;
  Csv& operator=(const Csv&) = delete;

  template <class... T>
  void row(T... values) {
    bool first = true;
    ((std::fprintf(f_, first ? "%s" : ",%s", format(values).c_str()), first = false), ...);
    std::fputc('\n', f_);
  }

 private:
  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static std::string format(std::size_t v) { return std::to_string(v); }
  static std::string format(int v) { return std::to_string(v); }

  std::FILE* f_;
};

void write_json(const fs::path& path, const json& j) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  const std::string text = j.dump(2) + "\n";
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

fs::path prepare(const std::string& out_dir) {
  fs::path dir(out_dir.empty() ? "." : out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json verdicts_json(const MonitorVerdicts& v) {
  return json{{"energy_E", v.energy_E},       {"energy_F", v.energy_F},
              {"xi_envelope", v.xi_envelope}, {"v_bound", v.v_bound},
              {"u_bound", v.u_bound},         {"field_bounds", v.field_bounds},
              {"consistency", v.consistency}, {"monotone", v.monotone}};
}

json datum_json(const RunConfig& c) {
  json d{{"kind", c.datum_kind}};
  if (c.datum_kind == "gaussian") {
    d["amplitude"] = c.amplitude;
    d["width"] = c.width;
    d["center"] = c.center;
  } else if (c.datum_kind == "peakon") {
    d["speed"] = c.speed;
    d["crest"] = c.center;
    d["sign"] = c.sign;
  } else if (c.datum_kind == "antipeakon-pair" || c.datum_kind == "antipeakon_pair") {
    d["speed"] = c.speed;
    d["separation"] = c.separation;
    d["center"] = c.center;
  } else if (c.datum_kind == "tabulated") {
    d["file"] = c.samples_file;
  }
  return d;
}

void report_warnings(const RunConfig& c, std::ostream& diag) {
  for (const auto& w : c.warnings) diag << "warning: " << w << "\n";
}

// Integrates the datum on n points and returns the log plus the final state.
struct Outcome {
  TrajectoryLog log;
  LagrangianState final_state;
  std::optional<std::string> violation;
};

Outcome simulate(const RunConfig& c, const InitialDatum& datum, std::size_t n, StepperConfig stepper,
                 const LogObserver& extra = {}) {
  const LagrangianState initial = build_initial_state(datum, make_grid(c, n));
  Outcome out;
  out.final_state = initial;
  auto observer = [&](const LogEntry& e, const LagrangianState& s) {
    out.final_state = s;
    if (extra) extra(e, s);
  };
  try {
    out.log = integrate(initial, stepper, observer);
  } catch (const MonitorViolation& mv) {
    out.log = mv.partial();
    out.violation = mv.what();
  }
  return out;
}

std::vector<double> eval_grid(double a, double b, std::size_t points) {
  std::vector<double> xs(points);
  for (std::size_t k = 0; k < points; ++k)
    xs[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1);
  return xs;
}

struct Discrepancy {
  double linf = 0.0;
  double l2 = 0.0;
};

template <class F, class G>
Discrepancy discrepancy(const std::vector<double>& xs, F f, G g) {
  Discrepancy d;
  const double h = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double diff = std::abs(f(xs[k]) - g(xs[k]));
    d.linf = std::max(d.linf, diff);
    const double w = (k == 0 || k + 1 == xs.size()) ? 0.5 : 1.0;
    sum += w * diff * diff;
  }
  d.l2 = std::sqrt(h * sum);
  return d;
}

}  // namespace

int cmd_run(const RunConfig& c, const std::string& out_dir, std::ostream& diag) {
  report_warnings(c, diag);
  const fs::path dir = prepare(out_dir);
  const InitialDatum datum = make_datum(c);
  const EnergyPair exact = quadrature_energies(datum, c.x_lo, c.x_hi, c.N);

  StepperConfig stepper = make_stepper(c);
  stepper.keep_states = false;
  ProjectionOptions proj;
  proj.breaking_tol = c.breaking_tol;

  std::size_t snapshots = 0;
  auto write_snapshot = [&](const LogEntry&, const LagrangianState& s) {
    const EulerianSnapshot snap = project(s, proj);
    Csv csv(dir / ("snapshot_" + std::to_string(snapshots) + ".csv"), "x,u,ux,mask");
    for (std::size_t i = 0; i < snap.x.size(); ++i)
      csv.row(snap.x[i], snap.u[i], snap.ux[i], static_cast<int>(snap.ux_mask[i]));
    ++snapshots;
  };
  const Outcome run = simulate(c, datum, c.N, stepper, write_snapshot);

  std::size_t max_breaking = 0;
  {
    Csv csv(dir / "energies.csv", "T,E,F,min_xi,max_xi,breaking_count");
    for (const LogEntry& e : run.log.entries) {
      csv.row(e.T, e.E, e.F, e.min_xi, e.max_xi, e.breaking_count);
      max_breaking = std::max(max_breaking, e.breaking_count);
    }
  }

  const MonitorVerdicts& v = run.log.verdicts;
  const bool passed = !run.violation && v.all();
  json summary{
      {"command", "run"},
      {"datum", datum_json(c)},
      {"N", c.N},
      {"dt", c.dt},
      {"T_end", c.T_end},
      {"T_reached", run.log.entries.empty() ? 0.0 : run.log.entries.back().T},
      {"E0", exact.E},
      {"F0", exact.F},
      {"E0_grid", run.log.E_ref},
      {"F0_grid", run.log.F_ref},
      {"K", run.log.bounds.K},
      {"A0", run.log.bounds.A0},
      {"max_E_drift", v.max_E_drift},
      {"max_F_drift", v.max_F_drift},
      {"max_consistency_drift", v.max_consistency_drift},
      {"max_breaking_count", max_breaking},
      {"snapshots", snapshots},
      {"verdicts", verdicts_json(v)},
      {"violation", run.violation ? json(*run.violation) : json(nullptr)},
      {"warnings", c.warnings},
      {"passed", passed},
  };
  write_json(dir / "summary.json", summary);

  if (run.violation) diag << "monitor violation: " << *run.violation << "\n";
  const json verdicts = verdicts_json(v);
  for (const auto& [name, ok] : verdicts.items())
    if (!ok.get<bool>()) diag << "monitor failed: " << name << "\n";
  return passed ? exit_pass : exit_failure;
}

int cmd_trace(const RunConfig& c, const std::string& out_dir, std::ostream& diag) {
  report_warnings(c, diag);
  const fs::path dir = prepare(out_dir);
  const InitialDatum datum = make_datum(c);
  StepperConfig stepper = make_stepper(c);
  stepper.keep_states = true;
  const Outcome run = simulate(c, datum, c.N, stepper);
  if (run.violation) {
    diag << "monitor violation: " << *run.violation << "\n";
    return exit_failure;
  }

  std::vector<double> y_bars = c.trace_y_bar;
  if (y_bars.empty()) {
    // Eight starting points spread over the middle half of the window.
    for (int j = 0; j < 8; ++j) y_bars.push_back(c.x_lo + (0.25 + 0.5 * j / 7.0) * (c.x_hi - c.x_lo));
  }
  const std::vector<CharacteristicPath> paths = trace_family(run.log, y_bars, c.trace_substeps);

  const double tol = c.tol_trace > 0.0 ? c.tol_trace : 1e-4 * (1.0 + run.log.E_ref);
  const double vmax = speed_bound(run.log.bounds);
  json reports = json::array();
  bool all_ok = true;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    const CharacteristicPath& p = paths[j];
    Csv csv(dir / ("trace_" + std::to_string(j) + ".csv"), "t,beta,x,u,ucar_residual");
    double ucar = 0.0, chr = 0.0, speed = 0.0;
    for (std::size_t k = 0; k < p.t.size(); ++k) {
      csv.row(p.t[k], p.beta[k], p.x[k], p.u[k], p.ucar_residual[k]);
      ucar = std::max(ucar, std::abs(p.ucar_residual[k]));
      chr = std::max(chr, std::abs(p.char_residual[k]));
      if (k > 0 && p.t[k] > p.t[k - 1])
        speed = std::max(speed, std::abs(p.x[k] - p.x[k - 1]) / (p.t[k] - p.t[k - 1]));
    }
    const bool ok = ucar <= tol && chr <= tol && speed <= vmax * (1.0 + c.tol_bound);
    all_ok = all_ok && ok;
    reports.push_back(json{{"y_bar", p.y_bar},
                           {"x0", p.x.front()},
                           {"max_ucar_residual", ucar},
                           {"max_char_residual", chr},
                           {"max_speed", speed},
                           {"passed", ok}});
  }
  std::vector<const CharacteristicPath*> ptrs;
  for (const auto& p : paths) ptrs.push_back(&p);
  const bool ordered = paths_ordered(ptrs);

  const bool passed = all_ok && ordered;
  write_json(dir / "trace_summary.json", json{{"command", "trace"},
                                              {"datum", datum_json(c)},
                                              {"trace_tol", tol},
                                              {"speed_bound", vmax},
                                              {"paths", reports},
                                              {"non_crossing", ordered},
                                              {"passed", passed}});
  if (!ordered) diag << "traced paths cross\n";
  if (!all_ok) diag << "trace residual above " << tol << "\n";
  return passed ? exit_pass : exit_failure;
}

int cmd_compare(const RunConfig& c, const std::string& out_dir, std::ostream& diag) {
  report_warnings(c, diag);
  const fs::path dir = prepare(out_dir);
  const InitialDatum datum = make_datum(c);
  const std::vector<std::size_t> ladder = c.compare_N.empty() ? std::vector<std::size_t>{c.N} : c.compare_N;
  const std::vector<std::size_t> refs = c.compare_M.empty() ? ladder : c.compare_M;
  const bool smooth = datum.kinks().empty();
  const bool peakon = datum.kind() == DatumKind::peakon;
  const PeakonSpec spec{datum.speed(), datum.sign(), datum.center()};
  const double ref_dt = c.compare_reference_dt > 0.0 ? c.compare_reference_dt : c.dt;

  std::vector<std::string> pairs{"main_beta"};
  if (smooth) pairs.insert(pairs.end(), {"main_reference", "reference_beta"});
  if (peakon) pairs.insert(pairs.end(), {"main_exact", "beta_exact"});

  StepperConfig stepper = make_stepper(c);
  stepper.keep_states = false;
  stepper.snapshot_stride = no_snapshots;

  json levels = json::array();
  std::map<std::string, std::vector<double>> linf;
  bool ok = true;
  std::string notes;
  for (std::size_t l = 0; l < ladder.size(); ++l) {
    const std::size_t n = ladder[l];
    const Outcome run = simulate(c, datum, n, stepper);
    if (run.violation) {
      diag << "monitor violation at N = " << n << ": " << *run.violation << "\n";
      ok = false;
    }
    ProjectionOptions proj;
    proj.breaking_tol = c.breaking_tol;
    const EulerianSnapshot main = project(run.final_state, proj);

    BetaFrameConfig bc;
    bc.x_lo = c.x_lo;
    bc.x_hi = c.x_hi;
    bc.n = n;
    bc.dt = c.dt;
    bc.t_end = c.T_end;
    bc.snapshot_stride = no_snapshots;
    bc.refinement = c.refinement;
    bc.edge_tol = c.edge_tol;
    const EulerianSnapshot beta =
        to_snapshot(evolve_beta_frame(datum, bc).snapshots.back(), c.breaking_tol);

    std::optional<EulerianSnapshot> ref;
    json level{{"N", n}};
    if (smooth) {
      ReferenceConfig rc;
      rc.x_lo = c.x_lo;
      rc.x_hi = c.x_hi;
      rc.M = refs[l];
      rc.dt = ref_dt;
      rc.t_end = c.T_end;
      level["M"] = refs[l];
      try {
        ref = reference_solve(datum, rc);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::pre_breaking_only) throw;
        diag << "reference solver stopped at M = " << refs[l] << ": " << e.what() << "\n";
        level["reference_error"] = e.what();
        ok = false;
      }
    }

    const std::vector<double> xs =
        eval_grid(c.x_lo, c.x_hi, 4 * std::max(n, smooth ? refs[l] : n) + 1);
    auto f_main = [&](double x) { return sample(main, x); };
    auto f_beta = [&](double x) { return sample(beta, x); };
    auto f_ref = [&](double x) { return ref ? sample(*ref, x) : std::nan(""); };
    auto f_exact = [&](double x) { return peakon_value(spec, c.T_end, x); };

    json d = json::object();
    auto add = [&](const std::string& name, Discrepancy r) {
      d[name] = json{{"linf", number(r.linf)}, {"l2", number(r.l2)}};
      linf[name].push_back(r.linf);
    };
    add("main_beta", discrepancy(xs, f_main, f_beta));
    if (smooth) {
      add("main_reference", discrepancy(xs, f_main, f_ref));
      add("reference_beta", discrepancy(xs, f_ref, f_beta));
    }
    if (peakon) {
      add("main_exact", discrepancy(xs, f_main, f_exact));
      add("beta_exact", discrepancy(xs, f_beta, f_exact));
    }
    level["discrepancy"] = d;
    levels.push_back(level);
  }

  json ratios = json::object();
  json finest = json::object();
  for (const auto& name : pairs) {
    const std::vector<double>& e = linf[name];
    json r = json::array();
    for (std::size_t l = 0; l + 1 < e.size(); ++l) {
      const double q = e[l + 1] > 0.0 ? e[l] / e[l + 1] : std::numeric_limits<double>::infinity();
      r.push_back(number(q));
      const bool both_zero = e[l] == 0.0 && e[l + 1] == 0.0;
      if (!both_zero && !(q >= c.compare_min_ratio)) {
        diag << name << ": ratio " << q << " below " << c.compare_min_ratio << "\n";
        ok = false;
      }
    }
    ratios[name] = r;
    const double last = e.back();
    const double tol = name.find("exact") != std::string::npos ? c.tol_exact : c.tol_cross;
    const bool within = last <= tol;
    if (!within) {
      diag << name << ": finest L-inf " << last << " above " << tol << "\n";
      ok = false;
    }
    finest[name] = json{{"linf", number(last)}, {"tol", tol}, {"passed", within}};
  }

  write_json(dir / "compare.json", json{{"command", "compare"},
                                        {"datum", datum_json(c)},
                                        {"T_end", c.T_end},
                                        {"dt", c.dt},
                                        {"reference_dt", ref_dt},
                                        {"levels", levels},
                                        {"ratios", ratios},
                                        {"min_ratio", c.compare_min_ratio},
                                        {"finest", finest},
                                        {"passed", ok}});
  return ok ? exit_pass : exit_failure;
}

int cmd_perturb(const RunConfig& c, const std::string& out_dir, std::ostream& diag) {
  report_warnings(c, diag);
  const fs::path dir = prepare(out_dir);
  const InitialDatum datum = make_datum(c);
  StepperConfig stepper = make_stepper(c);
  stepper.keep_states = false;
  stepper.snapshot_stride = no_snapshots;
  ProjectionOptions proj;
  proj.breaking_tol = c.breaking_tol;

  const Outcome base = simulate(c, datum, c.N, stepper);
  bool ok = !base.violation;
  if (base.violation) diag << "monitor violation on the base run: " << *base.violation << "\n";
  const EulerianSnapshot base_snap = project(base.final_state, proj);

  const double a = c.perturb_center - c.perturb_window;
  const double b = c.perturb_center + c.perturb_window;
  const std::vector<double> xs = eval_grid(a, b, 4 * c.N + 1);

  std::vector<std::pair<double, double>> results;  // (delta, sup difference)
  json levels = json::array();
  for (double delta : c.perturb_delta) {
    const InitialDatum pert = datum.perturbed(delta, c.perturb_center, c.perturb_width);
    const Outcome run = simulate(c, pert, c.N, stepper);
    if (run.violation) {
      diag << "monitor violation at delta = " << delta << ": " << *run.violation << "\n";
      ok = false;
    }
    const EulerianSnapshot snap = project(run.final_state, proj);
    const Discrepancy d = discrepancy(
        xs, [&](double x) { return sample(snap, x); }, [&](double x) { return sample(base_snap, x); });
    results.emplace_back(delta, d.linf);
    levels.push_back(json{{"delta", delta}, {"sup_difference", d.linf}, {"l2_difference", d.l2}});
  }

  // Ordered by decreasing |delta|, the differences must decrease.
  std::vector<std::pair<double, double>> sorted = results;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& p, const auto& q) { return std::abs(p.first) > std::abs(q.first); });
  bool monotone = true;
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    const bool same = std::abs(sorted[k].first) == std::abs(sorted[k + 1].first);
    if (!same && !(sorted[k + 1].second < sorted[k].second) &&
        !(sorted[k].second == 0.0 && sorted[k + 1].second == 0.0))
      monotone = false;
  }
  if (!monotone) diag << "sup difference does not decrease with delta\n";
  ok = ok && monotone;

  write_json(dir / "perturb.json", json{{"command", "perturb"},
                                        {"datum", datum_json(c)},
                                        {"T_end", c.T_end},
                                        {"window", {a, b}},
                                        {"perturbation", {{"center", c.perturb_center},
                                                          {"width", c.perturb_width}}},
                                        {"levels", levels},
                                        {"monotone", monotone},
                                        {"passed", ok}});
  return ok ? exit_pass : exit_failure;
}

int run_command(const std::string& name, const RunConfig& config, const std::string& out_dir,
                std::ostream& diag) {
  try {
    if (name == "run") return cmd_run(config, out_dir, diag);
    if (name == "trace") return cmd_trace(config, out_dir, diag);
    if (name == "compare") return cmd_compare(config, out_dir, diag);
    if (name == "perturb") return cmd_perturb(config, out_dir, diag);
    diag << "error: unknown command '" << name << "'\n";
    return exit_config;
  } catch (const Error& e) {
    diag << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::config:
      case ErrorCode::invalid_argument:
      case ErrorCode::invalid_data:
      case ErrorCode::window_too_small:
        return exit_config;
      default:
        return exit_failure;
    }
  }
}

}  // namespace novikov
