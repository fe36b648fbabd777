#include "novikov/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "novikov/lagrangian.hpp"
#include "novikov/parallel.hpp"

namespace novikov {

namespace {

double trapezoid(const std::vector<double>& g, double h) {
  if (g.empty()) return 0.0;
  double sum = 0.5 * (g.front() + g.back());
  for (std::size_t i = 1; i + 1 < g.size(); ++i) sum += g[i];
  return g.size() == 1 ? 0.0 : sum * h;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double z : a) m = std::max(m, std::abs(z));
  return m;
}

LagrangianState axpy(const LagrangianState& s, double h, const StateDerivative& d) {
  LagrangianState out = s;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] += h * d.u[i];
    out.v[i] += h * d.v[i];
    out.xi[i] += h * d.xi[i];
    out.x[i] += h * d.x[i];
  }
  return out;
}

}  // namespace

double energy_E(const LagrangianState& state) {
  std::vector<double> g(state.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = std::sin(0.5 * state.v[i]);
    const double c = std::cos(0.5 * state.v[i]);
    const double u = state.u[i];
    g[i] = (u * u * c * c + s * s) * state.xi[i] * c * c;
  }
  return trapezoid(g, state.dy);
}

double energy_F(const LagrangianState& state) {
  std::vector<double> g(state.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s2 = std::pow(std::sin(0.5 * state.v[i]), 2);
    const double c2 = std::pow(std::cos(0.5 * state.v[i]), 2);
    const double u2 = state.u[i] * state.u[i];
    g[i] = (u2 * u2 * c2 * c2 + 2.0 * u2 * c2 * s2 - s2 * s2 / 3.0) * state.xi[i];
  }
  return trapezoid(g, state.dy);
}

AprioriBounds apriori_bounds(double E0, double F0) {
  if (!(E0 >= 0.0)) throw Error(ErrorCode::invalid_data, "E0 must be nonnegative");
  double disc = 2.0 * E0 * E0 - F0;
  // Round-off on exactly admissible data (e.g. E0 = F0 = 0).
  if (disc < 0.0 && disc > -1e-12 * std::max(1.0, 2.0 * E0 * E0)) disc = 0.0;
  if (disc < 0.0)
    throw Error(ErrorCode::invalid_data, "2 E0^2 - F0 < 0: datum is not admissible");
  AprioriBounds b;
  b.E0 = E0;
  b.F0 = F0;
  b.K = std::sqrt(3.0 * E0 * disc);
  const double e32 = std::pow(E0, 1.5);
  b.A0 = 2.0 * e32 + std::sqrt(E0) + 2.0 * (0.75 * e32 + 0.25 * b.K);
  return b;
}

LagrangianState rk4_step(const LagrangianState& state, double dt) {
  const StateDerivative k1 = rhs(state, nonlocal_fields(state));
  const LagrangianState s2 = axpy(state, 0.5 * dt, k1);
  const StateDerivative k2 = rhs(s2, nonlocal_fields(s2));
  const LagrangianState s3 = axpy(state, 0.5 * dt, k2);
  const StateDerivative k3 = rhs(s3, nonlocal_fields(s3));
  const LagrangianState s4 = axpy(state, dt, k3);
  const StateDerivative k4 = rhs(s4, nonlocal_fields(s4));

  LagrangianState out = state;
  const double w = dt / 6.0;
  parallel_for(state.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      out.u[i] += w * (k1.u[i] + 2.0 * k2.u[i] + 2.0 * k3.u[i] + k4.u[i]);
      out.v[i] += w * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
      out.xi[i] += w * (k1.xi[i] + 2.0 * k2.xi[i] + 2.0 * k3.xi[i] + k4.xi[i]);
      out.x[i] += w * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
    }
  });
  out.T = state.T + dt;
  if (has_nan(out)) {
    std::ostringstream msg;
    msg << "non-finite value after step to T = " << out.T;
    throw Error(ErrorCode::nan_detected, msg.str());
  }
  return out;
}

void validate(const StepperConfig& config, const AprioriBounds& bounds) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt))
    throw Error(ErrorCode::config, "dt must be positive and finite");
  if (!std::isfinite(config.t_end)) throw Error(ErrorCode::config, "t_end must be finite");
  if (config.snapshot_stride < 1) throw Error(ErrorCode::config, "snapshot_stride must be >= 1");
  if (config.dt * bounds.A0 > 0.5) {
    std::ostringstream msg;
    msg << "dt * A0 = " << config.dt * bounds.A0 << " exceeds 0.5 (A0 = " << bounds.A0 << ")";
    throw Error(ErrorCode::config, msg.str());
  }
}

namespace {

constexpr double kJumpCell = 0.5;  // |v_{i+1} - v_i| marking a kink cell

LogEntry measure(const LagrangianState& s, const TrajectoryLog& log, bool keep) {
  LogEntry e;
  e.T = s.T;
  e.E = energy_E(s);
  e.F = energy_F(s);
  e.min_xi = *std::min_element(s.xi.begin(), s.xi.end());
  e.max_xi = *std::max_element(s.xi.begin(), s.xi.end());
  e.breaking_count = count_breaking_runs(s, log.breaking_tol);
  for (std::size_t i = 0; i < s.size(); ++i) {
    e.sup_u2 = std::max(e.sup_u2, s.u[i] * s.u[i]);
    e.max_abs_v = std::max(e.max_abs_v, std::abs(s.v[i]));
    const double c = std::cos(0.5 * s.v[i]);
    if (c * c >= log.breaking_tol) e.max_abs_ux = std::max(e.max_abs_ux, std::abs(std::tan(0.5 * s.v[i])));
  }
  const NonlocalFields f = nonlocal_fields(s);
  e.max_p1 = max_abs(f.p1);
  e.max_dx_p1 = max_abs(f.dx_p1);
  e.max_p2 = max_abs(f.p2);
  e.max_dx_p2 = max_abs(f.dx_p2);
  const std::vector<double> defect = consistency_defect(s);
  for (std::size_t i = 0; i < defect.size() && i < log.initial_defect.size(); ++i)
    if (!std::isnan(log.initial_defect[i]))
      e.consistency_drift = std::max(e.consistency_drift, std::abs(defect[i] - log.initial_defect[i]));
  e.min_dx = s.size() > 1 ? s.x[1] - s.x[0] : 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) e.min_dx = std::min(e.min_dx, s.x[i + 1] - s.x[i]);
  if (keep) e.state = std::make_shared<const LagrangianState>(s);
  return e;
}

// Tight a-priori checks (recorded), then hard failures (thrown).
void check(const LogEntry& e, TrajectoryLog& log, double T0) {
  const AprioriBounds& b = log.bounds;
  const double slack = 1.0 + log.tol.tol_bound;
  const double tau = e.T - T0;
  MonitorVerdicts& v = log.verdicts;

  const double e_drift = log.E_ref > 0.0 ? std::abs(e.E - log.E_ref) / log.E_ref : std::abs(e.E);
  const double f_drift = std::abs(e.F - log.F_ref);
  v.max_E_drift = std::max(v.max_E_drift, e_drift);
  v.max_F_drift = std::max(v.max_F_drift, f_drift);
  v.max_consistency_drift = std::max(v.max_consistency_drift, e.consistency_drift);
  const bool e_ok = log.E_ref > 0.0 ? e_drift <= log.tol.tol_E : std::abs(e.E) <= log.tol.tol_E;
  const bool f_ok = f_drift <= log.tol.tol_F * std::max(1.0, std::abs(log.F_ref));
  v.energy_E = v.energy_E && e_ok;
  v.energy_F = v.energy_F && f_ok;

  const double grow = std::exp(b.A0 * tau);
  v.xi_envelope = v.xi_envelope && e.min_xi >= (1.0 / grow) * (1.0 - log.tol.tol_bound) &&
                  e.max_xi <= grow * slack;
  v.v_bound = v.v_bound && e.max_abs_v <= log.v0_max + b.A0 * tau + log.tol.tol_bound;
  v.u_bound = v.u_bound && e.sup_u2 <= b.E0 * slack + 1e-300;
  const double p1_cap = 0.75 * std::pow(b.E0, 1.5) * slack;
  const double p2_cap = 0.25 * b.K * slack;
  v.field_bounds = v.field_bounds && e.max_p1 <= p1_cap + 1e-300 && e.max_dx_p1 <= p1_cap + 1e-300 &&
                   e.max_p2 <= p2_cap + 1e-300 && e.max_dx_p2 <= p2_cap + 1e-300;
  v.consistency = v.consistency && e.consistency_drift <= log.tol_consistency * (1.0 + e.max_xi);
  v.monotone = v.monotone && e.min_dx >= -log.eps_mono;

  std::ostringstream msg;
  if (!e_ok) {
    msg << "E drift " << e_drift << " exceeds tol_E " << log.tol.tol_E << " at T = " << e.T;
  } else if (!f_ok) {
    msg << "F drift " << f_drift << " exceeds tol_F at T = " << e.T;
  } else if (e.min_xi < 0.5 / grow || e.max_xi > 2.0 * grow) {
    msg << "xi = [" << e.min_xi << ", " << e.max_xi << "] left [e^{-A0 T}/2, 2 e^{A0 T}] at T = "
        << e.T;
  }
  if (!msg.str().empty()) throw MonitorViolation(msg.str(), log);
}

}  // namespace

TrajectoryLog integrate(const LagrangianState& state, const StepperConfig& config,
                        const LogObserver& observer) {
  TrajectoryLog log;
  log.tol = config.tol;
  log.breaking_tol = config.breaking_tol;
  log.E_ref = energy_E(state);
  log.F_ref = energy_F(state);
  log.bounds = config.bounds ? *config.bounds : apriori_bounds(log.E_ref, log.F_ref);
  validate(config, log.bounds);
  if (has_nan(state)) throw Error(ErrorCode::nan_detected, "initial state holds non-finite values");

  log.v0_max = max_abs(state.v);
  log.tol_consistency = 1e-6;
  log.eps_mono = 1e-12 * std::max(1.0, std::abs(state.x.back() - state.x.front()));
  log.initial_defect = consistency_defect(state);
  // Cells holding a jump of v at T0 (kinks of u0) stay jump cells; the cell
  // identity is not resolved there nor in the neighbours whose end corrections
  // reach across the jump, so those are left out of the drift.
  {
    std::vector<double>& d = log.initial_defect;
    std::vector<std::size_t> jumps;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (std::abs(state.v[i + 1] - state.v[i]) > kJumpCell) jumps.push_back(i);
    for (std::size_t i : jumps)
      for (std::size_t j = i > 0 ? i - 1 : 0; j <= i + 1 && j < d.size(); ++j) d[j] = std::nan("");
  }

  const double T0 = state.T;
  auto record = [&](const LagrangianState& s) {
    LogEntry e = measure(s, log, config.keep_states);
    log.entries.push_back(e);
    check(log.entries.back(), log, T0);
    if (observer) observer(log.entries.back(), s);
  };

  record(state);
  const double span = config.t_end - T0;
  const std::size_t steps =
      span > 0.0 ? static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9)) : 0;
  LagrangianState s = state;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double h = k == steps ? config.t_end - s.T : config.dt;
    s = rk4_step(s, h);
    if (k == steps) s.T = config.t_end;
    if (k % config.snapshot_stride == 0 || k == steps) record(s);
  }
  return log;
}

}  // namespace novikov
