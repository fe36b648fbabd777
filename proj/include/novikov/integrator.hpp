#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "novikov/error.hpp"
#include "novikov/state.hpp"

namespace novikov {

/// First conserved energy in characteristic variables,
/// int (u^2 cos^2(v/2) + sin^2(v/2)) xi cos^2(v/2) dY.
double energy_E(const LagrangianState& state);

/// Second conserved energy,
/// int (u^4 cos^4(v/2) + 2 u^2 cos^2(v/2) sin^2(v/2) - sin^4(v/2)/3) xi dY.
double energy_F(const LagrangianState& state);

/// K = sqrt(3 E0 (2 E0^2 - F0)) and the xi/v growth rate
/// A0 = 2 E0^{3/2} + E0^{1/2} + 2 (3/4 E0^{3/2} + K/4).
/// Throws invalid_data when 2 E0^2 - F0 < 0.
AprioriBounds apriori_bounds(double E0, double F0);

/// One classical RK4 step; nonlocal fields are recomputed at every stage.
LagrangianState rk4_step(const LagrangianState& state, double dt);

struct MonitorTolerances {
  double tol_E = 1e-6;      // relative to E(0)
  double tol_F = 1e-5;      // relative to max(1, |F(0)|)
  double tol_bound = 1e-3;  // slack on the a-priori inequalities
};

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t snapshot_stride = 1;
  MonitorTolerances tol;
  double breaking_tol = 1e-8;  // on cos^2(v/2)
  bool keep_states = true;
  /// Overrides the bounds derived from the initial state's energies.
  std::optional<AprioriBounds> bounds;
};

/// Throws config if dt, t_end or the stride are unusable, or if dt * A0 > 0.5.
void validate(const StepperConfig& config, const AprioriBounds& bounds);

struct LogEntry {
  double T = 0.0;
  double E = 0.0;
  double F = 0.0;
  double min_xi = 0.0;
  double max_xi = 0.0;
  std::size_t breaking_count = 0;
  double sup_u2 = 0.0;
  double max_p1 = 0.0;
  double max_dx_p1 = 0.0;
  double max_p2 = 0.0;
  double max_dx_p2 = 0.0;
  double max_abs_v = 0.0;
  double max_abs_ux = 0.0;          // over points with cos^2(v/2) >= breaking_tol
  double consistency_drift = 0.0;   // growth of the u_Y defect since T = 0
  double min_dx = 0.0;              // min_i x_{i+1} - x_i
  std::shared_ptr<const LagrangianState> state;
};

/// Pass/fail of each a-priori monitor over the whole run, plus the worst values seen.
struct MonitorVerdicts {
  bool energy_E = true;
  bool energy_F = true;
  bool xi_envelope = true;
  bool v_bound = true;
  bool u_bound = true;
  bool field_bounds = true;
  bool consistency = true;
  bool monotone = true;
  double max_E_drift = 0.0;  // relative
  double max_F_drift = 0.0;  // absolute
  double max_consistency_drift = 0.0;

  bool all() const noexcept {
    return energy_E && energy_F && xi_envelope && v_bound && u_bound && field_bounds &&
           consistency && monotone;
  }
};

struct TrajectoryLog {
  AprioriBounds bounds;
  MonitorTolerances tol;
  double breaking_tol = 1e-8;
  double E_ref = 0.0;
  double F_ref = 0.0;
  double v0_max = 0.0;
  double tol_consistency = 0.0;  // the bound at an entry is tol_consistency * (1 + max xi)
  double eps_mono = 0.0;
  std::vector<double> initial_defect;  // NaN on cells that hold a jump of v at T0
  std::vector<LogEntry> entries;
  MonitorVerdicts verdicts;
};

/// Raised by integrate when E or F drift or xi leaves its envelope; carries the
/// log up to and including the offending entry.
class MonitorViolation : public Error {
 public:
  MonitorViolation(const std::string& what, TrajectoryLog partial)
      : Error(ErrorCode::monitor_violation, what), partial_(std::move(partial)) {}
  const TrajectoryLog& partial() const noexcept { return partial_; }

 private:
  TrajectoryLog partial_;
};

/// Called after each logged entry with the state it was measured on.
using LogObserver = std::function<void(const LogEntry&, const LagrangianState&)>;

/// Repeated rk4_step from state.T to config.t_end. Entries are logged at T0,
/// every snapshot_stride steps and at t_end.
TrajectoryLog integrate(const LagrangianState& state, const StepperConfig& config,
                        const LogObserver& observer = {});

}  // namespace novikov
