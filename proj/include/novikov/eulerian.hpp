#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "novikov/integrator.hpp"
#include "novikov/state.hpp"

namespace novikov {

/// Thresholds shared by the physical-space diagnostics. Negative values mean
/// "derive from the state" (1e-12 * grid span, 1e-6 * (1 + max xi)).
struct ProjectionOptions {
  double breaking_tol = 1e-8;
  double eps_mono = -1.0;
  double tol_consistency = -1.0;
};

/// Run of source indices [first, last] collapsed to a single physical point.
/// folded marks a run where x went backwards by more than eps_mono, which only
/// discretization error can produce; see project().
struct PlateauInterval {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t point = 0;  // index into the snapshot arrays
  bool folded = false;
};

struct EulerianSnapshot {
  double t = 0.0;
  std::vector<double> x;  // strictly increasing
  std::vector<double> u;
  std::vector<double> ux;            // NaN where undefined
  std::vector<std::uint8_t> ux_mask; // 1 where ux is defined
  std::vector<PlateauInterval> plateaus;
};

/// Physical-space profile of a state. A point is merged into the group of the
/// last kept point while it does not exceed that point's x by more than
/// eps_mono; u is averaged over the group. ux = tan(v/2) where cos^2(v/2) >
/// breaking_tol on single points, masked on merged points. Throws
/// consistency_failure if u varies on a flat group by more than
/// tol_consistency. Folded groups sit at the leading x and skip that check:
/// there u legitimately varies with the label and only the order of x is wrong.
EulerianSnapshot project(const LagrangianState& state, const ProjectionOptions& options = {});

/// Linear interpolation of u; zero outside the snapshot's span (vacuum).
double sample(const EulerianSnapshot& snapshot, double x);

struct MeasureReport {
  double a = 0.0;
  double b = 0.0;
  double mu_mass = 0.0;
  double mu_ac = 0.0;
  double mu_sing = 0.0;
  double nu_mass = 0.0;
};

/// mu and nu restricted to (a, b). mu_mass integrates xi sin^4(v/2) over the Y
/// cells mapped into (a, b), a straddling cell weighted by its share in x; mu_sing is the part on merged plateaus; mu_ac is
/// int u_x^4 dx from the projected profile, skipping masked points.
/// nu_mass = int (u^4 + 2 u^2 u_x^2) dx - mu_mass / 3, with the first integral
/// taken in Y so that it stays exact across plateaus.
MeasureReport measure_mu(const LagrangianState& state, double a, double b,
                         const ProjectionOptions& options = {});

struct BreakingInterval {
  std::size_t first = 0;
  std::size_t last = 0;
  double y_lo = 0.0;
  double y_hi = 0.0;
  double x = 0.0;
  double min_abs_u = 0.0;
};

/// Maximal index runs with cos^2(v/2) < breaking_tol.
std::vector<BreakingInterval> detect_breaking(const LagrangianState& state, double breaking_tol);

/// phi(t, x) = (1 - r^2)^3 for r^2 = ((t - t0)/rt)^2 + ((x - x0)/rx)^2 < 1, else 0.
struct BumpTestFunction {
  double t0 = 0.0;
  double x0 = 0.0;
  double rt = 1.0;
  double rx = 1.0;

  double value(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;
};

/// |int int {-u_x (phi_t + u^2 phi_x) + (-3/2 u u_x^2 - u^3 + P1 + dx P2) phi} dx dt
///  - int u0_x phi(0, x) dx|, evaluated in characteristic variables on the logged
/// states (trapezoid in Y, trapezoid in T over the log). Needs keep_states.
/// Throws out_of_window if the support leaves the grid or the logged time span.
double weak_form_residual(const TrajectoryLog& log, const BumpTestFunction& phi);

/// |int int (phi_t + u^2 phi_x) dmu dt + int int (4 u^3 u_x^3 - 4 u_x^3 (P1 + dx P2)) phi dx dt
///  + int u0_x^4 phi(0, x) dx|, evaluated like weak_form_residual.
double measure_balance_residual(const TrajectoryLog& log, const BumpTestFunction& phi);

/// max |u(x_i) - u(x_j)| / |x_i - x_j|^{3/4} over deterministic stratified pairs:
/// index offsets on a geometric ladder, starting points spread evenly, at least
/// min_pairs pairs (or all pairs when fewer exist).
double holder_quotient(const EulerianSnapshot& snapshot, std::size_t min_pairs = 10000);

}  // namespace novikov
