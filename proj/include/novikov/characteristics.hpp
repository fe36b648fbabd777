#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "novikov/datum.hpp"
#include "novikov/eulerian.hpp"
#include "novikov/integrator.hpp"
#include "novikov/state.hpp"

namespace novikov {

/// beta = x + mu(-inf, x) + theta * mu({x}).
struct BetaCoordinate {
  double t = 0.0;
  double x = 0.0;
  double beta = 0.0;
  double theta = 0.0;    // position inside an atom; 0 off plateaus
  bool on_atom = false;
};

/// beta at a physical point. Off plateaus mu(-inf, x) interpolates the cumulative
/// trapezoid of xi sin^4(v/2) dY; a query on a plateau gets theta = 1/2, since x
/// alone does not locate a label inside the atom. Throws out_of_window.
BetaCoordinate beta_of_x(const LagrangianState& state, double x_query,
                         const ProjectionOptions& options = {});

/// beta of the characteristic with label Y; theta is linear in Y across a plateau.
BetaCoordinate beta_of_label(const LagrangianState& state, double Y,
                             const ProjectionOptions& options = {});

/// G(beta) = int_{-inf}^{x(beta)} [2 u u_x + 4 u^3 u_x^3 - 4 u_x^3 (P1 + dx P2)] dx,
/// integrated in Y. transport is the 2 u u_x part (exactly u^2 in the continuum),
/// source the rest.
struct GValue {
  double total = 0.0;
  double transport = 0.0;
  double source = 0.0;
};

GValue G_eval(const LagrangianState& state, double beta);

/// Per-state lookup by beta, built once and shared by every path at that time.
class BetaTable {
 public:
  explicit BetaTable(const LagrangianState& state);

  struct Point {
    double Y = 0.0;
    double x = 0.0;
    double u = 0.0;
    double v = 0.0;
    double G = 0.0;
    double G_transport = 0.0;
    double ucar_rate = 0.0;  // dx P1 + P2
  };

  /// Linear interpolation between the nodes bracketing beta; out_of_window
  /// outside [beta_min, beta_max]. In a cell where v jumps (a datum kink, which
  /// stays between the same two labels), G, u and the ucar rate are extended
  /// from each side up to the cell's midpoint instead, so the kink is resolved
  /// to second order rather than cut by a chord.
  Point at_beta(double beta) const;
  double beta_min() const { return beta_.front(); }
  double beta_max() const { return beta_.back(); }
  double T() const { return T_; }

 private:
  double T_ = 0.0;
  double y0_ = 0.0;
  double dy_ = 1.0;
  std::vector<double> beta_, x_, u_, v_, G_, Gt_, rate_;
  std::vector<std::uint8_t> kink_;  // per cell
};

struct CharacteristicPath {
  double y_bar = 0.0;
  std::vector<double> t;
  std::vector<double> beta;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> ucar_residual;  // u(t) - u(0) + int_0^t (dx P1 + P2) ds
  std::vector<double> char_residual;  // x(t) - x(0) - int_0^t u^2 ds
};

/// RK4 on d beta/dt = G(t, beta), G linear in t between logged states, with
/// `substeps` RK4 steps per log interval. Needs keep_states. Throws
/// out_of_window when y_bar or the path leaves the grid.
CharacteristicPath trace(const TrajectoryLog& log, double y_bar, std::size_t substeps = 1);

/// Independent paths traced in parallel over the same log.
std::vector<CharacteristicPath> trace_family(const TrajectoryLog& log,
                                             const std::vector<double>& y_bars,
                                             std::size_t substeps = 1);

/// True if paths sorted by y_bar keep x(t) nondecreasing at every logged time.
bool paths_ordered(std::vector<const CharacteristicPath*> paths);

/// C_S = 4 E0^{3/2} K + 4 K (3/4 E0^{3/2} + K/4), the L^1 bound on the mu source.
double source_bound(const AprioriBounds& bounds);

/// E0 + C_S, the Lipschitz constant of t -> x(t) along a characteristic.
double speed_bound(const AprioriBounds& bounds);

struct BetaFrameConfig {
  double x_lo = -10.0;
  double x_hi = 10.0;
  std::size_t n = 1024;
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t snapshot_stride = 1;
  int refinement = 8;
  double edge_tol = 1e-12;
  bool align_kinks = true;
};

/// Particles in the (t, beta) frame.
struct BetaFrameState {
  double t = 0.0;
  std::vector<double> beta;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> v;
};

struct BetaFrameSolution {
  std::vector<BetaFrameState> snapshots;
};

/// Initial particles at uniform beta over the window, beta(x) = x + int_{x_lo}^x u0'^4.
BetaFrameState initial_beta_frame(const InitialDatum& datum, const BetaFrameConfig& config);

/// P1, dx P1, P2, dx P2 from their beta representations: kernel density
/// cos^4/(sin^4 + cos^4) and sweeps over the (nonuniform) beta cells, with the
/// same kink corrections as the (T, Y) fields.
NonlocalFields beta_frame_fields(const BetaFrameState& state);

/// RK4 on (beta, x, u, v):
///   beta_t = G, x_t = u^2, u_t = -(dx P1 + P2),
///   v_t = 2 (u^3 - P1 - dx P2) cos^2(v/2) - u sin^2(v/2).
BetaFrameSolution evolve_beta_frame(const InitialDatum& datum, const BetaFrameConfig& config);

/// Physical profile of a beta-frame state, merged like project().
EulerianSnapshot to_snapshot(const BetaFrameState& state, double breaking_tol = 1e-8);

}  // namespace novikov
