#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "novikov/datum.hpp"
#include "novikov/state.hpp"

namespace novikov {

/// Window and resolution used to build the characteristic grid.
struct GridSpec {
  double x_lo = -10.0;
  double x_hi = 10.0;
  std::size_t n = 1024;
  int refinement = 8;       // fine x samples per Y cell for the Y(x) quadrature
  double edge_tol = 1e-12;  // relative to max|u0|
  bool align_kinks = true;  // put datum kinks at cell midpoints
};

GridSpec symmetric_grid(double half_width, std::size_t n);

/// Characteristic grid for u0: Y(x) = int_0^x (1 + u0'^2)^2, sampled uniformly
/// in Y and inverted back to x(0, Y_i). xi starts at 1. Y = 0 at x = 0 when the
/// window contains the origin.
///
/// A kink of u0 makes v jump across its characteristic, which never moves in Y.
/// With align_kinks the outermost kinks sit at cell midpoints, where the
/// trapezoid rule stays second order across the jump; the grid may then reach
/// up to one cell past the window, into vacuum.
LagrangianState build_initial_state(const InitialDatum& datum, const GridSpec& grid);
LagrangianState build_initial_state(const InitialDatum& datum, double half_width, std::size_t n);

/// Quadrature behind the kernel distance and the field integrals.
///
/// trapezoid: composite trapezoid throughout.
/// corrected: trapezoid plus the h^2 Euler-Maclaurin terms coming from the kink of
/// e^{-|A(Y) - A(Ybar)|} at Ybar = Y and from the distance accumulator; fourth
/// order for smooth states. Same two sweeps, O(N) extra work.
enum class FieldQuadrature { trapezoid, corrected };

/// Second-order centered difference, one-sided at the two ends.
std::vector<double> centered_difference(std::span<const double> f, double h);

/// Cumulative integral of xi cos^4(v/2) from Y_0; the exponent of the kernel.
/// Nondecreasing under both rules.
std::vector<double> kernel_distance(const LagrangianState& state,
                                    FieldQuadrature rule = FieldQuadrature::corrected);

/// Forward/backward exponential recursions.
///
/// With cell[i] the width between nodes i and i+1 and dist nondecreasing,
///   fwd_i = sum_{j<=i} w_j e^{-(dist_i - dist_j)} f_j   (trapezoid on [0, i])
///   bwd_i = sum_{j>=i} w_j e^{-(dist_j - dist_i)} f_j   (trapezoid on [i, n-1])
/// Each is a single sequential pass.
void exponential_sweeps(std::span<const double> decay, std::span<const double> cell,
                        std::span<const double> f, std::span<double> fwd,
                        std::span<double> bwd);

/// e^{-(dist_{i+1} - dist_i)} for each cell.
std::vector<double> cell_decay(std::span<const double> dist);

/// P1 and P2 with their x-derivatives, evaluated by two O(N) sweeps per field.
/// Outside the grid the state is vacuum (u = 0, v = 0, xi = 1).
NonlocalFields nonlocal_fields(const LagrangianState& state,
                              FieldQuadrature rule = FieldQuadrature::corrected);

/// Right-hand side of the semi-linear system, with x_T = u^2.
StateDerivative rhs(const LagrangianState& state, const NonlocalFields& fields);

/// Number of maximal index runs with cos^2(v/2) < breaking_tol.
std::size_t count_breaking_runs(const LagrangianState& state, double breaking_tol);

/// Cellwise defect of the identity u_Y = xi sin v cos^2(v/2) / 2:
/// |(u_{i+1} - u_i) - Q_i(g)| / dy with Q_i the endpoint-corrected trapezoid of
/// g = xi sin v cos^2(v/2) / 2 over cell i.
std::vector<double> consistency_defect(const LagrangianState& state);

/// True if any array of the state holds a NaN or infinity.
bool has_nan(const LagrangianState& state);

}  // namespace novikov
