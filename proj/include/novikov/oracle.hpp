#pragma once

#include <cstddef>

#include "novikov/datum.hpp"
#include "novikov/eulerian.hpp"
#include "novikov/lagrangian.hpp"
#include "novikov/state.hpp"

namespace novikov {

/// u = sign * sqrt(c) * exp(-|x - c t - x0|).
struct PeakonSpec {
  double c = 1.0;
  int sign = 1;
  double x0 = 0.0;
};

double peakon_value(const PeakonSpec& spec, double t, double x);

/// The four fields by literal double sums over the grid, with the kernel
/// distance recomputed here. Same quadrature rule as nonlocal_fields, none of
/// its code. O(N^2); parallel over output points.
NonlocalFields direct_convolution_fields(const LagrangianState& state,
                                         FieldQuadrature rule = FieldQuadrature::corrected);

struct ReferenceConfig {
  double x_lo = -12.0;
  double x_hi = 12.0;
  std::size_t M = 1024;
  double dt = 2.5e-3;
  double t_end = 0.5;
  double blowup_factor = 1e3;  // abort once max|u_x| exceeds this times its start value
};

/// Method of lines in physical space: u_t = -u^2 u_x - dx P1 - P2 on a uniform
/// grid of M points, centered differences for u_x (zero outside the window),
/// P-convolutions by direct trapezoid sums, RK4 in time. Valid before breaking
/// only: throws pre_breaking_only on gradient blow-up.
EulerianSnapshot reference_solve(const InitialDatum& datum, const ReferenceConfig& config);

struct EnergyPair {
  double E = 0.0;
  double F = 0.0;
};

/// int (u0^2 + u0'^2) and int (u0^4 + 2 u0^2 u0'^2 - u0'^4 / 3) over the window.
/// The window is split at the datum's kinks and each piece integrated by
/// Romberg extrapolation of trapezoid sums, starting from 8x the grid density of
/// n points.
EnergyPair quadrature_energies(const InitialDatum& datum, double x_lo, double x_hi,
                               std::size_t n = 4096);

}  // namespace novikov
