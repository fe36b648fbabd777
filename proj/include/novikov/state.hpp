#pragma once

#include <cstddef>
#include <vector>

namespace novikov {

/// Unknowns of the semi-linear system on a uniform characteristic grid
/// Y_i = y0 + i*dy, plus the physical position x(T, Y_i).
///
/// v is kept unwrapped; the dynamics are 2*pi periodic in v.
struct LagrangianState {
  double T = 0.0;
  double y0 = 0.0;
  double dy = 1.0;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> xi;
  std::vector<double> x;

  std::size_t size() const noexcept { return u.size(); }
  double Y(std::size_t i) const noexcept { return y0 + static_cast<double>(i) * dy; }
  double y_span() const noexcept {
    return size() > 1 ? dy * static_cast<double>(size() - 1) : 0.0;
  }
};

/// P1, dx P1, P2, dx P2 sampled on the state's grid.
struct NonlocalFields {
  std::vector<double> p1;
  std::vector<double> dx_p1;
  std::vector<double> p2;
  std::vector<double> dx_p2;
};

/// Time derivatives of (u, v, xi, x).
struct StateDerivative {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> xi;
  std::vector<double> x;
};

/// Constants of the a-priori estimates, all derived from the two conserved energies.
struct AprioriBounds {
  double E0 = 0.0;
  double F0 = 0.0;
  double K = 0.0;   // bound on the L^3 norm of u_x cubed
  double A0 = 0.0;  // growth rate for xi and v
};

}  // namespace novikov
