#include "novikov/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "novikov/error.hpp"
#include "novikov/parallel.hpp"
#include "label_grid.hpp"

namespace novikov {

GridSpec symmetric_grid(double half_width, std::size_t n) {
  GridSpec g;
  g.x_lo = -half_width;
  g.x_hi = half_width;
  g.n = n;
  return g;
}

LagrangianState build_initial_state(const InitialDatum& datum, double half_width, std::size_t n) {
  return build_initial_state(datum, symmetric_grid(half_width, n));
}

LagrangianState build_initial_state(const InitialDatum& datum, const GridSpec& grid) {
  if (grid.n < 16) throw Error(ErrorCode::invalid_argument, "grid needs at least 16 points");
  if (!(grid.x_hi > grid.x_lo)) throw Error(ErrorCode::invalid_argument, "empty x window");
  if (grid.refinement < 8) throw Error(ErrorCode::invalid_argument, "refinement must be >= 8");

  const std::size_t m = static_cast<std::size_t>(grid.refinement) * (grid.n - 1) + 1;
  const double hf = (grid.x_hi - grid.x_lo) / static_cast<double>(m - 1);
  std::vector<double> xf(m), yc(m);
  double umax = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    xf[k] = k + 1 == m ? grid.x_hi : grid.x_lo + static_cast<double>(k) * hf;
    umax = std::max(umax, std::abs(datum.value(xf[k])));
  }
  const double edge = std::max(std::abs(datum.value(grid.x_lo)), std::abs(datum.value(grid.x_hi)));
  if (umax > 0.0 && !(edge < grid.edge_tol * umax))
    throw Error(ErrorCode::window_too_small,
                "datum does not decay inside the window: edge value " + std::to_string(edge) +
                    " vs max " + std::to_string(umax));

  // Y(x) by cumulative trapezoid of (1 + u0'^2)^2 on the fine grid.
  // At a kink the slope convention (mean of one-sided slopes) does not give the
  // mean density, so average the one-sided densities instead.
  const std::vector<double> kinks = datum.kinks();
  const double kink_eps = 1e-10 * (grid.x_hi - grid.x_lo);
  auto density_at = [&](double x) {
    const double d = datum.slope(x);
    return (1.0 + d * d) * (1.0 + d * d);
  };
  auto density = [&](double x) {
    for (double xk : kinks)
      if (std::abs(x - xk) <= kink_eps)
        return 0.5 * (density_at(xk - 10.0 * kink_eps) + density_at(xk + 10.0 * kink_eps));
    return density_at(x);
  };
  double rho_prev = density(xf[0]);
  yc[0] = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    const double rho = density(xf[k]);
    yc[k] = yc[k - 1] + 0.5 * (xf[k] - xf[k - 1]) * (rho_prev + rho);
    if (!(yc[k] > yc[k - 1]))
      throw Error(ErrorCode::non_monotone, "Y(x) is not increasing (NaN in datum?)");
    rho_prev = rho;
  }

  auto y_of_x = [&](double x) {
    const auto it = std::upper_bound(xf.begin(), xf.end(), x);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - xf.begin()), m - 1) - 1;
    const double w = (x - xf[k]) / (xf[k + 1] - xf[k]);
    return (1.0 - w) * yc[k] + w * yc[k + 1];
  };

  // Labels in the fine-quadrature frame, where Y(x_lo) = 0.
  const std::size_t n = grid.n;
  const double span = yc[m - 1];
  std::vector<double> ky;
  if (grid.align_kinks)
    for (double xk : kinks)
      if (grid.x_lo < xk && xk < grid.x_hi) ky.push_back(y_of_x(xk));
  const detail::LabelGrid labels = detail::uniform_labels(span, n, ky);
  const double start = labels.start;
  const double dy = labels.step;

  LagrangianState s;
  s.T = 0.0;
  s.y0 = start - y_of_x(std::clamp(0.0, grid.x_lo, grid.x_hi));
  if (!(grid.x_lo <= 0.0 && 0.0 <= grid.x_hi)) s.y0 = start;
  s.dy = dy;
  s.u.resize(n);
  s.v.resize(n);
  s.xi.assign(n, 1.0);
  s.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = start + static_cast<double>(i) * dy;
    double x;
    if (ky.empty() && i == 0) {
      x = grid.x_lo;
    } else if (ky.empty() && i + 1 == n) {
      x = grid.x_hi;
    } else if (target <= 0.0) {
      x = grid.x_lo + target;  // vacuum beyond the window: Y_x = 1
    } else if (target >= span) {
      x = grid.x_hi + (target - span);
    } else {
      const auto it = std::upper_bound(yc.begin(), yc.end(), target);
      const std::size_t k = static_cast<std::size_t>(it - yc.begin()) - 1;
      const double w = (target - yc[k]) / (yc[k + 1] - yc[k]);
      x = xf[k] + w * (xf[k + 1] - xf[k]);
    }
    s.x[i] = x;
    s.u[i] = datum.value(x);
    s.v[i] = 2.0 * std::atan(datum.slope(x));
  }
  return s;
}

std::vector<double> centered_difference(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (f[1] - f[0]) / h;
  d[n - 1] = (f[n - 1] - f[n - 2]) / h;
  return d;
}

std::vector<double> kernel_distance(const LagrangianState& state, FieldQuadrature rule) {
  const std::size_t n = state.size();
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(0.5 * state.v[i]);
    a[i] = state.xi[i] * c * c * c * c;
  }
  std::vector<double> dist(n, 0.0);
  if (rule == FieldQuadrature::trapezoid) {
    for (std::size_t i = 1; i < n; ++i) dist[i] = dist[i - 1] + 0.5 * state.dy * (a[i - 1] + a[i]);
    return dist;
  }
  // Trapezoid minus the h^2/12 endpoint term; increments clamped at zero so
  // the kernel never grows.
  const std::vector<double> da = centered_difference(a, state.dy);
  const double k = state.dy * state.dy / 12.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double step = 0.5 * state.dy * (a[i - 1] + a[i]) - k * (da[i] - da[i - 1]);
    dist[i] = dist[i - 1] + std::max(step, 0.0);
  }
  return dist;
}

std::vector<double> cell_decay(std::span<const double> dist) {
  std::vector<double> decay(dist.size() > 0 ? dist.size() - 1 : 0);
  parallel_for(decay.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) decay[i] = std::exp(-(dist[i + 1] - dist[i]));
  });
  return decay;
}

void exponential_sweeps(std::span<const double> decay, std::span<const double> cell,
                        std::span<const double> f, std::span<double> fwd, std::span<double> bwd) {
  const std::size_t n = f.size();
  if (n == 0) return;
  fwd[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double half = 0.5 * cell[i - 1];
    fwd[i] = decay[i - 1] * (fwd[i - 1] + half * f[i - 1]) + half * f[i];
  }
  bwd[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double half = 0.5 * cell[i];
    bwd[i] = decay[i] * (bwd[i + 1] + half * f[i + 1]) + half * f[i];
  }
}

NonlocalFields nonlocal_fields(const LagrangianState& state, FieldQuadrature rule) {
  const std::size_t n = state.size();
  std::vector<double> f1(n), f2(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double u = state.u[i];
      const double s = std::sin(0.5 * state.v[i]);
      const double c = std::cos(0.5 * state.v[i]);
      const double sinv = 2.0 * s * c;
      f1[i] = (0.375 * u * sinv * sinv + u * u * u * c * c * c * c) * state.xi[i];
      f2[i] = state.xi[i] * sinv * s * s;
    }
  });
  const std::vector<double> decay = cell_decay(kernel_distance(state, rule));
  const std::vector<double> cell(n > 0 ? n - 1 : 0, state.dy);

  std::vector<double> fwd1(n), bwd1(n), fwd2(n), bwd2(n);
  exponential_sweeps(decay, cell, f1, fwd1, bwd1);
  exponential_sweeps(decay, cell, f2, fwd2, bwd2);

  NonlocalFields out;
  out.p1.resize(n);
  out.dx_p1.resize(n);
  out.p2.resize(n);
  out.dx_p2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.p1[i] = 0.5 * (fwd1[i] + bwd1[i]);
    out.dx_p1[i] = 0.5 * (bwd1[i] - fwd1[i]);
    out.p2[i] = 0.125 * (fwd2[i] + bwd2[i]);
    out.dx_p2[i] = 0.125 * (bwd2[i] - fwd2[i]);
  }
  if (rule == FieldQuadrature::trapezoid || n < 3) return out;

  // Euler-Maclaurin terms of the kernel kink at Ybar = Y:
  // symmetric sums lose h^2/6 a f, antisymmetric ones gain h^2/6 f_Y.
  const double k = state.dy * state.dy / 6.0;
  const std::vector<double> df1 = centered_difference(f1, state.dy);
  const std::vector<double> df2 = centered_difference(f2, state.dy);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(0.5 * state.v[i]);
    const double a = state.xi[i] * c * c * c * c;
    out.p1[i] -= 0.5 * k * a * f1[i];
    out.dx_p1[i] += 0.5 * k * df1[i];
    out.p2[i] -= 0.125 * k * a * f2[i];
    out.dx_p2[i] += 0.125 * k * df2[i];
  }
  return out;
}

StateDerivative rhs(const LagrangianState& state, const NonlocalFields& fields) {
  const std::size_t n = state.size();
  StateDerivative d;
  d.u.resize(n);
  d.v.resize(n);
  d.xi.resize(n);
  d.x.resize(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double u = state.u[i];
      const double s = std::sin(0.5 * state.v[i]);
      const double c = std::cos(0.5 * state.v[i]);
      const double s2 = s * s, c2 = c * c;
      const double q = fields.p1[i] + fields.dx_p2[i];
      const double u3 = u * u * u;
      d.u[i] = -fields.dx_p1[i] - fields.p2[i];
      d.v[i] = -u * s2 + 2.0 * u3 * c2 - 2.0 * c2 * q;
      d.xi[i] = state.xi[i] * ((2.0 * u3 + u) - 2.0 * q) * (2.0 * s * c);
      d.x[i] = u * u;
    }
  });
  return d;
}

std::size_t count_breaking_runs(const LagrangianState& state, double breaking_tol) {
  std::size_t runs = 0;
  bool inside = false;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double c = std::cos(0.5 * state.v[i]);
    const bool broken = c * c < breaking_tol;
    if (broken && !inside) ++runs;
    inside = broken;
  }
  return runs;
}

std::vector<double> consistency_defect(const LagrangianState& state) {
  const std::size_t n = state.size();
  std::vector<double> g(n), out(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::sin(0.5 * state.v[i]);
    const double c = std::cos(0.5 * state.v[i]);
    g[i] = state.xi[i] * s * c * c * c;  // xi sin v cos^2(v/2) / 2
  }
  const std::vector<double> dg = centered_difference(g, state.dy);
  const double k = state.dy * state.dy / 12.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double cell = 0.5 * state.dy * (g[i] + g[i + 1]) - k * (dg[i + 1] - dg[i]);
    out[i] = std::abs((state.u[i + 1] - state.u[i]) - cell) / state.dy;
  }
  return out;
}

bool has_nan(const LagrangianState& state) {
  auto bad = [](const std::vector<double>& a) {
    return std::any_of(a.begin(), a.end(), [](double z) { return !std::isfinite(z); });
  };
  return bad(state.u) || bad(state.v) || bad(state.xi) || bad(state.x);
}

}  // namespace novikov
