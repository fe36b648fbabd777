#include "novikov/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "novikov/error.hpp"
#include "novikov/lagrangian.hpp"

namespace novikov {

namespace {

double resolve_eps(const LagrangianState& s, const ProjectionOptions& o) {
  if (o.eps_mono >= 0.0) return o.eps_mono;
  const double span = s.size() > 1 ? std::abs(s.x.back() - s.x.front()) : 0.0;
  return 1e-12 * std::max(1.0, span);
}

double resolve_tol(const LagrangianState& s, const ProjectionOptions& o) {
  if (o.tol_consistency >= 0.0) return o.tol_consistency;
  const double xi_max = s.size() > 0 ? *std::max_element(s.xi.begin(), s.xi.end()) : 0.0;
  return 1e-6 * (1.0 + xi_max);
}

}  // namespace

EulerianSnapshot project(const LagrangianState& state, const ProjectionOptions& options) {
  const double eps = resolve_eps(state, options);
  const double tol = resolve_tol(state, options);
  const std::size_t n = state.size();
  EulerianSnapshot snap;
  snap.t = state.T;
  std::size_t a = 0;
  while (a < n) {
    std::size_t b = a;
    while (b + 1 < n && state.x[b + 1] - state.x[a] <= eps) ++b;
    if (b == a) {
      const double c = std::cos(0.5 * state.v[a]);
      const bool defined = c * c > options.breaking_tol;
      snap.x.push_back(state.x[a]);
      snap.u.push_back(state.u[a]);
      snap.ux.push_back(defined ? std::tan(0.5 * state.v[a])
                                : std::numeric_limits<double>::quiet_NaN());
      snap.ux_mask.push_back(defined ? 1 : 0);
    } else {
      double xs = 0.0, us = 0.0, umin = state.u[a], umax = state.u[a], xmin = state.x[a];
      for (std::size_t i = a; i <= b; ++i) {
        xs += state.x[i];
        us += state.u[i];
        umin = std::min(umin, state.u[i]);
        umax = std::max(umax, state.u[i]);
        xmin = std::min(xmin, state.x[i]);
      }
      const bool folded = xmin < state.x[a] - eps;
      if (!folded && umax - umin > tol) {
        std::ostringstream msg;
        msg << "u varies by " << (umax - umin) << " on the plateau at x = " << state.x[a]
            << " (indices " << a << ".." << b << ", T = " << state.T << ")";
        throw Error(ErrorCode::consistency_failure, msg.str());
      }
      const double count = static_cast<double>(b - a + 1);
      snap.plateaus.push_back({a, b, snap.x.size(), folded});
      snap.x.push_back(folded ? state.x[a] : xs / count);
      snap.u.push_back(us / count);
      snap.ux.push_back(std::numeric_limits<double>::quiet_NaN());
      snap.ux_mask.push_back(0);
    }
    a = b + 1;
  }
  return snap;
}

double sample(const EulerianSnapshot& snapshot, double x) {
  const auto& xs = snapshot.x;
  if (xs.empty() || x < xs.front() || x > xs.back()) return 0.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return snapshot.u.back();
  const std::size_t k = static_cast<std::size_t>(it - xs.begin());
  if (k == 0) return snapshot.u.front();
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return (1.0 - w) * snapshot.u[k - 1] + w * snapshot.u[k];
}

MeasureReport measure_mu(const LagrangianState& state, double a, double b,
                         const ProjectionOptions& options) {
  if (!(a < b)) throw Error(ErrorCode::invalid_argument, "measure interval needs a < b");
  MeasureReport r;
  r.a = a;
  r.b = b;
  const std::size_t n = state.size();
  if (n < 2) return r;
  const EulerianSnapshot snap = project(state, options);

  std::vector<std::uint8_t> singular(n - 1, 0);
  for (const PlateauInterval& p : snap.plateaus)
    for (std::size_t k = p.first; k < p.last; ++k) singular[k] = 1;

  std::vector<double> g(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s2 = std::pow(std::sin(0.5 * state.v[i]), 2);
    const double c2 = std::pow(std::cos(0.5 * state.v[i]), 2);
    const double u2 = state.u[i] * state.u[i];
    g[i] = state.xi[i] * s2 * s2;
    h[i] = (u2 * u2 * c2 * c2 + 2.0 * u2 * s2 * c2) * state.xi[i];
  }
  // Share of the cell [x0, x1] inside (a, b); a collapsed cell counts whole
  // when its point lies inside.
  auto inside = [&](double x0, double x1) {
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    if (!(hi > lo)) return (a < lo && lo < b) ? 1.0 : 0.0;
    return std::max(0.0, std::min(hi, b) - std::max(lo, a)) / (hi - lo);
  };
  double nu_pos = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double w = inside(state.x[k], state.x[k + 1]);
    if (w == 0.0) continue;
    const double cell_mu = w * 0.5 * state.dy * (g[k] + g[k + 1]);
    r.mu_mass += cell_mu;
    if (singular[k]) r.mu_sing += cell_mu;
    nu_pos += w * 0.5 * state.dy * (h[k] + h[k + 1]);
  }
  for (std::size_t k = 0; k + 1 < snap.x.size(); ++k) {
    if (!snap.ux_mask[k] || !snap.ux_mask[k + 1]) continue;
    const double w = inside(snap.x[k], snap.x[k + 1]);
    const double p = std::pow(snap.ux[k], 4), q = std::pow(snap.ux[k + 1], 4);
    r.mu_ac += w * 0.5 * (snap.x[k + 1] - snap.x[k]) * (p + q);
  }
  r.nu_mass = nu_pos - r.mu_mass / 3.0;
  return r;
}

std::vector<BreakingInterval> detect_breaking(const LagrangianState& state, double breaking_tol) {
  std::vector<BreakingInterval> out;
  const std::size_t n = state.size();
  std::size_t i = 0;
  while (i < n) {
    const double c = std::cos(0.5 * state.v[i]);
    if (!(c * c < breaking_tol)) {
      ++i;
      continue;
    }
    BreakingInterval r;
    r.first = i;
    r.min_abs_u = std::abs(state.u[i]);
    double xs = 0.0;
    while (i < n && std::pow(std::cos(0.5 * state.v[i]), 2) < breaking_tol) {
      r.min_abs_u = std::min(r.min_abs_u, std::abs(state.u[i]));
      xs += state.x[i];
      ++i;
    }
    r.last = i - 1;
    r.y_lo = state.Y(r.first);
    r.y_hi = state.Y(r.last);
    r.x = xs / static_cast<double>(r.last - r.first + 1);
    out.push_back(r);
  }
  return out;
}

double BumpTestFunction::value(double t, double x) const {
  const double a = (t - t0) / rt, b = (x - x0) / rx;
  const double r2 = a * a + b * b;
  return r2 < 1.0 ? std::pow(1.0 - r2, 3) : 0.0;
}

double BumpTestFunction::dt(double t, double x) const {
  const double a = (t - t0) / rt, b = (x - x0) / rx;
  const double r2 = a * a + b * b;
  return r2 < 1.0 ? -6.0 * std::pow(1.0 - r2, 2) * a / rt : 0.0;
}

double BumpTestFunction::dx(double t, double x) const {
  const double a = (t - t0) / rt, b = (x - x0) / rx;
  const double r2 = a * a + b * b;
  return r2 < 1.0 ? -6.0 * std::pow(1.0 - r2, 2) * b / rx : 0.0;
}

namespace {

void check_support(const TrajectoryLog& log, const BumpTestFunction& phi) {
  if (log.entries.size() < 2) throw Error(ErrorCode::invalid_argument, "log needs >= 2 entries");
  for (const LogEntry& e : log.entries)
    if (!e.state)
      throw Error(ErrorCode::invalid_argument, "log holds no states (integrate with keep_states)");
  if (!(phi.rt > 0.0 && phi.rx > 0.0))
    throw Error(ErrorCode::invalid_argument, "test function radii must be positive");
  if (phi.t0 + phi.rt > log.entries.back().T)
    throw Error(ErrorCode::out_of_window, "test function support extends past the last logged time");
  for (const LogEntry& e : log.entries) {
    const LagrangianState& s = *e.state;
    if (phi.x0 - phi.rx < s.x.front() || phi.x0 + phi.rx > s.x.back())
      throw Error(ErrorCode::out_of_window, "test function support leaves the grid window");
  }
}

// Trapezoid in Y of integrand(i, fields) for every logged state, then trapezoid in T.
template <typename F>
double space_time_integral(const TrajectoryLog& log, F integrand) {
  std::vector<double> per_time(log.entries.size());
  for (std::size_t k = 0; k < log.entries.size(); ++k) {
    const LagrangianState& s = *log.entries[k].state;
    const NonlocalFields f = nonlocal_fields(s);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double w = (i == 0 || i + 1 == s.size()) ? 0.5 : 1.0;
      sum += w * integrand(s, f, i);
    }
    per_time[k] = sum * log.entries[k].state->dy;
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < per_time.size(); ++k)
    total += 0.5 * (log.entries[k + 1].T - log.entries[k].T) * (per_time[k] + per_time[k + 1]);
  return total;
}

template <typename F>
double initial_integral(const TrajectoryLog& log, F integrand) {
  const LagrangianState& s = *log.entries.front().state;
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = (i == 0 || i + 1 == s.size()) ? 0.5 : 1.0;
    sum += w * integrand(s, i);
  }
  return sum * s.dy;
}

}  // namespace

double weak_form_residual(const TrajectoryLog& log, const BumpTestFunction& phi) {
  check_support(log, phi);
  // u_x dx = xi sin(v/2) cos^3(v/2) dY; u_x^2 dx = xi sin^2 cos^2 dY; dx = xi cos^4 dY.
  const double bulk = space_time_integral(
      log, [&](const LagrangianState& s, const NonlocalFields& f, std::size_t i) {
        const double sh = std::sin(0.5 * s.v[i]), ch = std::cos(0.5 * s.v[i]);
        const double u = s.u[i], x = s.x[i], T = s.T;
        const double ux_dx = s.xi[i] * sh * ch * ch * ch;
        const double phi_T = phi.dt(T, x) + u * u * phi.dx(T, x);
        const double source = (-1.5 * u * sh * sh * ch * ch +
                               (-u * u * u + f.p1[i] + f.dx_p2[i]) * ch * ch * ch * ch) *
                              s.xi[i];
        return -ux_dx * phi_T + source * phi.value(T, x);
      });
  const double initial = initial_integral(log, [&](const LagrangianState& s, std::size_t i) {
    const double sh = std::sin(0.5 * s.v[i]), ch = std::cos(0.5 * s.v[i]);
    return s.xi[i] * sh * ch * ch * ch * phi.value(s.T, s.x[i]);
  });
  return std::abs(bulk - initial);
}

double measure_balance_residual(const TrajectoryLog& log, const BumpTestFunction& phi) {
  check_support(log, phi);
  const double bulk = space_time_integral(
      log, [&](const LagrangianState& s, const NonlocalFields& f, std::size_t i) {
        const double sh = std::sin(0.5 * s.v[i]), ch = std::cos(0.5 * s.v[i]);
        const double u = s.u[i], x = s.x[i], T = s.T;
        const double density = s.xi[i] * sh * sh * sh * sh;
        const double phi_T = phi.dt(T, x) + u * u * phi.dx(T, x);
        const double source =
            4.0 * (u * u * u - f.p1[i] - f.dx_p2[i]) * ch * sh * sh * sh * s.xi[i];
        return density * phi_T + source * phi.value(T, x);
      });
  const double initial = initial_integral(log, [&](const LagrangianState& s, std::size_t i) {
    const double sh = std::sin(0.5 * s.v[i]);
    return s.xi[i] * sh * sh * sh * sh * phi.value(s.T, s.x[i]);
  });
  return std::abs(bulk + initial);
}

double holder_quotient(const EulerianSnapshot& snapshot, std::size_t min_pairs) {
  const std::size_t n = snapshot.x.size();
  if (n < 2) return 0.0;
  double best = 0.0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double dx = std::abs(snapshot.x[j] - snapshot.x[i]);
    if (dx <= 0.0) return;
    best = std::max(best, std::abs(snapshot.u[j] - snapshot.u[i]) / std::pow(dx, 0.75));
  };
  std::vector<std::size_t> offsets;
  for (std::size_t d = 1; d < n; d *= 2) offsets.push_back(d);
  if (offsets.back() != n - 1) offsets.push_back(n - 1);
  std::size_t available = 0;
  for (std::size_t d : offsets) available += n - d;
  if (available <= min_pairs) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
    return best;
  }
  // Smallest per-offset cap that reaches min_pairs in total.
  std::size_t lo = 1, hi = n;
  while (lo < hi) {
    const std::size_t cap = (lo + hi) / 2;
    std::size_t total = 0;
    for (std::size_t d : offsets) total += std::min(cap, n - d);
    if (total >= min_pairs) hi = cap; else lo = cap + 1;
  }
  for (std::size_t d : offsets) {
    const std::size_t starts = n - d;
    const std::size_t count = std::min(lo, starts);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t i = count == 1 ? 0 : k * (starts - 1) / (count - 1);
      visit(i, i + d);
    }
  }
  return best;
}

}  // namespace novikov
