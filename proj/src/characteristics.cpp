#include "novikov/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "novikov/error.hpp"
#include "novikov/lagrangian.hpp"
#include "novikov/parallel.hpp"
#include "label_grid.hpp"

namespace novikov {

namespace {

// Cumulative trapezoid of xi sin^4(v/2) dY from the first node.
std::vector<double> mu_cumulative(const LagrangianState& s) {
  std::vector<double> m(s.size(), 0.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double sh = std::sin(0.5 * s.v[i]);
    const double g = s.xi[i] * sh * sh * sh * sh;
    if (i > 0) m[i] = m[i - 1] + 0.5 * s.dy * (prev + g);
    prev = g;
  }
  return m;
}

double lerp(const std::vector<double>& a, std::size_t i, double w) {
  return w == 0.0 ? a[i] : (1.0 - w) * a[i] + w * a[i + 1];
}

}  // namespace

BetaCoordinate beta_of_x(const LagrangianState& state, double x_query,
                         const ProjectionOptions& options) {
  const std::size_t n = state.size();
  if (n < 2 || x_query < state.x.front() || x_query > state.x.back()) {
    std::ostringstream msg;
    msg << "x = " << x_query << " lies outside the grid window";
    throw Error(ErrorCode::out_of_window, msg.str());
  }
  const std::vector<double> m = mu_cumulative(state);
  const EulerianSnapshot snap = project(state, options);
  const double eps = options.eps_mono >= 0.0
                         ? options.eps_mono
                         : 1e-12 * std::max(1.0, std::abs(state.x.back() - state.x.front()));
  BetaCoordinate out;
  out.t = state.T;
  out.x = x_query;
  for (const PlateauInterval& p : snap.plateaus) {
    if (std::abs(snap.x[p.point] - x_query) <= eps) {
      out.on_atom = true;
      out.theta = 0.5;
      out.beta = x_query + m[p.first] + 0.5 * (m[p.last] - m[p.first]);
      return out;
    }
  }
  const auto it = std::upper_bound(state.x.begin(), state.x.end(), x_query);
  std::size_t i = static_cast<std::size_t>(it - state.x.begin());
  i = i == 0 ? 0 : std::min(i - 1, n - 2);
  const double span = state.x[i + 1] - state.x[i];
  const double w = span > 0.0 ? std::clamp((x_query - state.x[i]) / span, 0.0, 1.0) : 0.0;
  out.beta = x_query + lerp(m, i, w);
  return out;
}

BetaCoordinate beta_of_label(const LagrangianState& state, double Y,
                             const ProjectionOptions& options) {
  const std::size_t n = state.size();
  const double k = (Y - state.y0) / state.dy;
  if (n < 2 || k < 0.0 || k > static_cast<double>(n - 1)) {
    std::ostringstream msg;
    msg << "label Y = " << Y << " lies outside the grid";
    throw Error(ErrorCode::out_of_window, msg.str());
  }
  const std::size_t i = std::min(static_cast<std::size_t>(k), n - 2);
  const double w = k - static_cast<double>(i);
  const std::vector<double> m = mu_cumulative(state);
  const EulerianSnapshot snap = project(state, options);
  BetaCoordinate out;
  out.t = state.T;
  for (const PlateauInterval& p : snap.plateaus) {
    if (p.first <= i && i + 1 <= p.last) {
      out.on_atom = true;
      out.theta = (Y - state.Y(p.first)) / (state.Y(p.last) - state.Y(p.first));
      out.x = snap.x[p.point];
      out.beta = out.x + m[p.first] + out.theta * (m[p.last] - m[p.first]);
      return out;
    }
  }
  out.x = lerp(state.x, i, w);
  out.beta = out.x + lerp(m, i, w);
  return out;
}

BetaTable::BetaTable(const LagrangianState& state)
    : T_(state.T), y0_(state.y0), dy_(state.dy) {
  const std::size_t n = state.size();
  if (n < 2) throw Error(ErrorCode::invalid_argument, "state needs >= 2 points");
  const std::vector<double> m = mu_cumulative(state);
  const NonlocalFields f = nonlocal_fields(state);
  beta_.resize(n);
  G_.assign(n, 0.0);
  Gt_.assign(n, 0.0);
  rate_.resize(n);
  x_ = state.x;
  u_ = state.u;
  v_ = state.v;
  double gt_prev = 0.0, gs_prev = 0.0, gs_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    beta_[i] = state.x[i] + m[i];
    if (i > 0) beta_[i] = std::max(beta_[i], beta_[i - 1]);
    const double sh = std::sin(0.5 * state.v[i]), ch = std::cos(0.5 * state.v[i]);
    const double u = state.u[i];
    const double q = f.p1[i] + f.dx_p2[i];
    const double gt = 2.0 * u * sh * ch * ch * ch * state.xi[i];
    const double gs = 4.0 * (u * u * u - q) * ch * sh * sh * sh * state.xi[i];
    if (i > 0) {
      Gt_[i] = Gt_[i - 1] + 0.5 * dy_ * (gt_prev + gt);
      gs_sum += 0.5 * dy_ * (gs_prev + gs);
    }
    G_[i] = Gt_[i] + gs_sum;
    gt_prev = gt;
    gs_prev = gs;
    rate_[i] = f.dx_p1[i] + f.p2[i];
  }
  // Same threshold as the integrator's jump cells; a kink needs a regular
  // cell on each side to extrapolate from.
  kink_.assign(n - 1, 0);
  auto jump = [&](std::size_t i) { return std::abs(state.v[i + 1] - state.v[i]) > 0.5; };
  for (std::size_t i = 1; i + 2 < n; ++i)
    kink_[i] = jump(i) && !jump(i - 1) && !jump(i + 1) && beta_[i] > beta_[i - 1] &&
               beta_[i + 2] > beta_[i + 1];
}

BetaTable::Point BetaTable::at_beta(double beta) const {
  const std::size_t n = beta_.size();
  const double slack = 1e-12 * std::max(1.0, std::abs(beta_.back() - beta_.front()));
  if (beta < beta_.front() - slack || beta > beta_.back() + slack) {
    std::ostringstream msg;
    msg << "beta = " << beta << " leaves [" << beta_.front() << ", " << beta_.back()
        << "] at T = " << T_;
    throw Error(ErrorCode::out_of_window, msg.str());
  }
  const auto it = std::upper_bound(beta_.begin(), beta_.end(), beta);
  std::size_t i = static_cast<std::size_t>(it - beta_.begin());
  i = i == 0 ? 0 : std::min(i - 1, n - 2);
  const double span = beta_[i + 1] - beta_[i];
  const double w = span > 0.0 ? std::clamp((beta - beta_[i]) / span, 0.0, 1.0) : 0.0;
  Point p;
  p.Y = y0_ + (static_cast<double>(i) + w) * dy_;
  p.x = lerp(x_, i, w);
  p.v = lerp(v_, i, w);
  if (kink_[i]) {
    // Line through the two nodes on beta's side of the midpoint.
    const bool left = beta <= 0.5 * (beta_[i] + beta_[i + 1]);
    const std::size_t a = left ? i - 1 : i + 1, b = a + 1;
    const double s = (beta - beta_[a]) / (beta_[b] - beta_[a]);
    auto side = [&](const std::vector<double>& f) { return f[a] + s * (f[b] - f[a]); };
    p.u = side(u_);
    p.G = side(G_);
    p.G_transport = side(Gt_);
    p.ucar_rate = side(rate_);
    return p;
  }
  p.u = lerp(u_, i, w);
  p.G = lerp(G_, i, w);
  p.G_transport = lerp(Gt_, i, w);
  p.ucar_rate = lerp(rate_, i, w);
  return p;
}

GValue G_eval(const LagrangianState& state, double beta) {
  const BetaTable table(state);
  const double b = std::clamp(beta, table.beta_min(), table.beta_max());
  const BetaTable::Point p = table.at_beta(b);
  return {p.G, p.G_transport, p.G - p.G_transport};
}

namespace {

std::vector<BetaTable> build_tables(const TrajectoryLog& log) {
  if (log.entries.empty()) throw Error(ErrorCode::invalid_argument, "empty trajectory log");
  std::vector<BetaTable> tables;
  tables.reserve(log.entries.size());
  for (const LogEntry& e : log.entries) {
    if (!e.state)
      throw Error(ErrorCode::invalid_argument, "log holds no states (integrate with keep_states)");
    tables.emplace_back(*e.state);
  }
  return tables;
}

CharacteristicPath trace_tables(const TrajectoryLog& log, const std::vector<BetaTable>& tables,
                                double y_bar, std::size_t substeps) {
  if (substeps < 1) throw Error(ErrorCode::invalid_argument, "substeps must be >= 1");
  CharacteristicPath path;
  path.y_bar = y_bar;
  double beta = beta_of_x(*log.entries.front().state, y_bar).beta;

  double ucar_integral = 0.0, char_integral = 0.0;
  BetaTable::Point p0 = tables.front().at_beta(beta);
  const double u_start = p0.u, x_start = p0.x;
  auto record = [&](double t, const BetaTable::Point& p) {
    path.t.push_back(t);
    path.beta.push_back(beta);
    path.x.push_back(p.x);
    path.u.push_back(p.u);
    path.v.push_back(p.v);
    path.ucar_residual.push_back(p.u - u_start + ucar_integral);
    path.char_residual.push_back(p.x - x_start - char_integral);
  };
  record(log.entries.front().T, p0);

  BetaTable::Point prev = p0;
  for (std::size_t k = 0; k + 1 < tables.size(); ++k) {
    const double Ta = log.entries[k].T, Tb = log.entries[k + 1].T;
    const double span = Tb - Ta;
    auto G = [&](double t, double b) {
      const double lam = span > 0.0 ? (t - Ta) / span : 0.0;
      return (1.0 - lam) * tables[k].at_beta(b).G + lam * tables[k + 1].at_beta(b).G;
    };
    const double h = span / static_cast<double>(substeps);
    for (std::size_t j = 0; j < substeps; ++j) {
      const double t = Ta + static_cast<double>(j) * h;
      const double k1 = G(t, beta);
      const double k2 = G(t + 0.5 * h, beta + 0.5 * h * k1);
      const double k3 = G(t + 0.5 * h, beta + 0.5 * h * k2);
      const double k4 = G(t + h, beta + h * k3);
      beta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const BetaTable::Point p = tables[k + 1].at_beta(beta);
    ucar_integral += 0.5 * span * (prev.ucar_rate + p.ucar_rate);
    char_integral += 0.5 * span * (prev.u * prev.u + p.u * p.u);
    record(Tb, p);
    prev = p;
  }
  return path;
}

}  // namespace

CharacteristicPath trace(const TrajectoryLog& log, double y_bar, std::size_t substeps) {
  return trace_tables(log, build_tables(log), y_bar, substeps);
}

std::vector<CharacteristicPath> trace_family(const TrajectoryLog& log,
                                             const std::vector<double>& y_bars,
                                             std::size_t substeps) {
  const std::vector<BetaTable> tables = build_tables(log);
  std::vector<CharacteristicPath> paths(y_bars.size());
  parallel_for(
      y_bars.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) paths[j] = trace_tables(log, tables, y_bars[j], substeps);
      },
      1);
  return paths;
}

bool paths_ordered(std::vector<const CharacteristicPath*> paths) {
  std::sort(paths.begin(), paths.end(),
            [](const CharacteristicPath* a, const CharacteristicPath* b) { return a->y_bar < b->y_bar; });
  for (std::size_t j = 0; j + 1 < paths.size(); ++j) {
    const CharacteristicPath& a = *paths[j];
    const CharacteristicPath& b = *paths[j + 1];
    const std::size_t m = std::min(a.x.size(), b.x.size());
    for (std::size_t k = 0; k < m; ++k) {
      const double tol = 1e-12 * std::max(1.0, std::abs(a.x[k]));
      if (a.x[k] > b.x[k] + tol) return false;
    }
  }
  return true;
}

double source_bound(const AprioriBounds& b) {
  const double e32 = std::pow(b.E0, 1.5);
  return 4.0 * e32 * b.K + 4.0 * b.K * (0.75 * e32 + 0.25 * b.K);
}

double speed_bound(const AprioriBounds& b) { return b.E0 + source_bound(b); }

// ---------------------------------------------------------------------------
// beta frame

BetaFrameState initial_beta_frame(const InitialDatum& datum, const BetaFrameConfig& config) {
  if (config.n < 16) throw Error(ErrorCode::invalid_argument, "beta frame needs at least 16 particles");
  if (!(config.x_hi > config.x_lo)) throw Error(ErrorCode::invalid_argument, "empty x window");
  if (config.refinement < 8) throw Error(ErrorCode::invalid_argument, "refinement must be >= 8");

  const std::size_t m = static_cast<std::size_t>(config.refinement) * (config.n - 1) + 1;
  const double hf = (config.x_hi - config.x_lo) / static_cast<double>(m - 1);
  std::vector<double> xf(m), bc(m, 0.0);
  double umax = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    xf[k] = k + 1 == m ? config.x_hi : config.x_lo + static_cast<double>(k) * hf;
    umax = std::max(umax, std::abs(datum.value(xf[k])));
  }
  const double edge =
      std::max(std::abs(datum.value(config.x_lo)), std::abs(datum.value(config.x_hi)));
  if (umax > 0.0 && !(edge < config.edge_tol * umax))
    throw Error(ErrorCode::window_too_small, "datum does not decay inside the window");

  const std::vector<double> kinks = datum.kinks();
  const double kink_eps = 1e-10 * (config.x_hi - config.x_lo);
  auto density_at = [&](double x) {
    const double d = datum.slope(x);
    return 1.0 + d * d * d * d;
  };
  auto density = [&](double x) {
    for (double xk : kinks)
      if (std::abs(x - xk) <= kink_eps)
        return 0.5 * (density_at(xk - 10.0 * kink_eps) + density_at(xk + 10.0 * kink_eps));
    return density_at(x);
  };
  double prev = density(xf[0]);
  for (std::size_t k = 1; k < m; ++k) {
    const double rho = density(xf[k]);
    bc[k] = bc[k - 1] + 0.5 * (xf[k] - xf[k - 1]) * (prev + rho);
    prev = rho;
  }
  auto label_of_x = [&](double x) {
    const auto it = std::upper_bound(xf.begin(), xf.end(), x);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - xf.begin()), m - 1) - 1;
    const double w = (x - xf[k]) / (xf[k + 1] - xf[k]);
    return (1.0 - w) * bc[k] + w * bc[k + 1];
  };
  std::vector<double> kb;
  if (config.align_kinks)
    for (double xk : kinks)
      if (config.x_lo < xk && xk < config.x_hi) kb.push_back(label_of_x(xk));
  const double span = bc[m - 1];
  const detail::LabelGrid labels = detail::uniform_labels(span, config.n, kb);

  BetaFrameState s;
  s.t = 0.0;
  s.beta.resize(config.n);
  s.x.resize(config.n);
  s.u.resize(config.n);
  s.v.resize(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double target = labels.start + static_cast<double>(i) * labels.step;
    double x;
    if (target <= 0.0) {
      x = config.x_lo + target;
    } else if (target >= span) {
      x = config.x_hi + (target - span);
    } else {
      const auto it = std::upper_bound(bc.begin(), bc.end(), target);
      const std::size_t k = static_cast<std::size_t>(it - bc.begin()) - 1;
      const double w = (target - bc[k]) / (bc[k + 1] - bc[k]);
      x = xf[k] + w * (xf[k + 1] - xf[k]);
    }
    s.beta[i] = config.x_lo + target;
    s.x[i] = x;
    s.u[i] = datum.value(x);
    s.v[i] = 2.0 * std::atan(datum.slope(x));
  }
  return s;
}

namespace {

std::vector<double> nonuniform_derivative(const std::vector<double>& f,
                                          const std::vector<double>& cell) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w = cell[i - 1] + cell[i];
    d[i] = w > 0.0 ? (f[i + 1] - f[i - 1]) / w : 0.0;
  }
  d[0] = cell[0] > 0.0 ? (f[1] - f[0]) / cell[0] : 0.0;
  d[n - 1] = cell[n - 2] > 0.0 ? (f[n - 1] - f[n - 2]) / cell[n - 2] : 0.0;
  return d;
}

// Endpoint-corrected cumulative trapezoid over nonuniform cells.
std::vector<double> corrected_cumulative(const std::vector<double>& g,
                                         const std::vector<double>& cell, bool clamp_nonnegative) {
  const std::vector<double> dg = nonuniform_derivative(g, cell);
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    const double h = cell[k];
    double step = 0.5 * h * (g[k] + g[k + 1]) - h * h / 12.0 * (dg[k + 1] - dg[k]);
    if (clamp_nonnegative) step = std::max(step, 0.0);
    out[k + 1] = out[k] + step;
  }
  return out;
}

struct BetaFrameRates {
  std::vector<double> beta, x, u, v;
};

struct Trig {
  std::vector<double> s, c, den;
};

Trig trig_of(const BetaFrameState& st) {
  const std::size_t n = st.u.size();
  Trig t;
  t.s.resize(n);
  t.c.resize(n);
  t.den.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.s[i] = std::sin(0.5 * st.v[i]);
    t.c[i] = std::cos(0.5 * st.v[i]);
    const double s2 = t.s[i] * t.s[i], c2 = t.c[i] * t.c[i];
    t.den[i] = std::max(s2 * s2 + c2 * c2, 0.5);  // sin^4 + cos^4 >= 1/2
  }
  return t;
}

std::vector<double> cells_of(const BetaFrameState& st) {
  std::vector<double> cell(st.beta.size() > 0 ? st.beta.size() - 1 : 0);
  for (std::size_t k = 0; k < cell.size(); ++k) cell[k] = std::max(st.beta[k + 1] - st.beta[k], 0.0);
  return cell;
}

NonlocalFields fields_with(const BetaFrameState& st, const Trig& tr, const std::vector<double>& cell) {
  const std::size_t n = st.u.size();
  std::vector<double> a(n), f1(n), f2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = tr.s[i], c = tr.c[i], u = st.u[i];
    const double c4 = c * c * c * c;
    a[i] = c4 / tr.den[i];
    f1[i] = (1.5 * u * s * s * c * c + u * u * u * c4) / tr.den[i];
    f2[i] = s * s * s * c / tr.den[i];
  }
  const std::vector<double> dist = corrected_cumulative(a, cell, true);
  const std::vector<double> decay = cell_decay(dist);
  std::vector<double> fw1(n), bw1(n), fw2(n), bw2(n);
  exponential_sweeps(decay, cell, f1, fw1, bw1);
  exponential_sweeps(decay, cell, f2, fw2, bw2);
  const std::vector<double> d1 = nonuniform_derivative(f1, cell);
  const std::vector<double> d2 = nonuniform_derivative(f2, cell);

  NonlocalFields out;
  out.p1.resize(n);
  out.dx_p1.resize(n);
  out.p2.resize(n);
  out.dx_p2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hl = i > 0 ? cell[i - 1] : 0.0;
    const double hr = i + 1 < n ? cell[i] : 0.0;
    const double l2 = hl * hl / 12.0, r2 = hr * hr / 12.0;
    // Kink of the kernel at beta' = beta: one Euler-Maclaurin term per side.
    auto sym = [&](double f, double df) { return (l2 + r2) * a[i] * f + (l2 - r2) * df; };
    auto anti = [&](double f, double df) { return r2 * (a[i] * f - df) - l2 * (a[i] * f + df); };
    out.p1[i] = 0.5 * (fw1[i] + bw1[i] - sym(f1[i], d1[i]));
    out.dx_p1[i] = 0.5 * (bw1[i] - fw1[i] - anti(f1[i], d1[i]));
    out.p2[i] = 0.25 * (fw2[i] + bw2[i] - sym(f2[i], d2[i]));
    out.dx_p2[i] = 0.25 * (bw2[i] - fw2[i] - anti(f2[i], d2[i]));
  }
  return out;
}

BetaFrameRates rates(const BetaFrameState& st) {
  const std::size_t n = st.u.size();
  const Trig tr = trig_of(st);
  const std::vector<double> cell = cells_of(st);
  const NonlocalFields f = fields_with(st, tr, cell);
  std::vector<double> g(n);
  BetaFrameRates r;
  r.x.resize(n);
  r.u.resize(n);
  r.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = tr.s[i], c = tr.c[i], u = st.u[i];
    const double q = f.p1[i] + f.dx_p2[i];
    g[i] = (2.0 * u * s * c * c * c + 4.0 * s * s * s * c * (u * u * u - q)) / tr.den[i];
    r.x[i] = u * u;
    r.u[i] = -(f.dx_p1[i] + f.p2[i]);
    r.v[i] = 2.0 * (u * u * u - q) * c * c - u * s * s;
  }
  r.beta = corrected_cumulative(g, cell, false);
  return r;
}

BetaFrameState advance(const BetaFrameState& st, const BetaFrameRates& r, double h) {
  BetaFrameState out = st;
  for (std::size_t i = 0; i < st.u.size(); ++i) {
    out.beta[i] += h * r.beta[i];
    out.x[i] += h * r.x[i];
    out.u[i] += h * r.u[i];
    out.v[i] += h * r.v[i];
  }
  out.t += h;
  return out;
}

}  // namespace

NonlocalFields beta_frame_fields(const BetaFrameState& state) {
  return fields_with(state, trig_of(state), cells_of(state));
}

BetaFrameSolution evolve_beta_frame(const InitialDatum& datum, const BetaFrameConfig& config) {
  if (!(config.dt > 0.0)) throw Error(ErrorCode::config, "dt must be positive");
  if (config.snapshot_stride < 1) throw Error(ErrorCode::config, "snapshot_stride must be >= 1");
  BetaFrameSolution sol;
  BetaFrameState s = initial_beta_frame(datum, config);
  sol.snapshots.push_back(s);
  const double span = config.t_end - s.t;
  const std::size_t steps =
      span > 0.0 ? static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9)) : 0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double h = k == steps ? config.t_end - s.t : config.dt;
    const BetaFrameRates k1 = rates(s);
    const BetaFrameRates k2 = rates(advance(s, k1, 0.5 * h));
    const BetaFrameRates k3 = rates(advance(s, k2, 0.5 * h));
    const BetaFrameRates k4 = rates(advance(s, k3, h));
    const double w = h / 6.0;
    bool finite = true;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      s.beta[i] += w * (k1.beta[i] + 2.0 * k2.beta[i] + 2.0 * k3.beta[i] + k4.beta[i]);
      s.x[i] += w * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
      s.u[i] += w * (k1.u[i] + 2.0 * k2.u[i] + 2.0 * k3.u[i] + k4.u[i]);
      s.v[i] += w * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
      finite = finite && std::isfinite(s.beta[i]) && std::isfinite(s.x[i]) &&
               std::isfinite(s.u[i]) && std::isfinite(s.v[i]);
    }
    s.t = k == steps ? config.t_end : s.t + h;
    if (!finite) {
      std::ostringstream msg;
      msg << "non-finite beta-frame value at t = " << s.t;
      throw Error(ErrorCode::nan_detected, msg.str());
    }
    if (k % config.snapshot_stride == 0 || k == steps) sol.snapshots.push_back(s);
  }
  return sol;
}

EulerianSnapshot to_snapshot(const BetaFrameState& state, double breaking_tol) {
  const std::size_t n = state.x.size();
  EulerianSnapshot snap;
  snap.t = state.t;
  if (n == 0) return snap;
  const double eps = 1e-12 * std::max(1.0, std::abs(state.x.back() - state.x.front()));
  std::size_t a = 0;
  while (a < n) {
    std::size_t b = a;
    while (b + 1 < n && state.x[b + 1] - state.x[a] <= eps) ++b;
    double xs = 0.0, us = 0.0, xmin = state.x[a];
    for (std::size_t i = a; i <= b; ++i) {
      xs += state.x[i];
      us += state.u[i];
      xmin = std::min(xmin, state.x[i]);
    }
    const double count = static_cast<double>(b - a + 1);
    const double c = std::cos(0.5 * state.v[a]);
    const bool defined = b == a && c * c > breaking_tol;
    const bool folded = xmin < state.x[a] - eps;
    if (b > a) snap.plateaus.push_back({a, b, snap.x.size(), folded});
    snap.x.push_back(folded ? state.x[a] : xs / count);
    snap.u.push_back(us / count);
    snap.ux.push_back(defined ? std::tan(0.5 * state.v[a]) : std::numeric_limits<double>::quiet_NaN());
    snap.ux_mask.push_back(defined ? 1 : 0);
    a = b + 1;
  }
  return snap;
}

}  // namespace novikov
