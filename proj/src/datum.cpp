#include "novikov/datum.hpp"

#include <algorithm>
#include <cmath>

#include "novikov/error.hpp"

namespace novikov {

namespace {

double psi(double s) { return s * std::exp(-s * s); }
double dpsi(double s) { return (1.0 - 2.0 * s * s) * std::exp(-s * s); }

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

const char* to_string(DatumKind kind) noexcept {
  switch (kind) {
    case DatumKind::peakon: return "peakon";
    case DatumKind::antipeakon_pair: return "antipeakon-pair";
    case DatumKind::gaussian: return "gaussian";
    case DatumKind::tabulated: return "tabulated";
  }
  return "unknown";
}

DatumKind datum_kind_from_string(const std::string& name) {
  if (name == "peakon") return DatumKind::peakon;
  if (name == "antipeakon-pair" || name == "antipeakon_pair") return DatumKind::antipeakon_pair;
  if (name == "gaussian") return DatumKind::gaussian;
  if (name == "tabulated") return DatumKind::tabulated;
  throw Error(ErrorCode::config, "unknown datum kind '" + name + "'");
}

InitialDatum InitialDatum::zero() { return gaussian(0.0, 1.0, 0.0); }

InitialDatum InitialDatum::peakon(double speed, double crest, int sign) {
  if (!(speed >= 0.0)) throw Error(ErrorCode::invalid_argument, "peakon speed must be >= 0");
  InitialDatum d;
  d.kind_ = DatumKind::peakon;
  d.speed_ = speed;
  d.center_ = crest;
  d.sign_ = sign >= 0 ? 1 : -1;
  d.amplitude_ = d.sign_ * std::sqrt(speed);
  return d;
}

InitialDatum InitialDatum::antipeakon_pair(double speed, double separation, double center) {
  if (!(speed >= 0.0) || !(separation > 0.0))
    throw Error(ErrorCode::invalid_argument, "antipeakon pair needs speed >= 0, separation > 0");
  InitialDatum d;
  d.kind_ = DatumKind::antipeakon_pair;
  d.speed_ = speed;
  d.separation_ = separation;
  d.center_ = center;
  d.amplitude_ = std::sqrt(speed);
  return d;
}

InitialDatum InitialDatum::gaussian(double amplitude, double width, double center) {
  if (!(width > 0.0)) throw Error(ErrorCode::invalid_argument, "gaussian width must be > 0");
  InitialDatum d;
  d.kind_ = DatumKind::gaussian;
  d.amplitude_ = amplitude;
  d.width_ = width;
  d.center_ = center;
  return d;
}

InitialDatum InitialDatum::tabulated(std::vector<double> xs, std::vector<double> us) {
  if (xs.size() != us.size() || xs.size() < 3)
    throw Error(ErrorCode::invalid_argument, "tabulated datum needs >= 3 matching samples");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw Error(ErrorCode::invalid_data, "tabulated x samples must be strictly increasing");
  InitialDatum d;
  d.kind_ = DatumKind::tabulated;
  const std::size_t n = xs.size();
  d.dus_.resize(n);
  d.dus_[0] = (us[1] - us[0]) / (xs[1] - xs[0]);
  d.dus_[n - 1] = (us[n - 1] - us[n - 2]) / (xs[n - 1] - xs[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d.dus_[i] = (us[i + 1] - us[i - 1]) / (xs[i + 1] - xs[i - 1]);
  d.xs_ = std::move(xs);
  d.us_ = std::move(us);
  return d;
}

double InitialDatum::base_value(double x) const {
  switch (kind_) {
    case DatumKind::peakon:
      return amplitude_ * std::exp(-std::abs(x - center_));
    case DatumKind::antipeakon_pair: {
      const double h = 0.5 * separation_;
      return amplitude_ *
             (std::exp(-std::abs(x - center_ + h)) - std::exp(-std::abs(x - center_ - h)));
    }
    case DatumKind::gaussian: {
      const double s = (x - center_) / width_;
      return amplitude_ * std::exp(-s * s);
    }
    case DatumKind::tabulated: {
      if (x <= xs_.front() || x >= xs_.back()) {
        if (x == xs_.front()) return us_.front();
        if (x == xs_.back()) return us_.back();
        return 0.0;
      }
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
      const double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
      return (1.0 - w) * us_[k] + w * us_[k + 1];
    }
  }
  return 0.0;
}

double InitialDatum::base_slope(double x) const {
  switch (kind_) {
    case DatumKind::peakon:
      return -sgn(x - center_) * amplitude_ * std::exp(-std::abs(x - center_));
    case DatumKind::antipeakon_pair: {
      const double h = 0.5 * separation_;
      const double a = x - center_ + h;
      const double b = x - center_ - h;
      return amplitude_ * (-sgn(a) * std::exp(-std::abs(a)) + sgn(b) * std::exp(-std::abs(b)));
    }
    case DatumKind::gaussian: {
      const double s = (x - center_) / width_;
      return -2.0 * s / width_ * amplitude_ * std::exp(-s * s);
    }
    case DatumKind::tabulated: {
      if (x < xs_.front() || x > xs_.back()) return 0.0;
      if (x == xs_.back()) return dus_.back();
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
      const double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
      return (1.0 - w) * dus_[k] + w * dus_[k + 1];
    }
  }
  return 0.0;
}

double InitialDatum::value(double x) const {
  double u = scale_ * base_value(x);
  if (pert_delta_ != 0.0) u += pert_delta_ / pert_norm_ * psi((x - pert_center_) / pert_width_);
  return u;
}

double InitialDatum::slope(double x) const {
  double du = scale_ * base_slope(x);
  if (pert_delta_ != 0.0)
    du += pert_delta_ / pert_norm_ * dpsi((x - pert_center_) / pert_width_) / pert_width_;
  return du;
}

std::vector<double> InitialDatum::kinks() const {
  switch (kind_) {
    case DatumKind::peakon:
      return {center_};
    case DatumKind::antipeakon_pair:
      return {center_ - 0.5 * separation_, center_ + 0.5 * separation_};
    default:
      return {};
  }
}

InitialDatum InitialDatum::scaled(double alpha) const {
  InitialDatum d = *this;
  d.scale_ *= alpha;
  d.pert_delta_ *= alpha;
  return d;
}

InitialDatum InitialDatum::perturbed(double delta, double center, double width) const {
  if (!(width > 0.0)) throw Error(ErrorCode::invalid_argument, "perturbation width must be > 0");
  InitialDatum d = *this;
  d.pert_delta_ = delta;
  d.pert_center_ = center;
  d.pert_width_ = width;
  // H1 + W^{1,4} norm of psi((x - c)/w), trapezoid on [-8w, 8w].
  const int m = 32001;
  const double lo = -8.0, hi = 8.0, h = (hi - lo) / (m - 1);
  double l2 = 0.0, l4 = 0.0;
  for (int k = 0; k < m; ++k) {
    const double s = lo + k * h;
    const double p = psi(s);
    const double dp = dpsi(s) / width;
    const double wk = (k == 0 || k == m - 1) ? 0.5 : 1.0;
    l2 += wk * (p * p + dp * dp);
    l4 += wk * (p * p * p * p + dp * dp * dp * dp);
  }
  l2 *= h * width;
  l4 *= h * width;
  d.pert_norm_ = std::sqrt(l2) + std::pow(l4, 0.25);
  return d;
}

}  // namespace novikov
