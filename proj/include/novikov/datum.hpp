#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace novikov {

enum class DatumKind { peakon, antipeakon_pair, gaussian, tabulated };

const char* to_string(DatumKind kind) noexcept;
DatumKind datum_kind_from_string(const std::string& name);

/// Initial profile u0 together with its derivative.
///
/// Closed forms:
///   peakon           sign*sqrt(c) * exp(-|x - x0|)
///   antipeakon_pair  sqrt(c) * (exp(-|x - x0 + s/2|) - exp(-|x - x0 - s/2|))
///   gaussian         a * exp(-((x - x0)/w)^2)
/// A tabulated datum interpolates samples linearly; its slope comes from
/// centered differences (one-sided at the ends). Any datum may carry an
/// additive perturbation delta * psi((x - xp)/wp), psi(s) = s exp(-s^2)
/// scaled to unit H1 + W^{1,4} norm.
class InitialDatum {
 public:
  static InitialDatum zero();
  static InitialDatum peakon(double speed, double crest = 0.0, int sign = 1);
  static InitialDatum antipeakon_pair(double speed, double separation, double center = 0.0);
  static InitialDatum gaussian(double amplitude = 1.0, double width = 1.0, double center = 0.0);
  static InitialDatum tabulated(std::vector<double> xs, std::vector<double> us);

  DatumKind kind() const noexcept { return kind_; }
  double speed() const noexcept { return speed_; }
  double amplitude() const noexcept { return amplitude_; }
  double width() const noexcept { return width_; }
  double center() const noexcept { return center_; }
  double separation() const noexcept { return separation_; }
  int sign() const noexcept { return sign_; }
  const std::vector<double>& sample_x() const noexcept { return xs_; }
  const std::vector<double>& sample_u() const noexcept { return us_; }
  const std::vector<double>& sample_du() const noexcept { return dus_; }

  double value(double x) const;
  double slope(double x) const;

  /// Points where u0' is discontinuous (crests of peaked data).
  std::vector<double> kinks() const;

  /// Same datum with every value multiplied by alpha.
  InitialDatum scaled(double alpha) const;

  /// Adds delta * psi((x - center)/width) with psi normalized in the
  /// H1 + W^{1,4} norm.
  InitialDatum perturbed(double delta, double center = 0.0, double width = 1.0) const;
  double perturbation_delta() const noexcept { return pert_delta_; }

 private:
  double base_value(double x) const;
  double base_slope(double x) const;

  DatumKind kind_ = DatumKind::gaussian;
  double scale_ = 1.0;
  double amplitude_ = 0.0;
  double speed_ = 0.0;
  double width_ = 1.0;
  double center_ = 0.0;
  double separation_ = 0.0;
  int sign_ = 1;
  std::vector<double> xs_, us_, dus_;

  double pert_delta_ = 0.0;
  double pert_center_ = 0.0;
  double pert_width_ = 1.0;
  double pert_norm_ = 1.0;
};

}  // namespace novikov
