#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "novikov/datum.hpp"
#include "novikov/integrator.hpp"
#include "novikov/lagrangian.hpp"

namespace novikov {

/// Parsed run configuration.
///
/// The text format is flat `section.key = value` lines; `#` starts a comment.
/// Lists are comma separated. Unknown or repeated keys are config errors.
struct RunConfig {
  // datum.*
  std::string datum_kind = "gaussian";  // gaussian | peakon | antipeakon-pair | tabulated | zero
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double speed = 1.0;
  double separation = 6.0;
  int sign = 1;
  std::string samples_file;  // tabulated: two columns x,u

  // run.*
  double x_lo = -12.0;
  double x_hi = 12.0;
  std::size_t N = 1024;
  int refinement = 8;
  double edge_tol = 1e-12;
  double dt = 1e-3;
  double T_end = 1.0;
  std::size_t snapshot_stride = 100;
  double breaking_tol = 1e-8;

  // tol.*
  double tol_E = 1e-6;
  double tol_F = 1e-5;
  double tol_bound = 1e-3;
  double tol_trace = -1.0;  // negative: 1e-4 (1 + E0)
  double tol_cross = 1e-3;
  double tol_exact = 2e-2;

  // trace.*
  std::vector<double> trace_y_bar;  // starting x positions
  std::size_t trace_substeps = 1;

  // compare.*
  std::vector<std::size_t> compare_N;
  std::vector<std::size_t> compare_M;
  double compare_reference_dt = -1.0;  // negative: run.dt
  double compare_min_ratio = 1.0;

  // perturb.*
  std::vector<double> perturb_delta{1e-2, 1e-3, 1e-4};
  double perturb_center = 0.0;
  double perturb_width = 1.0;
  double perturb_window = 5.0;  // half width of the comparison window around center

  // output.*
  std::string out_dir = ".";

  std::vector<std::string> warnings;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

InitialDatum make_datum(const RunConfig& config);
GridSpec make_grid(const RunConfig& config, std::size_t n);
StepperConfig make_stepper(const RunConfig& config);

}  // namespace novikov
