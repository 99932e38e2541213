#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qbnf/spectra.hpp"

namespace qbnf {

/// Box and grid used for the eigenvalue comb.
struct DosBox {
  double x_lo = -2.5;
  double x_hi = 2.5;
  /// Finest interval count (multiple of 4; Richardson pairs it with half of it).
  int intervals = 8000;
};

struct DosSample {
  double hbar = 0;
  std::vector<double> eigenvalues;
  double window_lo = 0;
  double window_hi = 0;
  double kernel_width = 0;
};

/// Eigenvalues of the Dirichlet problem in [window_lo - 8 sigma,
/// window_hi + 8 sigma], sigma = kernel_scale * sqrt(hbar). Throws
/// WindowError if V at the walls does not exceed that range.
DosSample compute_dos_sample(const Potential& v, double hbar, double window_lo, double window_hi,
                             const DosBox& box = {}, double kernel_scale = 0.3);

/// Piecewise-linear test function, zero outside its sample range.
struct SampledFunction {
  std::vector<double> x;
  std::vector<double> y;
  double operator()(double t) const;
};

/// D_hbar(f) = sum_n f(lambda_n). Throws WindowError unless f vanishes at
/// both ends of its support and the support lies inside the window.
double smoothed_dos(const DosSample& sample, const SampledFunction& f);

/// Gaussian-smoothed level density sum_n g_sigma(e - lambda_n).
double level_density(const DosSample& sample, double e);

/// Classical period T(E) = dI/dE = sum over allowed intervals of
/// 2 int dx / sqrt(2 (E - V)), restricted to [x_lo, x_hi].
double classical_period(const Potential& v, double e, double x_lo, double x_hi);

/// T(E) convolved with the Gaussian kernel of width sigma.
double smoothed_classical_period(const Potential& v, double e, double sigma, double x_lo, double x_hi);

struct LogFitOptions {
  double kernel_scale = 0.3;
  /// Fit range starts this many kernel widths above E0.
  double start_widths = 4.0;
  int points = 60;
  /// Minimum BIC advantage of the log model over the polynomial model.
  double bic_margin = 10.0;
  double min_r_squared = 0.99;
};

struct LogFitSample {
  double hbar = 0;
  double kernel_width = 0;
  double coefficient = 0;
  double r_squared = 0;
  double bic_log = 0;
  double bic_poly = 0;
  bool log_selected = false;
  std::vector<double> energies;
  std::vector<double> density;  // (2 pi hbar) * level density
};

struct LogSingularityReport {
  double e0 = 0;
  double curvature = 0;  // V''(0)
  std::vector<LogFitSample> samples;
  /// Fitted c at the smallest hbar.
  double coefficient = 0;
  /// Same fit applied to the kernel-smoothed classical period.
  double classical_coefficient = 0;
  /// 2 / sqrt(|V''(0)|), the leading divergence of T(E).
  double analytic_coefficient = 0;
  double relative_error = 0;
};

/// Fits (2 pi hbar) rho(E) = c |log(E - E0)| + d + e E + f E^2 above the
/// local maximum V(0) = E0. Throws FitError when the log model is rejected
/// at the smallest hbar.
LogSingularityReport log_singularity_fit(const Potential& v, const std::vector<double>& hbar_list, double window_hi,
                                         const DosBox& box = {}, const LogFitOptions& options = {});

struct JumpFitOptions {
  double kernel_scale = 0.3;
  /// Each side's linear fit stays this many kernel widths away from the probe.
  double gap_widths = 4.0;
  int points = 40;
  /// Energy at which the step is measured; NaN means V(0).
  double probe_energy = std::numeric_limits<double>::quiet_NaN();
  /// A ratio above this counts as a detected jump.
  double detection_threshold = 0.5;
};

struct JumpSample {
  double hbar = 0;
  double kernel_width = 0;
  double right_limit = 0;
  double left_limit = 0;
  double ratio = 0;
};

struct JumpReport {
  double probe_energy = 0;
  std::vector<JumpSample> samples;
  /// Jump of hbar * rho at the probe energy (1 means a 2 pi step of
  /// (2 pi hbar) rho), at the smallest hbar.
  double ratio = 0;
  bool detected = false;
};

/// Estimates the step of hbar * rho(E) at the probe energy from linear fits
/// on either side within [window_lo, window_hi]. Throws FitError when a side
/// has no room for a fit.
JumpReport heaviside_jump_fit(const Potential& v, const std::vector<double>& hbar_list, double window_lo,
                              double window_hi, const DosBox& box = {}, const JumpFitOptions& options = {});

/// Two-column "E density" text for gnuplot.
std::string density_data(const DosSample& sample, double e_lo, double e_hi, int points);

}  // namespace qbnf
