#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qbnf/normal_form.hpp"

namespace qbnf {

using Potential = std::function<double(double)>;

/// V(x) of the jet with coefficients converted to double once.
Potential jet_potential(const PotentialJet& jet);

/// Uniform-grid Dirichlet discretization of -hbar^2/2 d^2/dx^2 + V on
/// [center - half_width, center + half_width].
struct EigensolverConfig {
  double half_width = 1.0;
  /// Interval count of the finest grid; the solver also runs 1/2, 1/4 and
  /// 1/8 of it for Richardson extrapolation and its error estimate.
  int grid_points = 4000;
  double hbar = 0.1;
  int levels = 4;
  double center = 0.0;
  /// Reject the solve when any error estimate exceeds this (<= 0 disables).
  double tolerance = 0.0;
  /// Minimum WKB decay exponent between the outermost turning point of the
  /// highest level and each wall.
  double min_decay_exponent = 18.0;
};

struct EigenSpectrum {
  std::vector<double> values;
  /// |R6(coarse) - R6(fine)|: a conservative bound on the extrapolated error.
  std::vector<double> error_estimates;
};

/// Raw second-order finite-difference eigenvalues on `intervals` intervals,
/// either the lowest `count` or all of them inside [lo, hi].
std::vector<double> fd_eigenvalues_lowest(const Potential& v, double x_lo, double x_hi, int intervals,
                                          double hbar, int count);
std::vector<double> fd_eigenvalues_in_range(const Potential& v, double x_lo, double x_hi, int intervals,
                                            double hbar, double lo, double hi);

/// Tunnelling exponent int sqrt(2(V - e))/hbar dx from the wall at x_wall
/// inward to the first classically allowed point at or before x_inner.
/// Returns -1 if V <= e already at the wall.
double wall_decay_exponent(const Potential& v, double x_wall, double x_inner, double e, double hbar);

/// Number of eigenvalues below `shift` of the finite-difference operator
/// (Sturm sequence count).
int fd_count_below(const Potential& v, double x_lo, double x_hi, int intervals, double hbar, double shift);

/// Eigenvalues with (0-based) indices first..last inclusive.
std::vector<double> fd_eigenvalues_by_index(const Potential& v, double x_lo, double x_hi, int intervals,
                                            double hbar, int first, int last);

/// Lowest cfg.levels eigenvalues, h^6-Richardson extrapolated. Throws
/// ConfigError when the turning-point guard or the tolerance fails.
EigenSpectrum solve_eigenvalues(const Potential& v, const EigensolverConfig& cfg);

/// Largest r <= max_half_width such that V increases monotonically away
/// from `center` on [center - r, center + r].
double confining_half_width(const Potential& v, double center, double max_half_width);

/// E_n = E0 + hbar (n+1/2) + sum bhat_{j,k} hbar^{2j} (hbar (n+1/2))^k for
/// n = 0 .. count-1. Throws WrongSign unless sign = +.
std::vector<double> predict_eigenvalues(const FunctionalNormalForm& fnf, double e0, double hbar, int count);

/// hbar^2 energy coefficient for V = x^2/2 + a x^3 + b x^4 at level n:
/// (3b/4)(2n^2+2n+1) - (a^2/8)(30n^2+30n+11).
double perturbation_oracle(double a, double b, int n);
Rational perturbation_oracle_exact(const Rational& a, const Rational& b, int n);

/// hbar^2 coefficient of the functional-normal-form prediction at level n.
Rational predicted_hbar2_coefficient(const FunctionalNormalForm& fnf, int n);

struct SpectralRow {
  double hbar = 0;
  int level = 0;
  double numeric = 0;
  double prediction = 0;
  double residual = 0;
  double solver_error = 0;
  bool floor_dominated = false;
};

struct LevelFit {
  int level = 0;
  /// Least-squares slope of log residual vs log hbar (nullopt when fewer
  /// than two points are above the solver floor).
  std::optional<double> slope;
  double intercept = 0;
  double r_squared = 0;
  int points_used = 0;
};

struct SpectralReport {
  int degree = 0;
  int levels = 0;
  std::vector<double> hbars;
  std::vector<SpectralRow> rows;
  std::vector<LevelFit> fits;
  double expected_order = 0;
  double slope_bound = 0;
  bool passed = false;
};

struct StudyOptions {
  int levels = 4;
  /// Multiple of sqrt(hbar) used as the default box half-width.
  double box_scale = 10.0;
  int grid_points = 4000;
  /// Residuals below floor_factor * solver error are not fitted.
  double floor_factor = 2.0;
  /// A level passes when slope >= (degree + 2)/2 - slope_tolerance.
  double slope_tolerance = 0.3;
};

/// Compares numeric eigenvalues of the jet potential against predictions
/// from `nf` (already truncated at the study degree) for each hbar.
SpectralReport convergence_study(const PotentialJet& jet, const NormalFormSeries& nf,
                                 const std::vector<double>& hbar_list, const StudyOptions& options = {});

/// forward(jet, degree) followed by the study above.
SpectralReport convergence_study(const PotentialJet& jet, const std::vector<double>& hbar_list, int degree,
                                 const StudyOptions& options = {});

/// Least-squares line through (x_i, y_i): {slope, intercept, r^2}.
struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qbnf
