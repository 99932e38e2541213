#include "qbnf/dos_probe.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <sstream>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

constexpr double kKernelReach = 8.0;  // kernel widths kept around the window

double kernel_width(double hbar, double scale) { return scale * std::sqrt(hbar); }

}  // namespace

DosSample compute_dos_sample(const Potential& v, double hbar, double window_lo, double window_hi, const DosBox& box,
                             double kernel_scale) {
  if (!(window_hi > window_lo) || hbar <= 0) throw Error(ErrorCode::WindowError, "empty window or hbar <= 0");
  if (box.intervals % 4 != 0 || box.intervals < 64) throw Error(ErrorCode::ConfigError, "box intervals must be a multiple of 4");
  DosSample sample;
  sample.hbar = hbar;
  sample.window_lo = window_lo;
  sample.window_hi = window_hi;
  sample.kernel_width = kernel_width(hbar, kernel_scale);
  const double lo = window_lo - kKernelReach * sample.kernel_width;
  const double hi = window_hi + kKernelReach * sample.kernel_width;
  const double mid = 0.5 * (box.x_lo + box.x_hi);
  for (double wall : {box.x_lo, box.x_hi}) {
    if (wall_decay_exponent(v, wall, mid, hi, hbar) < 18.0) {
      throw Error(ErrorCode::WindowError, "orbits at energy " + std::to_string(hi) + " reach the box wall");
    }
  }
  const int first = fd_count_below(v, box.x_lo, box.x_hi, box.intervals, hbar, lo);
  const int last = fd_count_below(v, box.x_lo, box.x_hi, box.intervals, hbar, hi) - 1;
  if (last < first) return sample;
  // h^4 Richardson on indices fixed by the fine grid
  const auto coarse = fd_eigenvalues_by_index(v, box.x_lo, box.x_hi, box.intervals / 2, hbar, first, last);
  const auto fine = fd_eigenvalues_by_index(v, box.x_lo, box.x_hi, box.intervals, hbar, first, last);
  if (coarse.size() != fine.size()) throw Error(ErrorCode::WindowError, "eigenvalue computation did not converge");
  sample.eigenvalues.resize(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) sample.eigenvalues[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return sample;
}

double SampledFunction::operator()(double t) const {
  if (x.empty() || t < x.front() || t > x.back()) return 0.0;
  auto it = std::upper_bound(x.begin(), x.end(), t);
  if (it == x.end()) return y.back();
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  if (i == 0) return y.front();
  const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

double smoothed_dos(const DosSample& sample, const SampledFunction& f) {
  if (f.x.empty()) return 0.0;
  if (f.x.size() != f.y.size()) throw Error(ErrorCode::WindowError, "test function samples are inconsistent");
  if (f.x.front() < sample.window_lo || f.x.back() > sample.window_hi || f.y.front() != 0.0 || f.y.back() != 0.0) {
    throw Error(ErrorCode::WindowError, "test function is not compactly supported inside the window");
  }
  double sum = 0.0;
  for (double lambda : sample.eigenvalues) sum += f(lambda);
  return sum;
}

double level_density(const DosSample& sample, double e) {
  const double s = sample.kernel_width;
  const double norm = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
  double sum = 0.0;
  for (double lambda : sample.eigenvalues) {
    const double u = (e - lambda) / s;
    if (std::abs(u) < kKernelReach + 2.0) sum += std::exp(-0.5 * u * u);
  }
  return sum * norm;
}

namespace {

double turning_point(const Potential& v, double e, double a, double b) {
  auto f = [&](double x) { return e - v(x); };
  if (f(a) == 0) return a;
  if (f(b) == 0) return b;
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, a, b, f(a), f(b), tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double classical_period(const Potential& v, double e, double x_lo, double x_hi) {
  const int samples = 4000;
  const double dx = (x_hi - x_lo) / samples;
  double total = 0.0;
  double start = std::numeric_limits<double>::quiet_NaN();
  double prev_gap = e - v(x_lo);
  if (prev_gap > 0) start = x_lo;
  auto integrate = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    auto integrand = [&](double theta) {
      const double gap = e - v(mid + rad * std::sin(theta));
      if (gap <= 0) return 0.0;
      return rad * std::cos(theta) / std::sqrt(2.0 * gap);
    };
    double err = 0;
    return 2.0 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                     integrand, -std::numbers::pi / 2, std::numbers::pi / 2, 15, 1e-11, &err);
  };
  double prev_x = x_lo;
  for (int i = 1; i <= samples; ++i) {
    const double x = x_lo + i * dx;
    const double gap = e - v(x);
    if (prev_gap <= 0 && gap > 0) start = turning_point(v, e, prev_x, x);
    if (prev_gap > 0 && gap <= 0) {
      total += integrate(start, turning_point(v, e, prev_x, x));
      start = std::numeric_limits<double>::quiet_NaN();
    }
    prev_gap = gap;
    prev_x = x;
  }
  if (!std::isnan(start)) total += integrate(start, x_hi);
  return total;
}

double smoothed_classical_period(const Potential& v, double e, double sigma, double x_lo, double x_hi) {
  const int nodes = 121;
  const double reach = 6.0;
  const double du = 2.0 * reach / (nodes - 1);
  double sum = 0.0;
  double weight = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double u = -reach + i * du;
    const double t = classical_period(v, e + sigma * u, x_lo, x_hi);
    if (!std::isfinite(t)) continue;
    const double w = std::exp(-0.5 * u * u);
    sum += w * t;
    weight += w;
  }
  return sum / weight;
}

namespace {

struct LeastSquares {
  Eigen::VectorXd coeffs;
  double rss = 0;
  double r_squared = 0;
};

LeastSquares least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  LeastSquares out;
  out.coeffs = a.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd res = y - a * out.coeffs;
  out.rss = res.squaredNorm();
  const double mean = y.mean();
  const double tss = (y.array() - mean).square().sum();
  out.r_squared = tss > 0 ? 1.0 - out.rss / tss : 1.0;
  return out;
}

Eigen::MatrixXd log_design(const std::vector<double>& energies, double e0) {
  Eigen::MatrixXd a(energies.size(), 4);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double e = energies[i];
    a(i, 0) = std::abs(std::log(e - e0));
    a(i, 1) = 1.0;
    a(i, 2) = e - e0;
    a(i, 3) = (e - e0) * (e - e0);
  }
  return a;
}

Eigen::MatrixXd poly_design(const std::vector<double>& energies, double e0) {
  Eigen::MatrixXd a(energies.size(), 4);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double e = energies[i] - e0;
    a(i, 0) = 1.0;
    a(i, 1) = e;
    a(i, 2) = e * e;
    a(i, 3) = e * e * e;
  }
  return a;
}

double bic(double rss, std::size_t n, int k) {
  const double dn = static_cast<double>(n);
  return dn * std::log(std::max(rss, 1e-300) / dn) + k * std::log(dn);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

LogSingularityReport log_singularity_fit(const Potential& v, const std::vector<double>& hbar_list, double window_hi,
                                         const DosBox& box, const LogFitOptions& options) {
  if (hbar_list.empty()) throw Error(ErrorCode::ConfigError, "empty hbar list");
  LogSingularityReport report;
  report.e0 = v(0.0);
  const double h = 1e-3;
  report.curvature = (-v(2 * h) + 16 * v(h) - 30 * v(0.0) + 16 * v(-h) - v(-2 * h)) / (12 * h * h);
  if (report.curvature >= 0) throw Error(ErrorCode::FitError, "V''(0) >= 0: no local maximum at the origin");
  report.analytic_coefficient = 2.0 / std::sqrt(std::abs(report.curvature));

  std::vector<double> sorted = hbar_list;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::future<DosSample>> samples;
  for (double hbar : sorted) {
    const double e_start = report.e0 + options.start_widths * kernel_width(hbar, options.kernel_scale);
    if (window_hi - e_start < 4.0 * kernel_width(hbar, options.kernel_scale)) {
      throw Error(ErrorCode::FitError, "window too narrow for the kernel");
    }
    samples.push_back(std::async(std::launch::async, compute_dos_sample, std::cref(v), hbar, e_start, window_hi,
                                 std::cref(box), options.kernel_scale));
  }
  for (std::size_t idx = 0; idx < sorted.size(); ++idx) {
    const double hbar = sorted[idx];
    LogFitSample s;
    s.hbar = hbar;
    s.kernel_width = kernel_width(hbar, options.kernel_scale);
    const double e_start = report.e0 + options.start_widths * s.kernel_width;
    const DosSample sample = samples[idx].get();
    s.energies = linspace(e_start, window_hi, options.points);
    Eigen::VectorXd y(options.points);
    for (int i = 0; i < options.points; ++i) {
      y(i) = 2.0 * std::numbers::pi * hbar * level_density(sample, s.energies[i]);
      s.density.push_back(y(i));
    }
    const auto log_fit = least_squares(log_design(s.energies, report.e0), y);
    const auto poly_fit = least_squares(poly_design(s.energies, report.e0), y);
    s.coefficient = log_fit.coeffs(0);
    s.r_squared = log_fit.r_squared;
    s.bic_log = bic(log_fit.rss, s.energies.size(), 4);
    s.bic_poly = bic(poly_fit.rss, s.energies.size(), 4);
    const double spread = (y.maxCoeff() - y.minCoeff()) / std::abs(y.mean());
    s.log_selected = spread > 1e-3 && s.coefficient > 0 && s.r_squared >= options.min_r_squared &&
                     s.bic_log + options.bic_margin < s.bic_poly;
    report.samples.push_back(std::move(s));
  }
  const LogFitSample& finest = report.samples.back();
  if (!finest.log_selected) {
    throw Error(ErrorCode::FitError, "log model rejected at hbar = " + std::to_string(finest.hbar) +
                                         " (c = " + std::to_string(finest.coefficient) +
                                         ", R^2 = " + std::to_string(finest.r_squared) + ")");
  }
  report.coefficient = finest.coefficient;

  Eigen::VectorXd t(finest.energies.size());
  for (std::size_t i = 0; i < finest.energies.size(); ++i) {
    t(i) = smoothed_classical_period(v, finest.energies[i], finest.kernel_width, box.x_lo, box.x_hi);
  }
  report.classical_coefficient = least_squares(log_design(finest.energies, report.e0), t).coeffs(0);
  report.relative_error = std::abs(report.coefficient - report.classical_coefficient) / report.classical_coefficient;
  return report;
}

JumpReport heaviside_jump_fit(const Potential& v, const std::vector<double>& hbar_list, double window_lo,
                              double window_hi, const DosBox& box, const JumpFitOptions& options) {
  if (hbar_list.empty()) throw Error(ErrorCode::ConfigError, "empty hbar list");
  JumpReport report;
  report.probe_energy = std::isnan(options.probe_energy) ? v(0.0) : options.probe_energy;
  const double ec = report.probe_energy;
  std::vector<double> sorted = hbar_list;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::future<DosSample>> samples;
  for (double hbar : sorted) {
    const double width = kernel_width(hbar, options.kernel_scale);
    const double gap = options.gap_widths * width;
    if (ec + gap + 2.0 * width > window_hi || ec - gap - 2.0 * width < window_lo) {
      throw Error(ErrorCode::FitError, "window leaves no room for a fit on both sides of " + std::to_string(ec));
    }
    samples.push_back(std::async(std::launch::async, compute_dos_sample, std::cref(v), hbar, window_lo, window_hi,
                                 std::cref(box), options.kernel_scale));
  }
  for (std::size_t idx = 0; idx < sorted.size(); ++idx) {
    const double hbar = sorted[idx];
    JumpSample s;
    s.hbar = hbar;
    s.kernel_width = kernel_width(hbar, options.kernel_scale);
    const double gap = options.gap_widths * s.kernel_width;
    const DosSample sample = samples[idx].get();
    auto side_limit = [&](double a, double b) {
      const auto energies = linspace(a, b, options.points);
      Eigen::MatrixXd design(options.points, 2);
      Eigen::VectorXd y(options.points);
      for (int i = 0; i < options.points; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = energies[i] - ec;
        y(i) = hbar * level_density(sample, energies[i]);
      }
      return least_squares(design, y).coeffs(0);
    };
    s.right_limit = side_limit(ec + gap, window_hi);
    s.left_limit = side_limit(window_lo, ec - gap);
    s.ratio = s.right_limit - s.left_limit;
    report.samples.push_back(s);
  }
  report.ratio = report.samples.back().ratio;
  report.detected = report.ratio > options.detection_threshold;
  return report;
}

std::string density_data(const DosSample& sample, double e_lo, double e_hi, int points) {
  std::ostringstream os;
  char line[96];
  for (double e : linspace(e_lo, e_hi, points)) {
    std::snprintf(line, sizeof line, "%.17g %.17g\n", e, level_density(sample, e));
    os << line;
  }
  return os.str();
}

}  // namespace qbnf
