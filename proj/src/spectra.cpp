#include "qbnf/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

Tridiagonal assemble(const Potential& v, double x_lo, double x_hi, int intervals, double hbar) {
  if (intervals < 3) throw Error(ErrorCode::ConfigError, "grid needs at least 3 intervals");
  const double h = (x_hi - x_lo) / intervals;
  const double kinetic = hbar * hbar / (h * h);
  Tridiagonal t;
  t.diag.resize(intervals - 1);
  t.off.assign(intervals - 2, -0.5 * kinetic);
  for (int i = 1; i < intervals; ++i) t.diag[i - 1] = kinetic + v(x_lo + i * h);
  return t;
}

std::vector<double> run_stebz(Tridiagonal t, char range, double lo, double hi, int il, int iu) {
  const lapack_int n = static_cast<lapack_int>(t.diag.size());
  std::vector<double> w(n);
  std::vector<lapack_int> iblock(n), isplit(n);
  lapack_int m = 0, nsplit = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dstebz(range, 'E', n, lo, hi, il, iu, abstol, t.diag.data(), t.off.data(), &m,
                                         &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0) throw Error(ErrorCode::ConfigError, "dstebz failed with info " + std::to_string(info));
  w.resize(m);
  return w;
}

}  // namespace

std::vector<double> fd_eigenvalues_lowest(const Potential& v, double x_lo, double x_hi, int intervals, double hbar,
                                          int count) {
  auto t = assemble(v, x_lo, x_hi, intervals, hbar);
  if (count < 1 || count > static_cast<int>(t.diag.size())) {
    throw Error(ErrorCode::ConfigError, "requested level count out of range");
  }
  return run_stebz(std::move(t), 'I', 0.0, 0.0, 1, count);
}

std::vector<double> fd_eigenvalues_in_range(const Potential& v, double x_lo, double x_hi, int intervals,
                                            double hbar, double lo, double hi) {
  return run_stebz(assemble(v, x_lo, x_hi, intervals, hbar), 'V', lo, hi, 0, 0);
}

std::vector<double> fd_eigenvalues_by_index(const Potential& v, double x_lo, double x_hi, int intervals,
                                            double hbar, int first, int last) {
  auto t = assemble(v, x_lo, x_hi, intervals, hbar);
  if (first < 0 || last < first || last >= static_cast<int>(t.diag.size())) {
    throw Error(ErrorCode::ConfigError, "eigenvalue index range out of bounds");
  }
  return run_stebz(std::move(t), 'I', 0.0, 0.0, first + 1, last + 1);
}

int fd_count_below(const Potential& v, double x_lo, double x_hi, int intervals, double hbar, double shift) {
  const auto t = assemble(v, x_lo, x_hi, intervals, hbar);
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double coupling = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1] / q;
    q = t.diag[i] - shift - coupling;
    if (q == 0.0) q = -1e-300;
    if (q < 0) ++count;
  }
  return count;
}

double wall_decay_exponent(const Potential& v, double x_wall, double x_inner, double e, double hbar) {
  const int samples = 8000;
  const double dx = (x_inner - x_wall) / samples;
  double prev_gap = v(x_wall) - e;
  if (prev_gap <= 0) return -1.0;
  double exponent = 0.0;
  double prev = std::sqrt(2.0 * prev_gap);
  for (int i = 1; i <= samples; ++i) {
    const double gap = v(x_wall + i * dx) - e;
    if (gap <= 0) break;
    const double cur = std::sqrt(2.0 * gap);
    exponent += 0.5 * (prev + cur) * std::abs(dx) / hbar;
    prev = cur;
  }
  return exponent;
}

namespace {

std::vector<double> richardson6(const std::vector<double>& l1, const std::vector<double>& l2,
                                const std::vector<double>& l4) {
  std::vector<double> out(l1.size());
  for (std::size_t i = 0; i < l1.size(); ++i) out[i] = (64.0 * l4[i] - 20.0 * l2[i] + l1[i]) / 45.0;
  return out;
}

}  // namespace

Potential jet_potential(const PotentialJet& jet) {
  std::vector<double> c(jet.order() + 1, 0.0);
  c[0] = to_double(jet.e0);
  c[2] = 0.5 * sign_value(jet.sign);
  for (int j = 3; j <= jet.order(); ++j) c[j] = to_double(jet.a(j));
  return [c](double x) {
    double v = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) v = v * x + c[j];
    return v;
  };
}

EigenSpectrum solve_eigenvalues(const Potential& v, const EigensolverConfig& cfg) {
  if (cfg.hbar <= 0 || cfg.half_width <= 0 || cfg.levels < 1) {
    throw Error(ErrorCode::ConfigError, "hbar, half_width and levels must be positive");
  }
  if (cfg.grid_points % 8 != 0 || cfg.grid_points < 64) {
    throw Error(ErrorCode::ConfigError, "grid_points must be a multiple of 8 and at least 64");
  }
  const double lo = cfg.center - cfg.half_width;
  const double hi = cfg.center + cfg.half_width;
  std::vector<std::vector<double>> raw;
  for (int div : {8, 4, 2, 1}) raw.push_back(fd_eigenvalues_lowest(v, lo, hi, cfg.grid_points / div, cfg.hbar, cfg.levels));
  const auto coarse = richardson6(raw[0], raw[1], raw[2]);
  const auto fine = richardson6(raw[1], raw[2], raw[3]);
  EigenSpectrum out;
  out.values = fine;
  out.error_estimates.resize(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) out.error_estimates[i] = std::abs(fine[i] - coarse[i]);

  const double top = *std::max_element(fine.begin(), fine.end());
  for (int dir : {-1, 1}) {
    const double decay = wall_decay_exponent(v, cfg.center + dir * cfg.half_width, cfg.center, top, cfg.hbar);
    if (decay < cfg.min_decay_exponent) {
      throw Error(ErrorCode::ConfigError, "turning point of level " + std::to_string(cfg.levels - 1) +
                                              " too close to the " + (dir < 0 ? "left" : "right") +
                                              " wall (decay exponent " + std::to_string(decay) + ")");
    }
  }
  if (cfg.tolerance > 0) {
    for (std::size_t i = 0; i < fine.size(); ++i) {
      if (out.error_estimates[i] > cfg.tolerance) {
        throw Error(ErrorCode::ConfigError, "discretization error estimate " + std::to_string(out.error_estimates[i]) +
                                                " exceeds tolerance for level " + std::to_string(i));
      }
    }
  }
  return out;
}

double confining_half_width(const Potential& v, double center, double max_half_width) {
  const int samples = 20000;
  const double dx = max_half_width / samples;
  double limit = max_half_width;
  for (int dir : {-1, 1}) {
    double prev = v(center);
    for (int i = 1; i <= samples; ++i) {
      const double cur = v(center + dir * i * dx);
      if (cur < prev) {
        limit = std::min(limit, (i - 1) * dx);
        break;
      }
      prev = cur;
    }
  }
  return limit;
}

std::vector<double> predict_eigenvalues(const FunctionalNormalForm& fnf, double e0, double hbar, int count) {
  if (fnf.sign != Sign::Plus) {
    throw Error(ErrorCode::WrongSign, "eigenvalue prediction needs the elliptic (+) normal form");
  }
  std::vector<double> out;
  out.reserve(count);
  for (int n = 0; n < count; ++n) {
    const double omega = hbar * (n + 0.5);
    double e = e0 + omega;
    for (const auto& [idx, c] : fnf.b) {
      e += to_double(c) * std::pow(hbar, 2 * idx.first) * std::pow(omega, idx.second);
    }
    out.push_back(e);
  }
  return out;
}

double perturbation_oracle(double a, double b, int n) {
  const double nn = static_cast<double>(n);
  return 0.75 * b * (2 * nn * nn + 2 * nn + 1) - a * a / 8.0 * (30 * nn * nn + 30 * nn + 11);
}

Rational perturbation_oracle_exact(const Rational& a, const Rational& b, int n) {
  const Rational nn = n;
  return Rational(3, 4) * b * (2 * nn * nn + 2 * nn + 1) - a * a / 8 * (30 * nn * nn + 30 * nn + 11);
}

Rational predicted_hbar2_coefficient(const FunctionalNormalForm& fnf, int n) {
  // hbar^{2j} (hbar nu)^k contributes at hbar^2 when 2j + k = 2
  const Rational nu = Rational(2 * n + 1, 2);
  return fnf.coeff(0, 2) * nu * nu + fnf.coeff(1, 0);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

SpectralReport convergence_study(const PotentialJet& jet, const NormalFormSeries& nf,
                                 const std::vector<double>& hbar_list, const StudyOptions& options) {
  if (jet.sign != Sign::Plus) throw Error(ErrorCode::WrongSign, "convergence study needs a local minimum");
  for (std::size_t i = 0; i < hbar_list.size(); ++i) {
    if (hbar_list[i] <= 0 || (i > 0 && hbar_list[i] >= hbar_list[i - 1])) {
      throw Error(ErrorCode::ConfigError, "hbar list must be positive and strictly decreasing");
    }
  }
  const FunctionalNormalForm fnf = weyl_to_functional(nf);
  const Potential v = jet_potential(jet);
  const double e0 = to_double(jet.e0);

  SpectralReport report;
  report.degree = nf.max_degree;
  report.levels = options.levels;
  report.hbars = hbar_list;
  report.expected_order = (nf.max_degree + 2) / 2.0;
  report.slope_bound = report.expected_order - options.slope_tolerance;

  auto solve_one = [&](double hbar) {
    EigensolverConfig cfg;
    cfg.hbar = hbar;
    cfg.levels = options.levels;
    cfg.grid_points = options.grid_points;
    cfg.half_width = confining_half_width(v, 0.0, options.box_scale * std::sqrt(hbar));
    return solve_eigenvalues(v, cfg);
  };
  std::vector<std::future<EigenSpectrum>> solves;
  for (double hbar : hbar_list) solves.push_back(std::async(std::launch::async, solve_one, hbar));
  for (std::size_t i = 0; i < hbar_list.size(); ++i) {
    const double hbar = hbar_list[i];
    const auto spectrum = solves[i].get();
    const auto predicted = predict_eigenvalues(fnf, e0, hbar, options.levels);
    for (int n = 0; n < options.levels; ++n) {
      SpectralRow row;
      row.hbar = hbar;
      row.level = n;
      row.numeric = spectrum.values[n];
      row.prediction = predicted[n];
      row.residual = std::abs(row.numeric - row.prediction);
      row.solver_error = spectrum.error_estimates[n];
      row.floor_dominated = row.residual < options.floor_factor * row.solver_error;
      report.rows.push_back(row);
    }
  }

  report.passed = true;
  for (int n = 0; n < options.levels; ++n) {
    LevelFit fit;
    fit.level = n;
    std::vector<double> lx, ly;
    for (const auto& row : report.rows) {
      if (row.level != n || row.floor_dominated) continue;
      lx.push_back(std::log(row.hbar));
      ly.push_back(std::log(row.residual));
    }
    fit.points_used = static_cast<int>(lx.size());
    if (lx.size() >= 2) {
      const auto line = fit_line(lx, ly);
      fit.slope = line.slope;
      fit.intercept = line.intercept;
      fit.r_squared = line.r_squared;
      if (*fit.slope < report.slope_bound) report.passed = false;
    }
    report.fits.push_back(fit);
  }
  return report;
}

SpectralReport convergence_study(const PotentialJet& jet, const std::vector<double>& hbar_list, int degree,
                                 const StudyOptions& options) {
  return convergence_study(jet, forward(jet, degree), hbar_list, options);
}

}  // namespace qbnf
