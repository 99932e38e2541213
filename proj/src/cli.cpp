#include "qbnf/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "qbnf/dos_probe.hpp"
#include "qbnf/errors.hpp"
#include "qbnf/inversion.hpp"
#include "qbnf/normal_form.hpp"
#include "qbnf/serialize.hpp"
#include "qbnf/spectra.hpp"
#include "qbnf/weyl_algebra.hpp"

namespace qbnf {

using io::Json;

void validate(const RunConfig& cfg) {
  if (cfg.max_degree % 2 != 0 || cfg.max_degree < 4 || cfg.max_degree > 16) {
    throw Error(ErrorCode::ConfigError, "max_degree must be even and within [4, 16], got " +
                                            std::to_string(cfg.max_degree));
  }
  for (std::size_t i = 0; i < cfg.hbar_list.size(); ++i) {
    if (!(cfg.hbar_list[i] > 0)) throw Error(ErrorCode::ConfigError, "hbar values must be positive");
    if (i > 0 && !(cfg.hbar_list[i] < cfg.hbar_list[i - 1])) {
      throw Error(ErrorCode::ConfigError, "hbar values must be strictly decreasing");
    }
  }
}

int default_max_degree() {
  const char* env = std::getenv("QBNF_MAX_DEGREE");
  if (env == nullptr || *env == '\0') return kDefaultMaxDegree;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0') throw Error(ErrorCode::ConfigError, std::string("QBNF_MAX_DEGREE is not an integer: ") + env);
  return static_cast<int>(v);
}

namespace {

std::string read_input(const RunConfig& cfg) {
  if (!cfg.inline_json.empty()) return cfg.inline_json;
  if (cfg.input.empty()) throw Error(ErrorCode::ConfigError, "no input given (path, '-' or --json)");
  if (cfg.input == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + cfg.input);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + cfg.output);
  f << text;
}

struct Check {
  std::string name;
  bool ok;
};

std::vector<Check> selftest_checks(std::uint64_t seed) {
  std::vector<Check> checks;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 5);
  auto random_rational = [&] { return Rational(num(rng), den(rng)); };

  {
    bool ok = true;
    for (int i = 0; i < 5; ++i) {
      PotentialJet jet;
      const Rational a = random_rational(), b = random_rational();
      jet.coeffs = {a, b};
      const auto nf = forward(jet, 4);
      ok = ok && nf.coeff(0, 2) == Rational(-15, 4) * a * a + Rational(3, 2) * b && nf.coeff(1, 0) == a * a / 2;
    }
    checks.push_back({"first terms b02 and b10", ok});
  }
  {
    const WeylPoly x = WeylPoly::x(), xi = WeylPoly::xi();
    const WeylPoly shifted = xi - x * x * Rational(3);
    const WeylPoly h = (shifted * shifted + x * x) * Rational(1, 2);
    checks.push_back({"gauge counterexample", birkhoff_forward(h, Sign::Plus, 10).nf.b.empty()});
  }
  {
    bool ok = true;
    for (int n = 1; n <= 6; ++n) {
      ok = ok && bracket_j(WeylPoly::omega(Sign::Plus), sigma_poly(n, Sign::Plus), 1) ==
                     WeylPoly::monomial(2 * n - 1, 0, 0, 1);
    }
    checks.push_back({"sigma polynomials", ok});
  }
  {
    const WeylPoly omega = WeylPoly::omega(Sign::Plus);
    const WeylPoly expected = omega * omega - WeylPoly::monomial(0, 0, 2, Rational(1, 4));
    checks.push_back({"omega star square", star_product(omega, omega, kNoTruncation) == expected});
  }
  {
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      PotentialJet jet;
      Rational a3 = random_rational();
      if (a3 == 0) a3 = 1;
      jet.coeffs = {a3, random_rational(), random_rational(), random_rational()};
      const auto inv = invert_qbnf(forward(jet, 6), a3 > 0 ? 1 : -1);
      ok = ok && inv.jet == jet;
    }
    checks.push_back({"inversion roundtrip", ok});
  }
  {
    bool ok = true;
    for (int n = 0; n <= 5; ++n) {
      PotentialJet jet;
      const Rational a = random_rational(), b = random_rational();
      jet.coeffs = {a, b};
      ok = ok && predicted_hbar2_coefficient(weyl_to_functional(forward(jet, 4)), n) ==
                     perturbation_oracle_exact(a, b, n);
    }
    checks.push_back({"hbar^2 prediction vs perturbation theory", ok});
  }
  return checks;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Birkhoff normal forms of 1D Schrodinger operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qbnf 1.0");

  RunConfig cfg;
  int degree = -1;
  int levels = 4;
  double hbar = 0.01;
  std::string sign_text = "+";
  bool emit_generator = false;
  bool hamiltonian = false;
  bool functional = false;
  bool table = false;
  double window_lo = NAN;
  double window_hi = NAN;
  double probe_energy = NAN;
  DosBox box;
  double kernel_scale = 0.3;
  std::string data_dir;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Input JSON file, or - for stdin");
    sub->add_option("--json", cfg.inline_json, "Inline input JSON");
    sub->add_option("-o,--output", cfg.output, "Output file (default stdout)");
  };
  auto add_degree = [&](CLI::App* sub) {
    sub->add_option("-d,--degree,--max-degree", degree, "Truncation degree (even, 4..16)");
  };
  auto add_dos = [&](CLI::App* sub) {
    add_io(sub);
    sub->add_option("--hbar-list", cfg.hbar_list, "Decreasing hbar values")->delimiter(',');
    sub->add_option("--window-lo", window_lo, "Lower end of the energy window");
    sub->add_option("--window-hi", window_hi, "Upper end of the energy window");
    sub->add_option("--box-lo", box.x_lo, "Left wall of the Dirichlet box");
    sub->add_option("--box-hi", box.x_hi, "Right wall of the Dirichlet box");
    sub->add_option("--intervals", box.intervals, "Grid intervals (multiple of 4)");
    sub->add_option("--kernel-scale", kernel_scale, "Kernel width in units of sqrt(hbar)");
    sub->add_option("--data-dir", data_dir, "Write E/density data files here");
  };

  auto* fwd = app.add_subcommand("forward", "Jet to quantum Birkhoff normal form");
  add_io(fwd);
  add_degree(fwd);
  fwd->add_flag("--emit-generator", emit_generator, "Include the generator S");
  fwd->add_flag("--hamiltonian", hamiltonian, "Input is a raw Weyl symbol {sign, terms}");
  fwd->add_flag("--functional", functional, "Include the operator-form coefficients");

  auto* inv = app.add_subcommand("invert", "Normal form to jet");
  add_io(inv);
  inv->add_option("--sign", sign_text, "Sign of a3 (+ or -)")->check(CLI::IsMember({"+", "-"}));

  auto* pred = app.add_subcommand("predict", "Eigenvalue predictions from a jet or normal form");
  add_io(pred);
  add_degree(pred);
  pred->add_option("--hbar-list", cfg.hbar_list, "Decreasing hbar values")->delimiter(',');
  pred->add_option("--levels", levels, "Number of levels")->check(CLI::Range(1, 1000));

  auto* ver = app.add_subcommand("verify", "Spectral convergence study");
  add_io(ver);
  add_degree(ver);
  ver->add_option("--hbar-list", cfg.hbar_list, "Decreasing hbar values")->delimiter(',');
  ver->add_option("--levels", levels, "Number of levels")->check(CLI::Range(1, 100));
  ver->add_flag("--table", table, "Plain-text table instead of JSON");

  auto* dmax = app.add_subcommand("dos-max", "Log singularity of the level density at a local maximum");
  add_dos(dmax);
  auto* dmin = app.add_subcommand("dos-min", "Heaviside jump of the level density at a local minimum");
  add_dos(dmin);
  dmin->add_option("--probe-energy", probe_energy, "Energy of the step (default V(0))");

  auto* rt = app.add_subcommand("roundtrip", "forward then invert, compared exactly");
  add_io(rt);
  add_degree(rt);

  auto* st = app.add_subcommand("selftest", "Quick exact identity checks");
  st->add_option("--seed", cfg.seed, "Seed for random jets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.max_degree = degree >= 0 ? degree : default_max_degree();
    cfg.subcommand = app.get_subcommands().front()->get_name();
    validate(cfg);
    const std::string& name = cfg.subcommand;

    if (name == "forward") {
      const Json in = io::parse_json(read_input(cfg));
      ForwardResult fr;
      if (hamiltonian) {
        const auto raw = io::hamiltonian_from_json(in);
        fr = birkhoff_forward(raw.h, raw.sign, cfg.max_degree);
        fr.nf.e0 = raw.e0;
      } else {
        const auto jet = io::jet_from_json(in);
        fr = birkhoff_forward(jet_to_hamiltonian(jet), jet.sign, cfg.max_degree);
        fr.nf.e0 = jet.e0;
      }
      Json result = io::to_json(fr.nf);
      if (emit_generator) result["generator"] = io::to_json(fr.generator.s);
      if (functional) result["bhat"] = io::to_json(weyl_to_functional(fr.nf))["bhat"];
      write_output(cfg, io::dump(result), out);
      return 0;
    }

    if (name == "invert") {
      const auto nf = io::nf_from_json(io::parse_json(read_input(cfg)));
      const auto r = invert_qbnf(nf, sign_text == "-" ? -1 : 1);
      write_output(cfg, io::dump(io::to_json(r)), out);
      return 0;
    }

    if (name == "predict") {
      const Json in = io::parse_json(read_input(cfg));
      FunctionalNormalForm fnf;
      if (in.is_object() && in.contains("bhat")) {
        fnf = io::fnf_from_json(in);
      } else if (in.is_object() && in.contains("b")) {
        fnf = weyl_to_functional(io::nf_from_json(in));
      } else {
        fnf = weyl_to_functional(forward(io::jet_from_json(in), cfg.max_degree));
      }
      std::vector<double> hbars = cfg.hbar_list.empty() ? std::vector<double>{hbar} : cfg.hbar_list;
      Json rows = Json::array();
      for (double h : hbars) {
        rows.push_back({{"hbar", h}, {"eigenvalues", predict_eigenvalues(fnf, to_double(fnf.e0), h, levels)}});
      }
      Json result = io::to_json(fnf);
      result["predictions"] = rows;
      write_output(cfg, io::dump(result), out);
      return 0;
    }

    if (name == "verify") {
      const auto jet = io::jet_from_json(io::parse_json(read_input(cfg)));
      const std::vector<double> hbars =
          cfg.hbar_list.empty() ? std::vector<double>{0.08, 0.04, 0.02, 0.01} : cfg.hbar_list;
      StudyOptions opts;
      opts.levels = levels;
      const auto report = convergence_study(jet, hbars, cfg.max_degree, opts);
      write_output(cfg, table ? io::to_table(report) : io::dump(io::to_json(report)), out);
      if (!report.passed) {
        err << "verification failed: a fitted slope is below " << report.slope_bound << "\n";
        return exit_code(ErrorCode::VerificationFailure);
      }
      return 0;
    }

    if (name == "dos-max" || name == "dos-min") {
      const auto jet = io::jet_from_json(io::parse_json(read_input(cfg)));
      const Potential v = jet_potential(jet);
      const std::vector<double> hbars =
          cfg.hbar_list.empty() ? std::vector<double>{0.02, 0.01, 0.005} : cfg.hbar_list;
      const double e0 = to_double(jet.e0);
      Json result;
      double lo = 0, hi = 0;
      if (name == "dos-max") {
        LogFitOptions opts;
        opts.kernel_scale = kernel_scale;
        hi = std::isnan(window_hi) ? e0 + 0.45 : window_hi;
        lo = e0;
        result = io::to_json(log_singularity_fit(v, hbars, hi, box, opts));
      } else {
        JumpFitOptions opts;
        opts.kernel_scale = kernel_scale;
        opts.probe_energy = probe_energy;
        lo = std::isnan(window_lo) ? e0 - 0.3 : window_lo;
        hi = std::isnan(window_hi) ? e0 + 0.5 : window_hi;
        result = io::to_json(heaviside_jump_fit(v, hbars, lo, hi, box, opts));
      }
      if (!data_dir.empty()) {
        std::filesystem::create_directories(data_dir);
        for (double h : hbars) {
          const auto sample = compute_dos_sample(v, h, lo, hi, box, kernel_scale);
          char file[64];
          std::snprintf(file, sizeof file, "density_%.6g.dat", h);
          std::ofstream f(std::filesystem::path(data_dir) / file);
          f << "# E  rho(E), hbar = " << h << "\n" << density_data(sample, lo, hi, 400);
        }
      }
      write_output(cfg, io::dump(result), out);
      return 0;
    }

    if (name == "roundtrip") {
      const auto jet = io::jet_from_json(io::parse_json(read_input(cfg)));
      const int sign_choice = jet.a(3) < 0 ? -1 : 1;
      const auto nf = forward(jet, cfg.max_degree);
      const auto r = invert_qbnf(nf, sign_choice);
      PotentialJet expected = jet;
      if (expected.order() > 2 * (cfg.max_degree / 2)) expected.coeffs.resize(2 * (cfg.max_degree / 2) - 2);
      const bool ok = r.jet == expected;
      Json result = {{"ok", ok}, {"input", io::to_json(expected)}, {"normal_form", io::to_json(nf)},
                     {"recovered", io::to_json(r)}};
      write_output(cfg, io::dump(result), out);
      if (!ok) {
        err << "roundtrip mismatch\n";
        return exit_code(ErrorCode::VerificationFailure);
      }
      return 0;
    }

    if (name == "selftest") {
      bool all = true;
      for (const auto& c : selftest_checks(cfg.seed)) {
        out << (c.ok ? "PASS " : "FAIL ") << c.name << "\n";
        all = all && c.ok;
      }
      return all ? 0 : exit_code(ErrorCode::VerificationFailure);
    }
  } catch (const Error& e) {
    err << "qbnf: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "qbnf: internal error: " << e.what() << "\n";
    return 5;
  }
  return 5;
}

}  // namespace qbnf
