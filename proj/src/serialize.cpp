#include "qbnf/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qbnf/errors.hpp"

namespace qbnf::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

const Json* find(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

int int_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0 || v > 1000000) fail(where, "integer out of range");
  return static_cast<int>(v);
}

void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) fail(what, "expected a JSON object");
}

Json coeff_list(const CoeffMap& b, bool include_linear) {
  Json list = Json::array();
  for (const auto& [jk, c] : b) {
    if (!include_linear && jk == std::pair{0, 1}) continue;
    list.push_back({{"j", jk.first}, {"k", jk.second}, {"coeff", to_string(c)}});
  }
  return list;
}

template <class Series>
Series series_from_json(const Json& j, const char* key) {
  require_object(j, "normal form");
  Series s;
  if (auto* v = find(j, "sign")) s.sign = sign_from_json(*v, "sign");
  if (auto* v = find(j, "E0")) s.e0 = rational_from_json(*v, "E0");
  if (auto* v = find(j, "max_degree")) s.max_degree = int_from_json(*v, "max_degree");
  const Json* list = find(j, key);
  if (list == nullptr) return s;
  if (!list->is_array()) fail(key, "expected an array");
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    const Json& e = (*list)[i];
    require_object(e, where);
    if (!e.contains("j") || !e.contains("k") || !e.contains("coeff")) fail(where, "needs j, k and coeff");
    const int jj = int_from_json(e["j"], where + ".j");
    const int k = int_from_json(e["k"], where + ".k");
    if (2 * jj + k < 2) fail(where, "entries need 2j + k >= 2");
    if (4 * jj + 2 * k > s.max_degree) fail(where, "entry exceeds max_degree");
    s.add(jj, k, rational_from_json(e["coeff"], where + ".coeff"));
  }
  return s;
}

Json double_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return parse_rational(j.dump());
  if (!j.is_string()) fail(where, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

Json to_json(Sign s) { return std::string(1, sign_char(s)); }

Sign sign_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+") return Sign::Plus;
    if (s == "-") return Sign::Minus;
  } else if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v == 1) return Sign::Plus;
    if (v == -1) return Sign::Minus;
  }
  fail(where, "expected \"+\" or \"-\"");
}

Json to_json(const WeylPoly& p) {
  Json list = Json::array();
  for (const auto& [mono, c] : p.terms()) {
    list.push_back({{"l", mono.l}, {"m", mono.m}, {"n", mono.n}, {"coeff", to_string(c)}});
  }
  return list;
}

WeylPoly weyl_poly_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of terms");
  WeylPoly p;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const Json& t = j[i];
    require_object(t, w);
    if (!t.contains("coeff")) fail(w, "missing coeff");
    const int l = t.contains("l") ? int_from_json(t["l"], w + ".l") : 0;
    const int m = t.contains("m") ? int_from_json(t["m"], w + ".m") : 0;
    const int n = t.contains("n") ? int_from_json(t["n"], w + ".n") : 0;
    p.add_term(Monomial{l, m, n}, rational_from_json(t["coeff"], w + ".coeff"));
  }
  return p;
}

Json to_json(const PotentialJet& jet) {
  Json a = Json::array();
  for (const auto& c : jet.coeffs) a.push_back(to_string(c));
  return {{"sign", to_json(jet.sign)}, {"E0", to_string(jet.e0)}, {"a", a}};
}

PotentialJet jet_from_json(const Json& j) {
  require_object(j, "jet");
  PotentialJet jet;
  if (auto* v = find(j, "sign")) jet.sign = sign_from_json(*v, "sign");
  if (auto* v = find(j, "E0")) jet.e0 = rational_from_json(*v, "E0");
  if (auto* v = find(j, "a")) {
    if (!v->is_array()) fail("a", "expected an array [a3, a4, ...]");
    for (std::size_t i = 0; i < v->size(); ++i) {
      jet.coeffs.push_back(rational_from_json((*v)[i], "a[" + std::to_string(i) + "]"));
    }
  }
  return jet;
}

Json to_json(const NormalFormSeries& nf) {
  return {{"sign", to_json(nf.sign)}, {"E0", to_string(nf.e0)}, {"max_degree", nf.max_degree},
          {"b", coeff_list(nf.b, false)}};
}

NormalFormSeries nf_from_json(const Json& j) { return series_from_json<NormalFormSeries>(j, "b"); }

Json to_json(const FunctionalNormalForm& fnf) {
  return {{"sign", to_json(fnf.sign)}, {"E0", to_string(fnf.e0)}, {"max_degree", fnf.max_degree},
          {"bhat", coeff_list(fnf.b, false)}};
}

FunctionalNormalForm fnf_from_json(const Json& j) { return series_from_json<FunctionalNormalForm>(j, "bhat"); }

RawHamiltonian hamiltonian_from_json(const Json& j) {
  require_object(j, "hamiltonian");
  RawHamiltonian h;
  if (auto* v = find(j, "sign")) h.sign = sign_from_json(*v, "sign");
  if (auto* v = find(j, "E0")) h.e0 = rational_from_json(*v, "E0");
  const Json* terms = find(j, "terms");
  if (terms == nullptr) fail("hamiltonian", "missing terms");
  h.h = weyl_poly_from_json(*terms, "terms");
  return h;
}

Json to_json(const ProbeAffineModel& m) {
  return {{"N", m.stage},           {"beta", to_string(m.beta)},       {"gamma", to_string(m.gamma)},
          {"delta", to_string(m.delta)}, {"cross", to_string(m.cross)}, {"known_0", to_string(m.known_0)},
          {"known_2", to_string(m.known_2)}};
}

Json to_json(const InversionResult& r) {
  Json stages = Json::array();
  for (const auto& m : r.stages) stages.push_back(to_json(m));
  return {{"jet", to_json(r.jet)}, {"exact", r.exact}, {"provenance", {{"stages", stages}}}};
}

Json to_json(const SpectralReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"hbar", row.hbar},
                    {"level", row.level},
                    {"numeric", row.numeric},
                    {"prediction", row.prediction},
                    {"residual", row.residual},
                    {"solver_error", row.solver_error},
                    {"floor_dominated", row.floor_dominated}});
  }
  Json fits = Json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"level", f.level},
                    {"slope", f.slope ? Json(*f.slope) : Json(nullptr)},
                    {"r_squared", f.r_squared},
                    {"points_used", f.points_used}});
  }
  return {{"degree", r.degree},       {"levels", r.levels}, {"hbar", r.hbars},
          {"expected_order", r.expected_order}, {"slope_bound", r.slope_bound},
          {"passed", r.passed},       {"rows", rows},       {"fits", fits}};
}

std::string to_table(const SpectralReport& r) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %5s %24s %24s %24s %24s\n", "hbar", "n", "numeric", "prediction",
                "residual", "solver_error");
  os << line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%-24.17g %5d %24.17g %24.17g %24.17g %24.17g%s\n", row.hbar, row.level,
                  row.numeric, row.prediction, row.residual, row.solver_error, row.floor_dominated ? "  floor" : "");
    os << line;
  }
  os << "\n";
  std::snprintf(line, sizeof line, "%5s %24s %24s %7s\n", "n", "slope", "r_squared", "points");
  os << line;
  for (const auto& f : r.fits) {
    if (f.slope) {
      std::snprintf(line, sizeof line, "%5d %24.17g %24.17g %7d\n", f.level, *f.slope, f.r_squared, f.points_used);
    } else {
      std::snprintf(line, sizeof line, "%5d %24s %24s %7d\n", f.level, "-", "-", f.points_used);
    }
    os << line;
  }
  std::snprintf(line, sizeof line, "\ndegree %d, expected order %.17g, slope bound %.17g: %s\n", r.degree,
                r.expected_order, r.slope_bound, r.passed ? "PASS" : "FAIL");
  os << line;
  return os.str();
}

Json to_json(const LogSingularityReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"hbar", s.hbar},
                       {"kernel_width", s.kernel_width},
                       {"coefficient", s.coefficient},
                       {"r_squared", s.r_squared},
                       {"bic_log", s.bic_log},
                       {"bic_poly", s.bic_poly},
                       {"log_selected", s.log_selected}});
  }
  return {{"E0", r.e0},
          {"curvature", r.curvature},
          {"coefficient", r.coefficient},
          {"classical_coefficient", r.classical_coefficient},
          {"analytic_coefficient", r.analytic_coefficient},
          {"relative_error", double_or_null(r.relative_error)},
          {"samples", samples}};
}

Json to_json(const JumpReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"hbar", s.hbar},
                       {"kernel_width", s.kernel_width},
                       {"left_limit", s.left_limit},
                       {"right_limit", s.right_limit},
                       {"ratio", s.ratio}});
  }
  return {{"probe_energy", r.probe_energy}, {"ratio", r.ratio}, {"detected", r.detected}, {"samples", samples}};
}

}  // namespace qbnf::io
