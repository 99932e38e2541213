#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "qbnf/dos_probe.hpp"
#include "qbnf/inversion.hpp"
#include "qbnf/normal_form.hpp"
#include "qbnf/spectra.hpp"
#include "qbnf/weyl_poly.hpp"

namespace qbnf::io {

using Json = nlohmann::ordered_json;

/// Throws Error(ParseError) with line and column on malformed input.
Json parse_json(std::string_view text);
/// Two-space indent plus a trailing newline.
std::string dump(const Json& j);

/// Rationals are strings "p" or "p/q"; plain JSON integers are also read.
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& where);

Json to_json(Sign s);
Sign sign_from_json(const Json& j, const std::string& where);

/// [{"l":..,"m":..,"n":..,"coeff":".."}], in monomial order.
Json to_json(const WeylPoly& p);
WeylPoly weyl_poly_from_json(const Json& j, const std::string& where = "terms");

/// {"sign":"+","E0":"0","a":["a3","a4",...]}; every key is optional.
Json to_json(const PotentialJet& jet);
PotentialJet jet_from_json(const Json& j);

/// {"sign","E0","max_degree","b":[{"j","k","coeff"}]}.
Json to_json(const NormalFormSeries& nf);
NormalFormSeries nf_from_json(const Json& j);

/// As above with the list under "bhat".
Json to_json(const FunctionalNormalForm& fnf);
FunctionalNormalForm fnf_from_json(const Json& j);

/// Raw symbol {"sign":"+","terms":[...]} for the --hamiltonian path.
struct RawHamiltonian {
  Sign sign = Sign::Plus;
  Rational e0 = 0;
  WeylPoly h;
};
RawHamiltonian hamiltonian_from_json(const Json& j);

Json to_json(const ProbeAffineModel& m);
/// {"jet":..., "exact":..., "provenance":{"stages":[...]}}.
Json to_json(const InversionResult& r);

Json to_json(const SpectralReport& r);
/// Aligned plain-text table, floats with 17 significant digits.
std::string to_table(const SpectralReport& r);

Json to_json(const LogSingularityReport& r);
Json to_json(const JumpReport& r);

}  // namespace qbnf::io
