#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qbnf {

struct RunConfig {
  std::string subcommand;
  /// File path, "-" for stdin, or empty when inline_json is used.
  std::string input;
  std::string inline_json;
  int max_degree = 10;
  std::vector<double> hbar_list;
  /// Empty means standard output.
  std::string output;
  std::uint64_t seed = 1;
};

/// Throws Error(ConfigError) unless max_degree is even in [4, 16] and the
/// hbar list is positive and strictly decreasing.
void validate(const RunConfig& cfg);

/// Default degree: QBNF_MAX_DEGREE if set, else 10. Throws ConfigError on
/// a malformed value.
int default_max_degree();

/// Entry point of the qbnf tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbnf
