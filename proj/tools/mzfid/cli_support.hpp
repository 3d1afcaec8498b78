#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mzfid/optics.hpp"

namespace mzfid::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kMaxPhotons = 40;

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kResource = 4 };

/// 12 significant digits, '.' decimal separator, independent of the C locale.
std::string format_number(double value);

/// Value rounded to 12 significant digits (what format_number would print).
double round_to_output(double value);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(std::string_view field);

/// Whitespace-separated "re im" per line, n = 0..N. Blank lines and '#' comments are
/// skipped. Throws InvalidArgument when the file cannot be read or parsed.
std::vector<Complex> read_coefficient_file(const std::filesystem::path& path);

void write_coefficient_file(const std::filesystem::path& path, const std::vector<Complex>& coeffs);

/// "fock" / "noon" with an explicit N, or a coefficient-file path (normalized on load).
/// When N is given for a file it must match the file length.
StateCoefficients resolve_state(const std::string& spec, std::optional<int> photons);

/// "4,21" -> {4, 21}.
Outcome parse_outcome(std::string_view text);

/// Accepts plain numbers and multiples of pi: "1.2", "pi", "-pi/2", "3pi/4", "0.5*pi".
double parse_phase(std::string_view text);

/// Output destination: a file when a path is given, standard output otherwise.
class OutputSink {
 public:
  /// Throws InvalidArgument when the file cannot be opened.
  explicit OutputSink(const std::string& path);

  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

nlohmann::json make_manifest(const std::string& command, const std::vector<std::string>& argv,
                             nlohmann::json parameters);

nlohmann::json state_parameters(const StateCoefficients& state, const std::string& spec);

}  // namespace mzfid::cli
