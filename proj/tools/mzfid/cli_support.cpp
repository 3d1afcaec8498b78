#include "cli_support.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <ctime>

#include "mzfid/errors.hpp"
#include "mzfid/optimizer.hpp"

namespace mzfid::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

double round_to_output(double value) {
  if (!std::isfinite(value)) return value;
  return to_double(format_number(value)).value_or(value);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<Complex> read_coefficient_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read coefficient file '" + path.string() + "'");
  std::vector<Complex> coeffs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto split = view.find_first_of(" \t");
    const auto re = to_double(view.substr(0, split));
    const auto im = split == std::string_view::npos ? std::optional<double>{} : to_double(view.substr(split));
    if (!re || !im) {
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": expected 're im'");
    }
    coeffs.emplace_back(*re, *im);
  }
  if (coeffs.empty()) throw InvalidArgument("coefficient file '" + path.string() + "' has no coefficients");
  return coeffs;
}

void write_coefficient_file(const std::filesystem::path& path, const std::vector<Complex>& coeffs) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write coefficient file '" + path.string() + "'");
  std::array<char, 64> buf{};
  for (const auto& c : coeffs) {
    // Shortest round-trip representation, so reloading is exact.
    auto end = std::to_chars(buf.data(), buf.data() + buf.size(), c.real()).ptr;
    out << std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())) << ' ';
    end = std::to_chars(buf.data(), buf.data() + buf.size(), c.imag()).ptr;
    out << std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())) << '\n';
  }
}

StateCoefficients resolve_state(const std::string& spec, std::optional<int> photons) {
  if (spec == "fock" || spec == "noon") {
    if (!photons) throw InvalidArgument("--n is required for --state " + spec);
    if (*photons < 0 || *photons > kMaxPhotons) {
      throw InvalidArgument("photon number must be in 0.." + std::to_string(kMaxPhotons));
    }
    return spec == "fock" ? StateCoefficients::fock(*photons) : StateCoefficients::noon(*photons);
  }
  const auto coeffs = read_coefficient_file(spec);
  const auto n = static_cast<int>(coeffs.size()) - 1;
  if (n > kMaxPhotons) throw InvalidArgument("photon number must be in 0.." + std::to_string(kMaxPhotons));
  if (photons && *photons != n) {
    throw InvalidArgument("--n " + std::to_string(*photons) + " does not match " + std::to_string(coeffs.size()) +
                          " coefficients in '" + spec + "'");
  }
  try {
    return project_normalize(coeffs, "custom");
  } catch (const DomainError& e) {
    throw InvalidArgument(spec + ": " + e.what());
  }
}

Outcome parse_outcome(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw InvalidArgument("outcome must look like n_c,n_d");
  const auto parse_count = [&](std::string_view s) {
    s = trim(s);
    int value = -1;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
      throw InvalidArgument("outcome counts must be non-negative integers: '" + std::string(text) + "'");
    }
    return value;
  };
  return {parse_count(text.substr(0, comma)), parse_count(text.substr(comma + 1))};
}

double parse_phase(std::string_view text) {
  const std::string_view original = text;
  text = trim(text);
  const auto fail = [&]() -> double { throw InvalidArgument("cannot parse phase '" + std::string(original) + "'"); };

  const auto pi_at = text.find("pi");
  if (pi_at == std::string_view::npos) {
    const auto value = to_double(text);
    return value ? *value : fail();
  }

  // [sign][coefficient][*]pi[/denominator]
  std::string_view head = trim(text.substr(0, pi_at));
  std::string_view tail = trim(text.substr(pi_at + 2));
  double sign = 1.0;
  if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
    sign = head.front() == '-' ? -1.0 : 1.0;
    head = trim(head.substr(1));
  }
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  double coefficient = 1.0;
  if (!head.empty()) {
    const auto value = to_double(head);
    if (!value) return fail();
    coefficient = *value;
  }
  double denominator = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') return fail();
    const auto value = to_double(tail.substr(1));
    if (!value || *value == 0.0) return fail();
    denominator = *value;
  }
  return sign * coefficient * std::numbers::pi / denominator;
}

OutputSink::OutputSink(const std::string& path) : out_(&std::cout) {
  if (path.empty()) return;
  file_.open(path);
  if (!file_) throw InvalidArgument("cannot open output file '" + path + "'");
  out_ = &file_;
}

nlohmann::json make_manifest(const std::string& command, const std::vector<std::string>& argv,
                             nlohmann::json parameters) {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);

  return {
      {"tool", "mzfid"},
      {"version", kToolVersion},
      {"command", command},
      {"argv", argv},
      {"parameters", std::move(parameters)},
      {"timestamp", std::string(buf.data())},
  };
}

nlohmann::json state_parameters(const StateCoefficients& state, const std::string& spec) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : state.coeffs()) coeffs.push_back({c.real(), c.imag()});
  return {{"spec", spec}, {"label", state.label()}, {"N", state.photons()}, {"coefficients", coeffs}};
}

}  // namespace mzfid::cli
