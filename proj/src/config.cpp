#include "spinpair/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <string>

#include "spinpair/common.hpp"

namespace spinpair {

void RunConfig::validate() const {
  make_spin_system();  // throws on bad physical parameters
  if (points < 2) {
    throw ValidationError("points must be at least 2, got " +
                          std::to_string(points));
  }
  if (dwell_s <= 0.0) {
    throw ValidationError("dwell_s must be positive, got " +
                          format_double(dwell_s));
  }
  make_rates();
  make_error_model().validate();
  if (tau_max_s < 0.0 || tau_step_s <= 0.0) {
    throw ValidationError("tau grid needs tau_max_s >= 0 and tau_step_s > 0");
  }
  if (fit_window_s <= 0.0) {
    throw ValidationError("fit_window_s must be positive, got " +
                          format_double(fit_window_s));
  }
}

SpinSystem RunConfig::make_spin_system() const {
  SpinSystem sys = SpinSystem::proton_carbon(j_hz, b_tesla, temperature_k);
  sys.linewidth1 = linewidth1_hz;
  sys.linewidth2 = linewidth2_hz;
  sys.validate();
  return sys;
}

RateMatrix RunConfig::make_rates() const {
  if (mu12 < 0.0) {
    if (mu1 >= 0.0 || mu2 >= 0.0) {
      throw ValidationError(
          "mu1/mu2 overrides require mu12 to be set as well");
    }
    return RateMatrix::calibrated(make_spin_system());
  }
  RateMatrix rates;
  rates.mu1 = mu1 >= 0.0 ? mu1 : 0.3;
  rates.mu2 = mu2 >= 0.0 ? mu2 : 0.3;
  rates.mu12 = mu12;
  rates.sigma12 = sigma12;
  rates.delta1 = delta1;
  rates.delta2 = delta2;
  rates.validate();
  return rates;
}

RfErrorModel RunConfig::make_error_model() const {
  RfErrorModel model;
  model.amplitude_spread = rf_spread;
  model.ensemble_size = ensemble;
  model.amplitude_step = amplitude_step;
  model.validate();
  return model;
}

Acquisition RunConfig::make_acquisition() const {
  return Acquisition{points, dwell_s};
}

namespace {

template <typename T>
T number_or_throw(const std::string& text, int lineno, int col);

template <>
double number_or_throw<double>(const std::string& text, int lineno, int col) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("expected a number, got '" + text + "'", lineno, col);
  }
  return value;
}

template <>
int number_or_throw<int>(const std::string& text, int lineno, int col) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("expected an integer, got '" + text + "'", lineno, col);
  }
  return value;
}

template <>
unsigned long long number_or_throw<unsigned long long>(const std::string& text,
                                                       int lineno, int col) {
  unsigned long long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("expected a nonnegative integer, got '" + text + "'",
                     lineno, col);
  }
  return value;
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

}  // namespace

RunConfig parse_config(std::istream& is) {
  RunConfig config;
  using Setter = std::function<void(const std::string&, int, int)>;
  const std::map<std::string, Setter> setters = {
      {"j_hz", [&](const std::string& v, int l, int c) {
         config.j_hz = number_or_throw<double>(v, l, c); }},
      {"b_tesla", [&](const std::string& v, int l, int c) {
         config.b_tesla = number_or_throw<double>(v, l, c); }},
      {"temperature_k", [&](const std::string& v, int l, int c) {
         config.temperature_k = number_or_throw<double>(v, l, c); }},
      {"linewidth1_hz", [&](const std::string& v, int l, int c) {
         config.linewidth1_hz = number_or_throw<double>(v, l, c); }},
      {"linewidth2_hz", [&](const std::string& v, int l, int c) {
         config.linewidth2_hz = number_or_throw<double>(v, l, c); }},
      {"points", [&](const std::string& v, int l, int c) {
         config.points = number_or_throw<int>(v, l, c); }},
      {"dwell_s", [&](const std::string& v, int l, int c) {
         config.dwell_s = number_or_throw<double>(v, l, c); }},
      {"mu1", [&](const std::string& v, int l, int c) {
         config.mu1 = number_or_throw<double>(v, l, c); }},
      {"mu2", [&](const std::string& v, int l, int c) {
         config.mu2 = number_or_throw<double>(v, l, c); }},
      {"mu12", [&](const std::string& v, int l, int c) {
         config.mu12 = number_or_throw<double>(v, l, c); }},
      {"sigma12", [&](const std::string& v, int l, int c) {
         config.sigma12 = number_or_throw<double>(v, l, c); }},
      {"delta1", [&](const std::string& v, int l, int c) {
         config.delta1 = number_or_throw<double>(v, l, c); }},
      {"delta2", [&](const std::string& v, int l, int c) {
         config.delta2 = number_or_throw<double>(v, l, c); }},
      {"rf_spread", [&](const std::string& v, int l, int c) {
         config.rf_spread = number_or_throw<double>(v, l, c); }},
      {"ensemble", [&](const std::string& v, int l, int c) {
         config.ensemble = number_or_throw<int>(v, l, c); }},
      {"amplitude_step", [&](const std::string& v, int l, int c) {
         config.amplitude_step = number_or_throw<double>(v, l, c); }},
      {"seed", [&](const std::string& v, int l, int c) {
         config.seed = number_or_throw<unsigned long long>(v, l, c); }},
      {"tau_max_s", [&](const std::string& v, int l, int c) {
         config.tau_max_s = number_or_throw<double>(v, l, c); }},
      {"tau_step_s", [&](const std::string& v, int l, int c) {
         config.tau_step_s = number_or_throw<double>(v, l, c); }},
      {"fit_window_s", [&](const std::string& v, int l, int c) {
         config.fit_window_s = number_or_throw<double>(v, l, c); }},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", lineno, 1);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("missing key before '='", lineno, 1);
    }
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ParseError("unknown key '" + key + "'", lineno, 1);
    }
    if (value.empty()) {
      throw ParseError("missing value for '" + key + "'", lineno,
                       static_cast<int>(eq) + 2);
    }
    it->second(value, lineno, static_cast<int>(eq) + 2);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw ValidationError("cannot open config file '" + path + "'");
  }
  return parse_config(is);
}

}  // namespace spinpair
