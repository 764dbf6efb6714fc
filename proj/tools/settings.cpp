#include "settings.hpp"

#include "squeezelab/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <regex>

namespace squeezelab::cli {
namespace {

bool integral(const nlohmann::json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double x = v.get<double>();
  return std::isfinite(x) && x == std::floor(x);
}

std::string describe(const std::string& key) { return "config key '" + key + "'"; }

}  // namespace

double parse_angle(std::string_view text) {
  static const std::regex pattern(
      R"(^\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(\*?\s*pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, pattern) || (!m[2].matched && !m[3].matched)) {
    throw UsageError("not an angle: '" + s + "'");
  }
  double value = m[2].matched ? std::stod(m[2].str()) : 1.0;
  if (m[3].matched) value *= std::numbers::pi;
  if (m[4].matched) {
    const double d = std::stod(m[4].str());
    if (d == 0.0) throw UsageError("not an angle: '" + s + "'");
    value /= d;
  }
  return m[1].str() == "-" ? -value : value;
}

Settings::Settings(nlohmann::json defaults) : values_(std::move(defaults)) {}

void Settings::merge(const nlohmann::json& overrides, std::string_view source) {
  if (!overrides.is_object()) throw UsageError(std::string(source) + " must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (!values_.contains(key)) {
      throw UsageError("unknown config key '" + key + "' in " + std::string(source));
    }
    values_[key] = value;
  }
}

const nlohmann::json& Settings::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::logic_error("missing default for " + key);
  return *it;
}

double Settings::real(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_number()) throw UsageError(describe(key) + " must be a number");
  return v.get<double>();
}

std::optional<double> Settings::optional_real(const std::string& key) const {
  if (at(key).is_null()) return std::nullopt;
  return real(key);
}

int Settings::integer(const std::string& key) const {
  const auto& v = at(key);
  if (!integral(v)) throw UsageError(describe(key) + " must be an integer");
  const double x = v.get<double>();
  if (std::abs(x) > std::numeric_limits<int>::max()) throw UsageError(describe(key) + " is out of range");
  return static_cast<int>(x);
}

std::size_t Settings::count(const std::string& key) const {
  const auto& v = at(key);
  if (!integral(v) || v.get<double>() < 0) throw UsageError(describe(key) + " must be a non-negative integer");
  return v.is_number_unsigned() ? v.get<std::size_t>() : static_cast<std::size_t>(v.get<double>());
}

std::uint64_t Settings::seed() const {
  const auto& v = at("seed");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw UsageError("config key 'seed' must be a non-negative integer");
}

bool Settings::boolean(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_boolean()) throw UsageError(describe(key) + " must be true or false");
  return v.get<bool>();
}

std::string Settings::text(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_string()) throw UsageError(describe(key) + " must be a string");
  return v.get<std::string>();
}

std::vector<double> Settings::reals(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_array()) throw UsageError(describe(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw UsageError(describe(key) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> Settings::integers(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_array()) throw UsageError(describe(key) + " must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!integral(x)) throw UsageError(describe(key) + " must be an array of integers");
    out.push_back(static_cast<int>(x.get<double>()));
  }
  return out;
}

nlohmann::json load_config_file(const std::filesystem::path& path, std::string_view command) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) {
    if (doc.contains("command") && doc["command"] != command) {
      throw UsageError("manifest " + path.string() + " was written by '" +
                       doc["command"].get<std::string>() + "', not '" + std::string(command) + "'");
    }
    return doc["config"];
  }
  return doc;
}

}  // namespace squeezelab::cli
