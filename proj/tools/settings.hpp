#pragma once

// Resolved per-command configuration: defaults, then a JSON config file,
// then command-line flags. Keys are snake_case.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace squeezelab::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts plain numbers and multiples of pi: "0.5", "pi", "-pi/4", "3pi/16",
// "1.016pi", "1.016*pi".
double parse_angle(std::string_view text);

class Settings {
 public:
  explicit Settings(nlohmann::json defaults);

  // Replaces known keys; an unknown key is a UsageError naming `source`.
  void merge(const nlohmann::json& overrides, std::string_view source);

  const nlohmann::json& values() const noexcept { return values_; }

  double real(const std::string& key) const;
  std::optional<double> optional_real(const std::string& key) const;  // null -> nullopt
  int integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;  // integer >= 0
  std::uint64_t seed() const;
  bool boolean(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

 private:
  const nlohmann::json& at(const std::string& key) const;

  nlohmann::json values_;
};

// Loads a config document. A manifest written by this tool is accepted too:
// its "config" object is used, and its "command" must match.
nlohmann::json load_config_file(const std::filesystem::path& path, std::string_view command);

}  // namespace squeezelab::cli
