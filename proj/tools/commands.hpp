#pragma once

#include "settings.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace squeezelab::cli {

// Collects flag values under their config keys; only flags actually given
// end up in values().
class FlagSink {
 public:
  CLI::Option* real(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  CLI::Option* integer(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  CLI::Option* count(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  CLI::Option* text(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help,
                    const std::vector<std::string>& choices = {});
  CLI::Option* angle(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  CLI::Option* angles(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  CLI::Option* integers(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  CLI::Option* toggle_off(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  // --grid sets n_alpha and n_beta together; --n-alpha / --n-beta set one each.
  void grid(CLI::App& app);

  const nlohmann::json& values() const noexcept { return values_; }

 private:
  nlohmann::json values_ = nlohmann::json::object();
};

struct CommandResult {
  std::vector<std::string> outputs;
  nlohmann::json derived = nlohmann::json::object();
};

struct Command {
  std::string name;
  std::string description;
  nlohmann::json defaults;
  std::function<void(CLI::App&, FlagSink&)> add_flags;
  std::function<CommandResult(const Settings&, const std::filesystem::path&)> run;
};

std::vector<Command> make_commands();

}  // namespace squeezelab::cli
