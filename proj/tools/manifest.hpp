#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace squeezelab::cli {

struct RunManifest {
  std::string command;
  std::string version;
  nlohmann::json config;   // fully resolved settings
  nlohmann::json derived = nlohmann::json::object();  // values computed during the run
  std::uint64_t seed = 0;
  int threads = 0;
  double duration_s = 0.0;
  std::vector<std::string> outputs;  // relative to the output directory

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

// Writes a JSON document followed by a newline; throws IoError naming the path.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace squeezelab::cli
