#include "manifest.hpp"

#include "squeezelab/errors.hpp"

#include <fstream>

namespace squeezelab::cli {

nlohmann::json RunManifest::to_json() const {
  return {
      {"command", command},   {"version", version},    {"config", config},
      {"derived", derived},   {"seed", seed},          {"threads", threads},
      {"duration_s", duration_s}, {"outputs", outputs},
  };
}

void RunManifest::write(const std::filesystem::path& path) const { write_json(path, to_json()); }

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace squeezelab::cli
