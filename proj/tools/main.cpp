#include "commands.hpp"
#include "manifest.hpp"
#include "settings.hpp"

#include "squeezelab/errors.hpp"
#include "squeezelab/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kIo = 1, kUsage = 2, kResource = 3, kNumerical = 4 };

int resolve_threads(const std::optional<int>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("SQUEEZELAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0 || v > 4096) {
    throw squeezelab::cli::UsageError(std::string("SQUEEZELAB_THREADS must be a non-negative integer, got '") +
                                      env + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = squeezelab::cli;
  CLI::App app{"Two-pixel differential Ramsey simulator with squeezed collective spin states", "squeezelab"};
  app.set_version_flag("--version", SQUEEZELAB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> config_path;
  std::optional<int> threads;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option_function<std::string>(
      "--config", [&](const std::string& p) { config_path = p; }, "JSON config file or run manifest");
  app.add_option_function<int>(
         "--threads", [&](const int& t) { threads = t; },
         "worker threads (0 = hardware concurrency; default from SQUEEZELAB_THREADS)")
      ->check(CLI::NonNegativeNumber);

  std::vector<cli::Command> commands = cli::make_commands();
  cli::FlagSink flags;
  for (cli::Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.description);
    c.add_flags(*sub, flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  const cli::Command* command = nullptr;
  for (const cli::Command& c : commands) {
    if (app.got_subcommand(c.name)) command = &c;
  }

  try {
    const int worker_count = resolve_threads(threads);
    squeezelab::set_default_threads(worker_count);

    cli::Settings settings(command->defaults);
    if (config_path) settings.merge(cli::load_config_file(*config_path, command->name), config_path->string());
    settings.merge(flags.values(), "command-line flags");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw squeezelab::IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    const auto start = std::chrono::steady_clock::now();
    cli::CommandResult result = command->run(settings, out_dir);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    cli::RunManifest manifest;
    manifest.command = command->name;
    manifest.version = SQUEEZELAB_VERSION;
    manifest.config = settings.values();
    manifest.derived = std::move(result.derived);
    manifest.seed = settings.values().contains("seed") ? settings.seed() : 0;
    manifest.threads = squeezelab::default_threads();
    manifest.duration_s = elapsed.count();
    manifest.outputs = std::move(result.outputs);
    manifest.write(out_dir / "manifest.json");

    std::cout << command->name << ": wrote " << manifest.outputs.size() + 1 << " files to " << out_dir.string()
              << " in " << elapsed.count() << " s\n";
    return kOk;
  } catch (const cli::UsageError& e) {
    std::cerr << "squeezelab " << command->name << ": usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const squeezelab::InvalidArgument& e) {
    std::cerr << "squeezelab " << command->name << ": invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const squeezelab::ResourceLimitError& e) {
    std::cerr << "squeezelab " << command->name << ": resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const squeezelab::SingularConfigurationError& e) {
    std::cerr << "squeezelab " << command->name << ": singular configuration: " << e.what() << '\n';
    return kNumerical;
  } catch (const squeezelab::FitFailure& e) {
    std::cerr << "squeezelab " << command->name << ": fit failed: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "squeezelab " << command->name << ": error: " << e.what() << '\n';
    return kIo;
  }
}
