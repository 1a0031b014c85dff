// dephasim: scenario runner for detector-induced dephasing of a double dot.
//
//   dephasim <scenario> --config <path> [--out <dir>] [--seed <u64>]
//
// Exit codes: 0 success, 2 config error, 3 runtime/numeric error, 4 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dephasim/config.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/format.hpp"
#include "dephasim/parallel.hpp"
#include "dephasim/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw dephasim::IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) throw dephasim::IoError("cannot read config file " + path);
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detector-induced dephasing of a two-state system: influence, Bloch evolution, "
               "current statistics"};
  std::string scenario;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("scenario", scenario, "influence | evolve | counts | simulate | fringe | sweep")
      ->required()
      ->check(CLI::IsMember({"influence", "evolve", "counts", "simulate", "fringe", "sweep"}));
  app.add_option("--config", config_path, "Scenario config file (key = value)")->required();
  app.add_option("--out", out_dir, "Output directory (default: the config's `output` key, else .)");
  app.add_option("--seed", seed, "Master seed; overrides the config's `seed` key");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  dephasim::set_thread_cap(dephasim::thread_cap_from_env());

  try {
    const std::string text = read_file(config_path);
    auto config = dephasim::parse_config(text, dephasim::parse_scenario_kind(scenario));
    if (seed) config.seed = *seed;

    const auto output = dephasim::run_scenario(config);
    const dephasim::RunManifest manifest{scenario, dephasim::fnv1a64(text), config.seed,
                                         DEPHASIM_VERSION};
    dephasim::write_outputs(output, manifest, out_dir.value_or(config.output.value_or(".")));
  } catch (const dephasim::ConfigError& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const dephasim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
