#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dephasim/config.hpp"
#include "dephasim/format.hpp"

namespace dephasim {

struct NamedTable {
  std::string file;  // e.g. "influence.csv"
  Table table;
};

struct NamedText {
  std::string file;
  std::string content;
};

struct ScenarioOutput {
  std::vector<NamedTable> tables;
  std::vector<NamedText> texts;

  const Table* find(std::string_view file) const;
};

// Runs one scenario. Output depends only on the config (seed included).
ScenarioOutput run_scenario(const ScenarioConfig& config);

struct RunManifest {
  std::string scenario;
  std::uint64_t config_hash = 0;  // FNV-1a of the config file bytes
  std::uint64_t seed = 0;
  std::string version;
};

// Writes every output file plus manifest.json into `dir`. Throws IoError.
void write_outputs(const ScenarioOutput& output, const RunManifest& manifest,
                   const std::filesystem::path& dir);

}  // namespace dephasim
