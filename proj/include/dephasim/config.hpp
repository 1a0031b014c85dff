#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dephasim/bloch.hpp"
#include "dephasim/counting.hpp"
#include "dephasim/influence.hpp"

namespace dephasim {

enum class ScenarioKind { Influence, Evolve, Counts, Simulate, Fringe, Sweep };

std::string_view to_string(ScenarioKind kind) noexcept;
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) noexcept;

// Config diagnostic. line() is 1-based, 0 when the problem is a missing key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

struct RawEntry {
  std::string value;
  int line = 0;
};

// Flat `section.key = value` entries in key order.
using RawConfig = std::map<std::string, RawEntry>;

struct DetectorConfig {
  DetectorSetup setup;
  std::optional<double> v_d;  // set when flux came from the Landauer formula
  double charge = 1.0;
  double hbar = 1.0;
};

struct EvolveConfig {
  EvolutionParams intrinsic;
  PolarizationState p0;
  double t_end = 0.0;
  std::optional<double> step;  // defaults to the largest admissible step
  std::size_t stride = 1;      // write every stride-th state (the final one always)
  bool couple_detector = false;
};

struct Windows {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

struct CountsConfig {
  MixtureSpec mixture;
  std::size_t n = 0;
  std::optional<Windows> windows;
};

struct SimulateConfig {
  MixtureSpec mixture;
  std::size_t n = 0;
  std::size_t runs = 0;
  std::optional<Windows> windows;
};

struct FringeConfig {
  double dwell_time = 0.0;
};

struct SweepAxis {
  ScenarioKind scenario = ScenarioKind::Influence;
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;

  double value(std::size_t i) const;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Influence;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
  std::optional<DetectorConfig> detector;
  std::optional<EvolveConfig> evolve;
  std::optional<CountsConfig> counts;
  std::optional<SimulateConfig> simulate;
  std::optional<FringeConfig> fringe;
  std::optional<SweepAxis> sweep;
  RawConfig raw;
};

/// Parses the flat key-value format:
///
///     # comment
///     scenario = influence
///     barrier_l.theta = 0.6
///     barrier_r.phi = -pi/4
///     detector.flux = 1
///
/// Real values accept plain decimals and multiples of pi (`pi`, `-pi/2`,
/// `0.25*pi`). The scenario is taken from the `scenario` key or, when absent,
/// from `kind_hint`; both given and different is an error. Throws ConfigError.
ScenarioConfig parse_config(std::string_view text,
                            std::optional<ScenarioKind> kind_hint = std::nullopt);

RawConfig parse_raw_config(std::string_view text);

// Builds and validates a typed config of the given kind from raw entries.
ScenarioConfig build_config(const RawConfig& raw, ScenarioKind kind);

/// One config per sweep point, with the axis parameter set to its value.
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& config);

// Keys accepted by a scenario kind (a sweep accepts its inner kind's keys too).
std::vector<std::string> known_keys(ScenarioKind kind);

std::optional<double> parse_real(std::string_view text) noexcept;

}  // namespace dephasim
