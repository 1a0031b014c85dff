#include "dephasim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "dephasim/format.hpp"

namespace dephasim {

namespace {

constexpr double kPi = std::numbers::pi;

enum class KeyType { Real, Count, Seed, Bool, Direction, Scenario, Text };

struct KeySpec {
  std::string_view name;
  KeyType type;
};

constexpr KeySpec kCommonKeys[] = {
    {"scenario", KeyType::Scenario}, {"seed", KeyType::Seed}, {"output", KeyType::Text}};

constexpr KeySpec kBarrierKeys[] = {
    {"barrier_l.theta", KeyType::Real}, {"barrier_l.phi", KeyType::Real},
    {"barrier_l.eta", KeyType::Real},   {"barrier_r.theta", KeyType::Real},
    {"barrier_r.phi", KeyType::Real},   {"barrier_r.eta", KeyType::Real}};

constexpr KeySpec kDetectorKeys[] = {{"detector.flux", KeyType::Real},
                                     {"detector.v_d", KeyType::Real},
                                     {"detector.charge", KeyType::Real},
                                     {"detector.hbar", KeyType::Real},
                                     {"detector.direction", KeyType::Direction}};

constexpr KeySpec kSystemKeys[] = {{"system.v_x", KeyType::Real},
                                   {"system.v_y", KeyType::Real},
                                   {"system.v_z", KeyType::Real},
                                   {"system.damping", KeyType::Real}};

constexpr KeySpec kEvolveKeys[] = {
    {"evolve.p_x", KeyType::Real},   {"evolve.p_y", KeyType::Real},
    {"evolve.p_z", KeyType::Real},   {"evolve.t_end", KeyType::Real},
    {"evolve.step", KeyType::Real},  {"evolve.stride", KeyType::Count},
    {"evolve.couple_detector", KeyType::Bool}};

constexpr KeySpec kMixtureKeys[] = {{"mixture.rho_ll", KeyType::Real},
                                    {"mixture.rho_rr", KeyType::Real},
                                    {"mixture.p_l", KeyType::Real},
                                    {"mixture.p_r", KeyType::Real}};

constexpr KeySpec kCountsKeys[] = {
    {"counts.n", KeyType::Count}, {"counts.n1", KeyType::Count}, {"counts.n2", KeyType::Count}};

constexpr KeySpec kSimulateKeys[] = {{"simulate.n", KeyType::Count},
                                     {"simulate.runs", KeyType::Count},
                                     {"simulate.n1", KeyType::Count},
                                     {"simulate.n2", KeyType::Count}};

constexpr KeySpec kFringeKeys[] = {{"fringe.dwell_time", KeyType::Real}};

constexpr KeySpec kSweepKeys[] = {{"sweep.scenario", KeyType::Scenario},
                                  {"sweep.parameter", KeyType::Text},
                                  {"sweep.min", KeyType::Real},
                                  {"sweep.max", KeyType::Real},
                                  {"sweep.points", KeyType::Count}};

constexpr KeySpec kDirectionKey[] = {{"detector.direction", KeyType::Direction}};

std::vector<KeySpec> key_specs(ScenarioKind kind, std::optional<ScenarioKind> inner) {
  std::vector<KeySpec> keys(std::begin(kCommonKeys), std::end(kCommonKeys));
  auto add = [&keys](const auto& group) { keys.insert(keys.end(), std::begin(group), std::end(group)); };
  switch (kind) {
    case ScenarioKind::Influence:
      add(kBarrierKeys);
      add(kDetectorKeys);
      break;
    case ScenarioKind::Evolve:
      add(kSystemKeys);
      add(kEvolveKeys);
      add(kBarrierKeys);
      add(kDetectorKeys);
      break;
    case ScenarioKind::Counts:
      add(kMixtureKeys);
      add(kCountsKeys);
      add(kBarrierKeys);
      add(kDirectionKey);
      break;
    case ScenarioKind::Simulate:
      add(kMixtureKeys);
      add(kSimulateKeys);
      add(kBarrierKeys);
      add(kDirectionKey);
      break;
    case ScenarioKind::Fringe:
      add(kBarrierKeys);
      add(kDetectorKeys);
      add(kFringeKeys);
      break;
    case ScenarioKind::Sweep:
      add(kSweepKeys);
      if (inner && *inner != ScenarioKind::Sweep) {
        for (const auto& k : key_specs(*inner, std::nullopt)) {
          if (std::none_of(keys.begin(), keys.end(), [&](const KeySpec& e) { return e.name == k.name; })) {
            keys.push_back(k);
          }
        }
      }
      break;
  }
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_plain(std::string_view s) noexcept {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) noexcept {
  std::uint64_t value = 0;
  if (s.empty()) return std::nullopt;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string describe(double lo, double hi) {
  return "[" + format_double(lo) + ", " + format_double(hi) + "]";
}

// Typed access to raw entries with diagnostics that carry the key and line.
class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  bool has(std::string_view key) const { return raw_.contains(std::string(key)); }

  template <typename Group>
  bool has_any(const Group& group) const {
    return std::any_of(std::begin(group), std::end(group), [this](const KeySpec& k) { return has(k.name); });
  }

  int line(std::string_view key) const {
    const auto it = raw_.find(std::string(key));
    return it == raw_.end() ? 0 : it->second.line;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    throw ConfigError(line(key), std::string(key), message);
  }

  std::optional<double> real(std::string_view key) const {
    const auto it = raw_.find(std::string(key));
    if (it == raw_.end()) return std::nullopt;
    const auto v = parse_real(it->second.value);
    if (!v || !std::isfinite(*v)) fail(key, "expected a finite real number, got '" + it->second.value + "'");
    return v;
  }

  double real_or(std::string_view key, double fallback) const { return real(key).value_or(fallback); }

  double required_real(std::string_view key) const {
    if (auto v = real(key)) return *v;
    fail(key, "required key is missing");
  }

  double in_range(std::string_view key, double value, double lo, bool lo_open, double hi) const {
    const bool below = lo_open ? !(value > lo) : !(value >= lo);
    if (below || value > hi) {
      fail(key, "value " + format_double(value) + " outside " + (lo_open ? "(" : "[") +
                    describe(lo, hi).substr(1));
    }
    return value;
  }

  double nonnegative(std::string_view key, double value) const {
    if (value < 0.0) fail(key, "value " + format_double(value) + " must be >= 0");
    return value;
  }

  std::optional<std::uint64_t> count(std::string_view key) const {
    const auto it = raw_.find(std::string(key));
    if (it == raw_.end()) return std::nullopt;
    const auto v = parse_u64(it->second.value);
    if (!v) fail(key, "expected a nonnegative integer, got '" + it->second.value + "'");
    return v;
  }

  std::size_t required_count(std::string_view key, std::uint64_t min) const {
    const auto v = count(key);
    if (!v) fail(key, "required key is missing");
    if (*v < min) fail(key, "value " + std::to_string(*v) + " must be >= " + std::to_string(min));
    return static_cast<std::size_t>(*v);
  }

  std::optional<bool> boolean(std::string_view key) const {
    const auto it = raw_.find(std::string(key));
    if (it == raw_.end()) return std::nullopt;
    const auto& v = it->second.value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }

  std::optional<std::string> text(std::string_view key) const {
    const auto it = raw_.find(std::string(key));
    if (it == raw_.end()) return std::nullopt;
    return it->second.value;
  }

 private:
  const RawConfig& raw_;
};

BarrierParams read_barrier(const Reader& r, std::string_view prefix) {
  const std::string p(prefix);
  BarrierParams b;
  b.theta = r.in_range(p + ".theta", r.real_or(p + ".theta", 0.0), 0.0, false, kPi / 2);
  b.phi = r.in_range(p + ".phi", r.real_or(p + ".phi", 0.0), -kPi, true, kPi);
  b.eta = r.in_range(p + ".eta", r.real_or(p + ".eta", 0.0), -kPi, true, kPi);
  return b;
}

Direction read_direction(const Reader& r) {
  const auto text = r.text("detector.direction");
  if (!text) return Direction::Forward;
  const auto d = parse_direction(*text);
  if (!d) r.fail("detector.direction", "expected forward or backward, got '" + *text + "'");
  return *d;
}

DetectorConfig read_detector(const Reader& r, bool require_voltage) {
  DetectorConfig det;
  det.setup.barrier_l = read_barrier(r, "barrier_l");
  det.setup.barrier_r = read_barrier(r, "barrier_r");
  det.setup.direction = read_direction(r);
  det.charge = r.real_or("detector.charge", 1.0);
  det.hbar = r.real_or("detector.hbar", 1.0);
  if (det.charge <= 0.0) r.fail("detector.charge", "must be > 0");
  if (det.hbar <= 0.0) r.fail("detector.hbar", "must be > 0");

  const bool has_flux = r.has("detector.flux");
  const bool has_vd = r.has("detector.v_d");
  if (has_flux && has_vd) r.fail("detector.v_d", "give either detector.flux or detector.v_d, not both");
  if (require_voltage && !has_vd) r.fail("detector.v_d", "required key is missing");
  if (has_vd) {
    det.v_d = r.nonnegative("detector.v_d", *r.real("detector.v_d"));
    det.setup.flux = landauer_flux(*det.v_d, det.charge, det.hbar);
  } else if (has_flux) {
    det.setup.flux = r.nonnegative("detector.flux", *r.real("detector.flux"));
  } else {
    r.fail("detector.flux", "required key is missing (or give detector.v_d)");
  }
  return det;
}

MixtureSpec read_mixture(const Reader& r) {
  MixtureSpec m;
  m.rho_ll = r.in_range("mixture.rho_ll", r.required_real("mixture.rho_ll"), 0.0, false, 1.0);
  m.rho_rr = 1.0 - m.rho_ll;
  if (const auto rr = r.real("mixture.rho_rr")) {
    r.in_range("mixture.rho_rr", *rr, 0.0, false, 1.0);
    if (std::abs(*rr + m.rho_ll - 1.0) > 1e-12) r.fail("mixture.rho_rr", "rho_ll + rho_rr must equal 1");
    m.rho_rr = *rr;
  }
  // Transmission probabilities: given directly or read off the barrier angles.
  auto side = [&r](std::string_view key, std::string_view barrier) {
    const std::string prefix(barrier);
    const bool from_barrier = r.has(prefix + ".theta") || r.has(prefix + ".phi") || r.has(prefix + ".eta");
    if (r.has(key) && from_barrier) r.fail(key, "give either " + std::string(key) + " or " + prefix + ".*");
    if (from_barrier) return transmission_probability(read_barrier(r, barrier));
    if (!r.has(key)) r.fail(key, "required key is missing (or give " + prefix + ".theta)");
    return r.in_range(key, *r.real(key), 0.0, false, 1.0);
  };
  m.p_l = side("mixture.p_l", "barrier_l");
  m.p_r = side("mixture.p_r", "barrier_r");
  return m;
}

std::optional<Windows> read_windows(const Reader& r, std::string_view section) {
  const std::string s(section);
  const bool has1 = r.has(s + ".n1");
  const bool has2 = r.has(s + ".n2");
  if (!has1 && !has2) return std::nullopt;
  if (!has1) r.fail(s + ".n1", "required together with " + s + ".n2");
  if (!has2) r.fail(s + ".n2", "required together with " + s + ".n1");
  return Windows{r.required_count(s + ".n1", 1), r.required_count(s + ".n2", 1)};
}

}  // namespace

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string{}) +
                         (key.empty() ? std::string{} : "'" + key + "': ") + message),
      line_(line),
      key_(std::move(key)) {}

std::string_view to_string(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::Influence: return "influence";
    case ScenarioKind::Evolve: return "evolve";
    case ScenarioKind::Counts: return "counts";
    case ScenarioKind::Simulate: return "simulate";
    case ScenarioKind::Fringe: return "fringe";
    case ScenarioKind::Sweep: return "sweep";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) noexcept {
  for (const auto k : {ScenarioKind::Influence, ScenarioKind::Evolve, ScenarioKind::Counts,
                       ScenarioKind::Simulate, ScenarioKind::Fringe, ScenarioKind::Sweep}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::optional<double> parse_real(std::string_view text) noexcept {
  std::string_view s = trim(text);
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) return parse_plain(s);

  // [sign][factor*]pi[/divisor]
  double sign = 1.0;
  std::string_view head = s.substr(0, pos);
  std::string_view tail = s.substr(pos + 2);
  if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
    sign = head.front() == '-' ? -1.0 : 1.0;
    head.remove_prefix(1);
  }
  double factor = 1.0;
  if (!head.empty()) {
    if (head.back() != '*') return std::nullopt;
    head.remove_suffix(1);
    const auto f = parse_plain(trim(head));
    if (!f) return std::nullopt;
    factor = *f;
  }
  double divisor = 1.0;
  tail = trim(tail);
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    const auto d = parse_plain(trim(tail.substr(1)));
    if (!d || *d == 0.0) return std::nullopt;
    divisor = *d;
  }
  return sign * factor * kPi / divisor;
}

double SweepAxis::value(std::size_t i) const {
  if (i + 1 == points) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
}

std::vector<std::string> known_keys(ScenarioKind kind) {
  std::vector<std::string> out;
  for (const auto& k : key_specs(kind, std::nullopt)) out.emplace_back(k.name);
  return out;
}

RawConfig parse_raw_config(std::string_view text) {
  RawConfig raw;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "", "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "", "empty key");
    if (value.empty()) throw ConfigError(line_no, key, "empty value");
    if (const auto it = raw.find(key); it != raw.end()) {
      throw ConfigError(line_no, key, "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
    }
    raw.emplace(key, RawEntry{value, line_no});
    if (end == text.size()) break;
  }
  return raw;
}

ScenarioConfig build_config(const RawConfig& raw, ScenarioKind kind) {
  const Reader r(raw);
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.raw = raw;

  std::optional<ScenarioKind> inner;
  if (kind == ScenarioKind::Sweep) {
    const auto text = r.text("sweep.scenario");
    if (!text) r.fail("sweep.scenario", "required key is missing");
    inner = parse_scenario_kind(*text);
    if (!inner || *inner == ScenarioKind::Sweep) r.fail("sweep.scenario", "unknown or nested scenario '" + *text + "'");
  }

  const auto specs = key_specs(kind, inner);
  for (const auto& [key, entry] : raw) {
    if (std::none_of(specs.begin(), specs.end(), [&](const KeySpec& k) { return k.name == key; })) {
      throw ConfigError(entry.line, key, "unknown key for scenario '" + std::string(to_string(kind)) + "'");
    }
  }

  if (const auto s = r.text("scenario")) {
    const auto declared = parse_scenario_kind(*s);
    if (!declared) r.fail("scenario", "unknown scenario '" + *s + "'");
    if (*declared != kind) r.fail("scenario", "declares '" + *s + "' but '" + std::string(to_string(kind)) + "' was requested");
  }
  if (r.has("seed")) {
    const auto it = raw.find("seed");
    const auto v = parse_u64(it->second.value);
    if (!v) r.fail("seed", "expected an unsigned 64-bit integer");
    cfg.seed = *v;
  }
  cfg.output = r.text("output");

  switch (kind) {
    case ScenarioKind::Influence:
      cfg.detector = read_detector(r, false);
      break;
    case ScenarioKind::Fringe:
      cfg.detector = read_detector(r, true);
      cfg.fringe = FringeConfig{r.nonnegative("fringe.dwell_time", r.required_real("fringe.dwell_time"))};
      break;
    case ScenarioKind::Evolve: {
      EvolveConfig ev;
      ev.intrinsic.v = Vec3{r.real_or("system.v_x", 0.0), r.real_or("system.v_y", 0.0), r.real_or("system.v_z", 0.0)};
      ev.intrinsic.damping = r.nonnegative("system.damping", r.real_or("system.damping", 0.0));
      ev.p0.p = Vec3{r.real_or("evolve.p_x", 0.0), r.real_or("evolve.p_y", 0.0), r.real_or("evolve.p_z", 1.0)};
      if (ev.p0.p.norm() > 1.0 + 1e-9) r.fail("evolve.p_x", "initial polarization has |P| > 1");
      ev.t_end = r.nonnegative("evolve.t_end", r.required_real("evolve.t_end"));
      if (const auto step = r.real("evolve.step")) {
        if (*step <= 0.0) r.fail("evolve.step", "must be > 0");
        ev.step = step;
      }
      ev.stride = r.has("evolve.stride") ? r.required_count("evolve.stride", 1) : 1;
      ev.couple_detector = r.boolean("evolve.couple_detector").value_or(false);
      if (ev.couple_detector) {
        cfg.detector = read_detector(r, false);
      } else if (r.has_any(kBarrierKeys) || r.has_any(kDetectorKeys)) {
        const auto& key = std::find_if(raw.begin(), raw.end(), [](const auto& e) {
                            return e.first.starts_with("barrier_") || e.first.starts_with("detector.");
                          })->first;
        r.fail(key, "detector keys need evolve.couple_detector = true");
      }
      cfg.evolve = ev;
      break;
    }
    case ScenarioKind::Counts: {
      CountsConfig c;
      c.mixture = read_mixture(r);
      c.n = r.required_count("counts.n", 1);
      c.windows = read_windows(r, "counts");
      read_direction(r);
      cfg.counts = c;
      break;
    }
    case ScenarioKind::Simulate: {
      SimulateConfig s;
      s.mixture = read_mixture(r);
      s.n = r.required_count("simulate.n", 1);
      s.runs = r.required_count("simulate.runs", 1);
      s.windows = read_windows(r, "simulate");
      if (s.windows && s.windows->n1 + s.windows->n2 > s.n) {
        r.fail("simulate.n2", "windows n1 + n2 exceed simulate.n");
      }
      read_direction(r);
      cfg.simulate = s;
      break;
    }
    case ScenarioKind::Sweep: {
      SweepAxis axis;
      axis.scenario = *inner;
      const auto param = r.text("sweep.parameter");
      if (!param) r.fail("sweep.parameter", "required key is missing");
      const auto inner_specs = key_specs(*inner, std::nullopt);
      const auto it = std::find_if(inner_specs.begin(), inner_specs.end(), [&](const KeySpec& k) { return k.name == *param; });
      if (it == inner_specs.end() || it->type != KeyType::Real) {
        r.fail("sweep.parameter", "'" + *param + "' is not a real-valued key of scenario '" +
                                      std::string(to_string(*inner)) + "'");
      }
      axis.parameter = *param;
      axis.min = r.required_real("sweep.min");
      axis.max = r.required_real("sweep.max");
      axis.points = r.required_count("sweep.points", 2);
      cfg.sweep = axis;
      // Every point must be a valid inner config.
      expand_sweep(cfg);
      break;
    }
  }
  return cfg;
}

ScenarioConfig parse_config(std::string_view text, std::optional<ScenarioKind> kind_hint) {
  const RawConfig raw = parse_raw_config(text);
  std::optional<ScenarioKind> kind = kind_hint;
  if (const auto it = raw.find("scenario"); it != raw.end()) {
    const auto declared = parse_scenario_kind(it->second.value);
    if (!declared) throw ConfigError(it->second.line, "scenario", "unknown scenario '" + it->second.value + "'");
    if (kind && *kind != *declared) {
      throw ConfigError(it->second.line, "scenario",
                        "declares '" + it->second.value + "' but '" + std::string(to_string(*kind)) + "' was requested");
    }
    kind = declared;
  }
  if (!kind) throw ConfigError(0, "scenario", "required key is missing");
  return build_config(raw, *kind);
}

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& config) {
  if (config.kind != ScenarioKind::Sweep || !config.sweep) {
    throw ConfigError(0, "sweep.scenario", "not a sweep config");
  }
  const auto& axis = *config.sweep;
  const int axis_line = config.raw.contains("sweep.parameter") ? config.raw.at("sweep.parameter").line : 0;

  RawConfig base;
  for (const auto& [key, entry] : config.raw) {
    if (key.starts_with("sweep.") || key == "scenario") continue;
    base.emplace(key, entry);
  }

  std::vector<ScenarioConfig> out;
  out.reserve(axis.points);
  for (std::size_t i = 0; i < axis.points; ++i) {
    RawConfig point = base;
    point[axis.parameter] = RawEntry{format_double(axis.value(i)), axis_line};
    try {
      out.push_back(build_config(point, axis.scenario));
    } catch (const ConfigError& e) {
      throw ConfigError(e.line(), e.key(),
                        std::string("sweep point ") + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace dephasim
