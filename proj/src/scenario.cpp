#include "dephasim/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dephasim/bloch.hpp"
#include "dephasim/counting.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/influence.hpp"

namespace dephasim {

namespace {

std::string num(double x) { return format_double(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ScenarioOutput run_influence(const ScenarioConfig& cfg) {
  const auto& det = *cfg.detector;
  Table t{{"direction", "flux", "lambda_re", "lambda_im", "damping", "induced_vz",
           "oracle_re", "oracle_im", "delta_damping", "delta_vz"}, {}};
  // delta_* is this direction minus the reverse one.
  const auto forward_minus_backward = direction_asymmetry(det.setup);
  for (const auto dir : {Direction::Forward, Direction::Backward}) {
    DetectorSetup s = det.setup;
    s.direction = dir;
    const auto infl = compute_influence(s);
    const auto oracle = lambda_oracle(s);
    const double sign = dir == Direction::Forward ? 1.0 : -1.0;
    t.add_row({std::string(to_string(dir)), num(s.flux), num(infl.lambda.real()),
               num(infl.lambda.imag()), num(infl.damping), num(infl.induced_vz), num(oracle.real()),
               num(oracle.imag()), num(sign * forward_minus_backward.delta_damping),
               num(sign * forward_minus_backward.delta_vz)});
  }
  return {{{"influence.csv", std::move(t)}}, {}};
}

ScenarioOutput run_evolve(const ScenarioConfig& cfg) {
  const auto& ev = *cfg.evolve;
  EvolutionParams params = ev.intrinsic;
  double flux = 0.0;
  if (ev.couple_detector) {
    params = effective_params(ev.intrinsic, compute_influence(cfg.detector->setup));
    flux = cfg.detector->setup.flux;
  }
  const double step = ev.step.value_or(max_step(params));
  const Trajectory traj = evolve(ev.p0, params, ev.t_end, step);

  Table t{{"t", "p_x", "p_y", "p_z", "p_norm"}, {}};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % ev.stride != 0 && k + 1 != traj.size()) continue;
    const Vec3& p = traj.states[k].p;
    t.add_row({num(traj.times[k]), num(p.x()), num(p.y()), num(p.z()), num(p.norm())});
  }

  const double v_tr = params.tunneling();
  const auto regime = classify_regime(v_tr, params.damping, flux);
  Table r{{"v_tr", "v_z", "damping", "flux", "step", "damping_ratio", "probe_ratio",
           "strong_damping", "frozen_dot", "weakened_frozen_dot", "counting_valid",
           "zeno_timescale"}, {}};
  r.add_row({num(v_tr), num(params.v.z()), num(params.damping), num(flux), num(step),
             num(regime.damping_ratio), num(regime.probe_ratio), flag(regime.strong_damping),
             flag(regime.frozen_dot), flag(regime.weakened_frozen_dot), flag(regime.counting_valid),
             regime.degenerate ? "" : num(zeno_timescale(v_tr, params.damping))});
  return {{{"trajectory.csv", std::move(t)}, {"regime.csv", std::move(r)}}, {}};
}

Table distribution_table(const CountDistribution& d) {
  Table t{{"q", "prob"}, {}};
  for (std::size_t q = 0; q <= d.n; ++q) t.add_row({num(q), num(d[q])});
  return t;
}

ScenarioOutput run_counts(const ScenarioConfig& cfg) {
  const auto& c = *cfg.counts;
  const auto dist = count_distribution(c.mixture, c.n);
  const auto poisson = poisson_approx(c.mixture, c.n);
  const auto peaks = two_peak_readout(dist, c.mixture.p_l, c.mixture.p_r);

  ScenarioOutput out;
  out.tables.push_back({"distribution.csv", distribution_table(dist)});
  out.tables.push_back({"poisson.csv", distribution_table(poisson.distribution)});
  Table s{{"n", "rho_ll", "p_l", "p_r", "mean", "total", "peak_weight_l", "peak_weight_r",
           "two_peaked", "poisson_valid", "poisson_folded_mass"}, {}};
  s.add_row({num(c.n), num(c.mixture.rho_ll), num(c.mixture.p_l), num(c.mixture.p_r),
             num(dist.mean()), num(dist.total()), num(peaks.weight_l), num(peaks.weight_r),
             flag(peaks.two_peaked), flag(poisson.valid), num(poisson.folded_mass)});
  out.tables.push_back({"counts_summary.csv", std::move(s)});

  if (c.windows) {
    const auto table = window_correlation_table(c.mixture, c.windows->n1, c.windows->n2);
    Table w{{"q1", "q2", "correlation"}, {}};
    for (std::size_t a = 0; a <= table.n1; ++a) {
      for (std::size_t b = 0; b <= table.n2; ++b) w.add_row({num(a), num(b), num(table.at(a, b))});
    }
    out.tables.push_back({"correlation.csv", std::move(w)});
  }
  return out;
}

ScenarioOutput run_simulate(const ScenarioConfig& cfg) {
  const auto& s = *cfg.simulate;
  const auto runs = simulate_runs(s.mixture, s.n, s.runs, cfg.seed);

  ScenarioOutput out;
  Table rt{{"run_index", "initial_dot", "Q", "n"}, {}};
  std::string bits;
  bits.reserve(runs.size() * (s.n + 1));
  for (const auto& run : runs) {
    rt.add_row({num(static_cast<std::size_t>(run.run_index)), to_string(run.initial_dot),
                num(run.transmissions()), num(run.sequence.size())});
    for (const auto b : run.sequence) bits += b ? '1' : '0';
    bits += '\n';
  }
  out.tables.push_back({"runs.csv", std::move(rt)});
  out.texts.push_back({"runs.txt", std::move(bits)});

  const auto empirical = empirical_distribution(runs);
  const auto exact = count_distribution(s.mixture, s.n);
  Table et{{"q", "empirical", "exact"}, {}};
  double tv = 0.0;
  for (std::size_t q = 0; q <= s.n; ++q) {
    et.add_row({num(q), num(empirical[q]), num(exact[q])});
    tv += std::abs(empirical[q] - exact[q]);
  }
  out.tables.push_back({"empirical.csv", std::move(et)});

  const auto peaks = two_peak_readout(empirical, s.mixture.p_l, s.mixture.p_r);
  Table st{{"runs", "n", "seed", "peak_weight_l", "peak_weight_r", "two_peaked",
            "total_variation"}, {}};
  st.add_row({num(s.runs), num(s.n), std::to_string(cfg.seed), num(peaks.weight_l),
              num(peaks.weight_r), flag(peaks.two_peaked), num(0.5 * tv)});
  out.tables.push_back({"simulate_summary.csv", std::move(st)});

  if (s.windows) {
    const auto est = empirical_window_correlation(runs, s.windows->n1, s.windows->n2);
    const auto ref = window_correlation_table(s.mixture, s.windows->n1, s.windows->n2);
    const auto err = window_correlation_stderr(s.mixture, s.windows->n1, s.windows->n2, s.runs);
    Table wt{{"q1", "q2", "empirical", "exact", "stderr"}, {}};
    for (std::size_t a = 0; a <= est.n1; ++a) {
      for (std::size_t b = 0; b <= est.n2; ++b) {
        wt.add_row({num(a), num(b), num(est.at(a, b)), num(ref.at(a, b)), num(err.at(a, b))});
      }
    }
    out.tables.push_back({"window_correlation.csv", std::move(wt)});
  }
  return out;
}

ScenarioOutput run_fringe(const ScenarioConfig& cfg) {
  const auto& det = *cfg.detector;
  const auto pred = fringe_prediction(det.setup, cfg.fringe->dwell_time);
  Table t{{"v_d", "flux", "phase_shift", "contrast_factor"}, {}};
  t.add_row({num(*det.v_d), num(det.setup.flux), num(pred.phase_shift), num(pred.contrast_factor)});
  return {{{"fringe.csv", std::move(t)}}, {}};
}

ScenarioOutput run_sweep(const ScenarioConfig& cfg) {
  const auto& axis = *cfg.sweep;
  const auto points = expand_sweep(cfg);
  ScenarioOutput out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto part = run_scenario(points[i]);
    const std::string value = num(axis.value(i));
    for (const auto& nt : part.tables) {
      auto it = std::find_if(out.tables.begin(), out.tables.end(),
                             [&](const NamedTable& e) { return e.file == nt.file; });
      if (it == out.tables.end()) {
        Table fresh;
        fresh.header.push_back(axis.parameter);
        fresh.header.insert(fresh.header.end(), nt.table.header.begin(), nt.table.header.end());
        out.tables.push_back({nt.file, std::move(fresh)});
        it = std::prev(out.tables.end());
      }
      for (const auto& row : nt.table.rows) {
        std::vector<std::string> prefixed{value};
        prefixed.insert(prefixed.end(), row.begin(), row.end());
        it->table.add_row(std::move(prefixed));
      }
    }
    for (const auto& text : part.texts) {
      const auto dot = text.file.rfind('.');
      out.texts.push_back({text.file.substr(0, dot) + "." + std::to_string(i) + text.file.substr(dot),
                           text.content});
    }
  }
  return out;
}

}  // namespace

const Table* ScenarioOutput::find(std::string_view file) const {
  for (const auto& t : tables) {
    if (t.file == file) return &t.table;
  }
  return nullptr;
}

ScenarioOutput run_scenario(const ScenarioConfig& config) {
  switch (config.kind) {
    case ScenarioKind::Influence: return run_influence(config);
    case ScenarioKind::Evolve: return run_evolve(config);
    case ScenarioKind::Counts: return run_counts(config);
    case ScenarioKind::Simulate: return run_simulate(config);
    case ScenarioKind::Fringe: return run_fringe(config);
    case ScenarioKind::Sweep: return run_sweep(config);
  }
  throw InvalidInput("unknown scenario kind");
}

void write_outputs(const ScenarioOutput& output, const RunManifest& manifest,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  auto write = [&dir](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw IoError("cannot write " + path.string());
  };

  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& t : output.tables) {
    write(t.file, t.table.to_csv());
    files.push_back(t.file);
  }
  for (const auto& t : output.texts) {
    write(t.file, t.content);
    files.push_back(t.file);
  }

  nlohmann::ordered_json j;
  j["artifact"] = "dephasim";
  j["version"] = manifest.version;
  j["scenario"] = manifest.scenario;
  j["config_hash"] = "fnv1a64:" + hex64(manifest.config_hash);
  j["seed"] = manifest.seed;
  j["outputs"] = files;
  write("manifest.json", j.dump(2) + "\n");
}

}  // namespace dephasim
