#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dephasim/counting.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/rng.hpp"

namespace dephasim {

namespace {

void require_sizes(std::size_t n, std::size_t n_runs) {
  if (n == 0) throw InvalidParameter("number of probes must be >= 1");
  if (n_runs == 0) throw InvalidParameter("number of runs must be >= 1");
}

void fill_run(const MixtureSpec& spec, std::size_t n, RunSample& run) {
  CounterStream stream{run.seed};
  run.initial_dot = stream.bernoulli(spec.rho_ll) ? Dot::L : Dot::R;
  const double p = run.initial_dot == Dot::L ? spec.p_l : spec.p_r;
  run.sequence.resize(n);
  for (auto& bit : run.sequence) bit = stream.bernoulli(p) ? 1 : 0;
}

void require_windows(std::span<const RunSample> samples, std::size_t n1, std::size_t n2) {
  if (samples.empty()) throw InvalidInput("no runs to analyse");
  for (const auto& run : samples) {
    if (run.sequence.size() < n1 + n2) {
      throw InvalidInput("run " + std::to_string(run.run_index) + " has " +
                         std::to_string(run.sequence.size()) + " probes, windows need " +
                         std::to_string(n1 + n2));
    }
  }
}

// Joint and marginal frequencies -> Prob(Q1,Q2) - Prob(Q1) Prob(Q2).
CorrelationTable correlation_from_counts(const std::vector<std::uint64_t>& joint, std::size_t n1,
                                         std::size_t n2, std::size_t runs) {
  const double inv = 1.0 / static_cast<double>(runs);
  std::vector<double> m1(n1 + 1, 0.0);
  std::vector<double> m2(n2 + 1, 0.0);
  for (std::size_t a = 0; a <= n1; ++a) {
    for (std::size_t b = 0; b <= n2; ++b) {
      const auto c = static_cast<double>(joint[a * (n2 + 1) + b]);
      m1[a] += c;
      m2[b] += c;
    }
  }
  CorrelationTable table{n1, n2, std::vector<double>((n1 + 1) * (n2 + 1))};
  for (std::size_t a = 0; a <= n1; ++a) {
    for (std::size_t b = 0; b <= n2; ++b) {
      table.at(a, b) = static_cast<double>(joint[a * (n2 + 1) + b]) * inv -
                       (m1[a] * inv) * (m2[b] * inv);
    }
  }
  return table;
}

std::vector<RunSample> seeded_runs(std::size_t n_runs, std::uint64_t seed) {
  std::vector<RunSample> runs(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) {
    runs[i].run_index = i;
    runs[i].seed = substream_key(seed, i);
  }
  return runs;
}

}  // namespace

RunSample regenerate_run(const MixtureSpec& spec, std::size_t n, std::uint64_t stream_key) {
  validate(spec);
  require_sizes(n, 1);
  RunSample run;
  run.seed = stream_key;
  fill_run(spec, n, run);
  return run;
}

std::vector<RunSample> simulate_runs(const MixtureSpec& spec, std::size_t n, std::size_t n_runs,
                                     std::uint64_t seed) {
  validate(spec);
  require_sizes(n, n_runs);
  auto runs = seeded_runs(n_runs, seed);
  const auto count = static_cast<std::ptrdiff_t>(n_runs);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < count; ++i) fill_run(spec, n, runs[i]);
  return runs;
}

CountDistribution empirical_distribution(std::span<const RunSample> samples) {
  if (samples.empty()) throw InvalidInput("no runs to histogram");
  const std::size_t n = samples.front().sequence.size();
  std::vector<std::uint64_t> hist(n + 1, 0);
  for (const auto& run : samples) {
    if (run.sequence.size() != n) throw InvalidInput("runs have unequal numbers of probes");
    ++hist[run.transmissions()];
  }
  CountDistribution dist{n, std::vector<double>(n + 1)};
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (std::size_t q = 0; q <= n; ++q) dist.probs[q] = static_cast<double>(hist[q]) * inv;
  return dist;
}

CorrelationTable empirical_window_correlation(std::span<const RunSample> samples,
                                              std::size_t n1, std::size_t n2) {
  require_windows(samples, n1, n2);
  const std::size_t cells = (n1 + 1) * (n2 + 1);
  std::vector<std::uint64_t> joint(cells, 0);
  const auto count = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(cells, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto& run = samples[i];
      ++local[run.transmissions(0, n1) * (n2 + 1) + run.transmissions(n1, n1 + n2)];
    }
#pragma omp critical(dephasim_window_merge)
    for (std::size_t c = 0; c < cells; ++c) joint[c] += local[c];
  }
  return correlation_from_counts(joint, n1, n2, samples.size());
}

namespace serial {

std::vector<RunSample> simulate_runs(const MixtureSpec& spec, std::size_t n, std::size_t n_runs,
                                     std::uint64_t seed) {
  validate(spec);
  require_sizes(n, n_runs);
  auto runs = seeded_runs(n_runs, seed);
  for (auto& run : runs) fill_run(spec, n, run);
  return runs;
}

CorrelationTable empirical_window_correlation(std::span<const RunSample> samples,
                                              std::size_t n1, std::size_t n2) {
  require_windows(samples, n1, n2);
  std::vector<std::uint64_t> joint((n1 + 1) * (n2 + 1), 0);
  for (const auto& run : samples) {
    ++joint[run.transmissions(0, n1) * (n2 + 1) + run.transmissions(n1, n1 + n2)];
  }
  return correlation_from_counts(joint, n1, n2, samples.size());
}

}  // namespace serial
}  // namespace dephasim
