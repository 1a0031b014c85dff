#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dephasim {

// Diagonal of the dot density matrix plus the single-probe transmission
// probability seen with the electron on each dot. Off-diagonal elements do not
// enter the current statistics while the dot is frozen.
struct MixtureSpec {
  double rho_ll = 1.0;
  double rho_rr = 0.0;
  double p_l = 0.0;
  double p_r = 0.0;

  double q_l() const { return 1.0 - p_l; }
  double q_r() const { return 1.0 - p_r; }
};

void validate(const MixtureSpec& spec);

// Builds a spec with rho_rr = 1 - rho_ll.
MixtureSpec make_mixture(double rho_ll, double p_l, double p_r);

// One probe outcome per entry: 1 = transmitted, 0 = reflected.
using OutcomeSequence = std::vector<std::uint8_t>;

enum class Dot : std::uint8_t { L, R };

const char* to_string(Dot dot) noexcept;

// Probability of Q transmissions, Q = 0..n.
struct CountDistribution {
  std::size_t n = 0;
  std::vector<double> probs;

  double operator[](std::size_t q) const { return probs[q]; }
  double total() const;
  double mean() const;
};

struct RunSample {
  std::uint64_t run_index = 0;
  std::uint64_t seed = 0;  // substream key; regenerate_run(spec, n, seed) reproduces the run
  Dot initial_dot = Dot::L;
  OutcomeSequence sequence;

  std::size_t transmissions() const;
  std::size_t transmissions(std::size_t begin, std::size_t end) const;
};

/// Frozen-dot probability of an exact outcome sequence:
///   rho_LL prod_i (p_L or q_L) + rho_RR prod_i (p_R or q_R)
double sequence_probability(std::span<const std::uint8_t> seq, const MixtureSpec& spec);

/// Binomial PMF over Q = 0..n. Direct products for n <= 30, log-space above.
std::vector<double> binomial_pmf(std::size_t n, double p);

// Poisson PMF with mean `mean` over Q = 0..n; mass above n is added to the last bin.
std::vector<double> poisson_pmf_folded(std::size_t n, double mean, double* folded = nullptr);

/// rho_LL Binom(Q; n, p_L) + rho_RR Binom(Q; n, p_R).
CountDistribution count_distribution(const MixtureSpec& spec, std::size_t n);

struct PoissonReport {
  CountDistribution distribution;
  double folded_mass = 0.0;  // component tail mass beyond Q = n, weighted and moved to Q = n
  bool valid = false;        // n large and every transmission probability small
};

inline constexpr std::size_t kPoissonMinProbes = 20;
inline constexpr double kPoissonMaxProbability = 0.05;

PoissonReport poisson_approx(const MixtureSpec& spec, std::size_t n);

/// Prob(Q1, Q2) - Prob(Q1) Prob(Q2) for consecutive windows of n1 and n2 probes:
///   rho_LL (1 - rho_LL) (P_L(q1) - P_R(q1)) (P_L(q2) - P_R(q2))
/// Vanishes identically when one dot is certain or the two dots transmit alike.
double window_correlation(const MixtureSpec& spec, std::size_t n1, std::size_t n2,
                          std::size_t q1, std::size_t q2);

// (n1 + 1) x (n2 + 1) table indexed [q1][q2].
struct CorrelationTable {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<double> values;

  double at(std::size_t q1, std::size_t q2) const { return values[q1 * (n2 + 1) + q2]; }
  double& at(std::size_t q1, std::size_t q2) { return values[q1 * (n2 + 1) + q2]; }
};

CorrelationTable window_correlation_table(const MixtureSpec& spec, std::size_t n1,
                                          std::size_t n2);

/// Large-sample standard error of the frequency estimate of each correlation
/// cell from `n_runs` independent runs (delta method on the multinomial counts,
/// evaluated at the exact mixture probabilities).
CorrelationTable window_correlation_stderr(const MixtureSpec& spec, std::size_t n1,
                                           std::size_t n2, std::size_t n_runs);

/// Monte Carlo ensemble: each run draws its dot from (rho_LL, rho_RR) and then
/// n independent transmissions with that dot's probability. Each run owns a
/// counter-based substream keyed by (seed, run index), so the output does not
/// depend on thread count or schedule. Runs are generated in parallel.
std::vector<RunSample> simulate_runs(const MixtureSpec& spec, std::size_t n, std::size_t n_runs,
                                     std::uint64_t seed);

RunSample regenerate_run(const MixtureSpec& spec, std::size_t n, std::uint64_t stream_key);

// Normalized histogram of per-run transmission counts.
CountDistribution empirical_distribution(std::span<const RunSample> samples);

/// Splits each run into a first window of n1 probes and a following window of
/// n2 probes and estimates Prob(Q1, Q2) - Prob(Q1) Prob(Q2) from run frequencies.
CorrelationTable empirical_window_correlation(std::span<const RunSample> samples,
                                              std::size_t n1, std::size_t n2);

// Weight of the two peaks of a count histogram, split halfway between n p_L and n p_R.
struct PeakReadout {
  double weight_l = 0.0;
  double weight_r = 0.0;
  std::size_t mode_l = 0;
  std::size_t mode_r = 0;
  bool two_peaked = false;  // distinct modes separated by a valley below half the smaller peak
};

PeakReadout two_peak_readout(const CountDistribution& dist, double p_l, double p_r);

namespace serial {
std::vector<RunSample> simulate_runs(const MixtureSpec& spec, std::size_t n, std::size_t n_runs,
                                     std::uint64_t seed);
CorrelationTable empirical_window_correlation(std::span<const RunSample> samples,
                                              std::size_t n1, std::size_t n2);
}  // namespace serial

}  // namespace dephasim
