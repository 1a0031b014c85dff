#include "dephasim/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dephasim/errors.hpp"

namespace dephasim {

namespace {

void require_probability(double x, const char* name) {
  if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
    throw InvalidParameter(std::string(name) + " = " + std::to_string(x) + " outside [0, 1]");
  }
}

constexpr std::size_t kDirectBinomialMax = 30;

}  // namespace

void validate(const MixtureSpec& spec) {
  require_probability(spec.rho_ll, "rho_ll");
  require_probability(spec.rho_rr, "rho_rr");
  require_probability(spec.p_l, "p_l");
  require_probability(spec.p_r, "p_r");
  if (std::abs(spec.rho_ll + spec.rho_rr - 1.0) > 1e-12) {
    throw InvalidParameter("rho_ll + rho_rr must equal 1");
  }
}

MixtureSpec make_mixture(double rho_ll, double p_l, double p_r) {
  MixtureSpec spec{rho_ll, 1.0 - rho_ll, p_l, p_r};
  validate(spec);
  return spec;
}

const char* to_string(Dot dot) noexcept { return dot == Dot::L ? "L" : "R"; }

double CountDistribution::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

double CountDistribution::mean() const {
  double m = 0.0;
  for (std::size_t q = 0; q < probs.size(); ++q) m += static_cast<double>(q) * probs[q];
  return m;
}

std::size_t RunSample::transmissions() const { return transmissions(0, sequence.size()); }

std::size_t RunSample::transmissions(std::size_t begin, std::size_t end) const {
  std::size_t q = 0;
  for (std::size_t i = begin; i < end; ++i) q += sequence[i];
  return q;
}

double sequence_probability(std::span<const std::uint8_t> seq, const MixtureSpec& spec) {
  validate(spec);
  if (seq.empty()) throw InvalidInput("outcome sequence must hold at least one probe");
  double prod_l = 1.0;
  double prod_r = 1.0;
  for (const auto bit : seq) {
    if (bit > 1) throw InvalidInput("outcome bits must be 0 or 1");
    prod_l *= bit ? spec.p_l : spec.q_l();
    prod_r *= bit ? spec.p_r : spec.q_r();
  }
  return spec.rho_ll * prod_l + spec.rho_rr * prod_r;
}

std::vector<double> binomial_pmf(std::size_t n, double p) {
  require_probability(p, "p");
  std::vector<double> pmf(n + 1, 0.0);
  if (p == 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const double q = 1.0 - p;
  if (n <= kDirectBinomialMax) {
    double choose = 1.0;  // C(n, k), exact in double for n <= 30
    for (std::size_t k = 0; k <= n; ++k) {
      double term = choose;
      for (std::size_t i = 0; i < k; ++i) term *= p;
      for (std::size_t i = k; i < n; ++i) term *= q;
      pmf[k] = term;
      choose = choose * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    return pmf;
  }
  const double nn = static_cast<double>(n);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_nfact = std::lgamma(nn + 1.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    pmf[k] = std::exp(log_nfact - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0) +
                      kk * log_p + (nn - kk) * log_q);
  }
  return pmf;
}

std::vector<double> poisson_pmf_folded(std::size_t n, double mean, double* folded) {
  if (!std::isfinite(mean) || mean < 0.0) throw InvalidParameter("poisson mean must be >= 0");
  std::vector<double> pmf(n + 1, 0.0);
  if (mean == 0.0) {
    pmf[0] = 1.0;
  } else {
    const double log_mean = std::log(mean);
    for (std::size_t k = 0; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      pmf[k] = std::exp(kk * log_mean - mean - std::lgamma(kk + 1.0));
    }
  }
  const double tail = std::max(0.0, 1.0 - std::accumulate(pmf.begin(), pmf.end(), 0.0));
  pmf[n] += tail;
  if (folded != nullptr) *folded = tail;
  return pmf;
}

CountDistribution count_distribution(const MixtureSpec& spec, std::size_t n) {
  validate(spec);
  if (n == 0) throw InvalidParameter("number of probes must be >= 1");
  const auto pl = binomial_pmf(n, spec.p_l);
  const auto pr = binomial_pmf(n, spec.p_r);
  CountDistribution dist{n, std::vector<double>(n + 1)};
  for (std::size_t q = 0; q <= n; ++q) dist.probs[q] = spec.rho_ll * pl[q] + spec.rho_rr * pr[q];
  return dist;
}

PoissonReport poisson_approx(const MixtureSpec& spec, std::size_t n) {
  validate(spec);
  if (n == 0) throw InvalidParameter("number of probes must be >= 1");
  const double nn = static_cast<double>(n);
  double folded_l = 0.0;
  double folded_r = 0.0;
  const auto pl = poisson_pmf_folded(n, spec.p_l * nn, &folded_l);
  const auto pr = poisson_pmf_folded(n, spec.p_r * nn, &folded_r);

  PoissonReport report;
  report.distribution = {n, std::vector<double>(n + 1)};
  for (std::size_t q = 0; q <= n; ++q) {
    report.distribution.probs[q] = spec.rho_ll * pl[q] + spec.rho_rr * pr[q];
  }
  report.folded_mass = spec.rho_ll * folded_l + spec.rho_rr * folded_r;
  report.valid = n >= kPoissonMinProbes && spec.p_l <= kPoissonMaxProbability &&
                 spec.p_r <= kPoissonMaxProbability;
  return report;
}

double window_correlation(const MixtureSpec& spec, std::size_t n1, std::size_t n2,
                          std::size_t q1, std::size_t q2) {
  validate(spec);
  if (q1 > n1 || q2 > n2) throw InvalidParameter("window count exceeds window length");
  const auto l1 = binomial_pmf(n1, spec.p_l);
  const auto r1 = binomial_pmf(n1, spec.p_r);
  const auto l2 = binomial_pmf(n2, spec.p_l);
  const auto r2 = binomial_pmf(n2, spec.p_r);
  return spec.rho_ll * (1.0 - spec.rho_ll) * (l1[q1] - r1[q1]) * (l2[q2] - r2[q2]);
}

CorrelationTable window_correlation_table(const MixtureSpec& spec, std::size_t n1,
                                          std::size_t n2) {
  validate(spec);
  const auto l1 = binomial_pmf(n1, spec.p_l);
  const auto r1 = binomial_pmf(n1, spec.p_r);
  const auto l2 = binomial_pmf(n2, spec.p_l);
  const auto r2 = binomial_pmf(n2, spec.p_r);
  const double weight = spec.rho_ll * (1.0 - spec.rho_ll);
  CorrelationTable table{n1, n2, std::vector<double>((n1 + 1) * (n2 + 1))};
  for (std::size_t q1 = 0; q1 <= n1; ++q1) {
    for (std::size_t q2 = 0; q2 <= n2; ++q2) {
      table.at(q1, q2) = weight * (l1[q1] - r1[q1]) * (l2[q2] - r2[q2]);
    }
  }
  return table;
}

CorrelationTable window_correlation_stderr(const MixtureSpec& spec, std::size_t n1,
                                           std::size_t n2, std::size_t n_runs) {
  validate(spec);
  if (n_runs == 0) throw InvalidParameter("n_runs must be >= 1");
  const auto l1 = binomial_pmf(n1, spec.p_l);
  const auto r1 = binomial_pmf(n1, spec.p_r);
  const auto l2 = binomial_pmf(n2, spec.p_l);
  const auto r2 = binomial_pmf(n2, spec.p_r);
  CorrelationTable table{n1, n2, std::vector<double>((n1 + 1) * (n2 + 1))};
  for (std::size_t q1 = 0; q1 <= n1; ++q1) {
    const double m1 = spec.rho_ll * l1[q1] + spec.rho_rr * r1[q1];
    for (std::size_t q2 = 0; q2 <= n2; ++q2) {
      const double m2 = spec.rho_ll * l2[q2] + spec.rho_rr * r2[q2];
      const double joint = spec.rho_ll * l1[q1] * l2[q2] + spec.rho_rr * r1[q1] * r2[q2];
      // Influence function a - m2 b - m1 c of the estimate a_hat - b_hat c_hat,
      // where a, b, c indicate the joint cell and the two marginal cells (bc = a).
      const double mean = joint - 2.0 * m1 * m2;
      const double second = joint + m2 * m2 * m1 + m1 * m1 * m2 - 2.0 * m2 * joint -
                            2.0 * m1 * joint + 2.0 * m1 * m2 * joint;
      const double var = std::max(0.0, second - mean * mean);
      table.at(q1, q2) = std::sqrt(var / static_cast<double>(n_runs));
    }
  }
  return table;
}

PeakReadout two_peak_readout(const CountDistribution& dist, double p_l, double p_r) {
  require_probability(p_l, "p_l");
  require_probability(p_r, "p_r");
  if (dist.probs.size() != dist.n + 1) throw InvalidInput("distribution size mismatch");
  const double nn = static_cast<double>(dist.n);
  const double split = 0.5 * (p_l + p_r) * nn;
  const bool l_high = p_l >= p_r;

  PeakReadout out;
  double peak_l = -1.0;
  double peak_r = -1.0;
  for (std::size_t q = 0; q <= dist.n; ++q) {
    const double x = static_cast<double>(q);
    const bool upper = x > split || (x == split && l_high);
    const bool on_l = upper == l_high;
    const double w = dist.probs[q];
    if (on_l) {
      out.weight_l += w;
      if (w > peak_l) peak_l = w, out.mode_l = q;
    } else {
      out.weight_r += w;
      if (w > peak_r) peak_r = w, out.mode_r = q;
    }
  }
  if (peak_l > 0.0 && peak_r > 0.0 && out.mode_l != out.mode_r) {
    const auto [lo, hi] = std::minmax(out.mode_l, out.mode_r);
    double valley = peak_l;
    for (std::size_t q = lo; q <= hi; ++q) valley = std::min(valley, dist.probs[q]);
    out.two_peaked = valley < 0.5 * std::min(peak_l, peak_r);
  }
  return out;
}

}  // namespace dephasim
