#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "dephasim/counting.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/smatrix.hpp"
#include "oracles.hpp"

namespace dephasim {
namespace {

TEST(MixtureSpec, Validation) {
  EXPECT_NO_THROW(make_mixture(0.3, 0.2, 0.9));
  EXPECT_THROW(make_mixture(1.2, 0.2, 0.9), InvalidParameter);
  EXPECT_THROW(make_mixture(0.5, -0.1, 0.9), InvalidParameter);
  EXPECT_THROW(validate(MixtureSpec{0.5, 0.6, 0.1, 0.1}), InvalidParameter);
}

TEST(SequenceProbability, Examples) {
  const OutcomeSequence s10{1, 0};
  EXPECT_DOUBLE_EQ(sequence_probability(s10, make_mixture(1.0, 0.5, 0.3)), 0.25);

  const auto same = make_mixture(0.4, 0.3, 0.3);
  const OutcomeSequence a{1, 1, 0, 1, 0};
  const OutcomeSequence b{0, 0, 1, 1, 1};
  const double expect = std::pow(0.3, 3) * std::pow(0.7, 2);
  EXPECT_NEAR(sequence_probability(a, same), expect, 1e-16);
  EXPECT_NEAR(sequence_probability(b, same), expect, 1e-16);

  const OutcomeSequence ones{1, 1, 1};
  EXPECT_NEAR(sequence_probability(ones, make_mixture(0.5, 0.9, 0.1)), 0.365, 1e-15);

  EXPECT_THROW(sequence_probability(OutcomeSequence{}, same), InvalidInput);
  EXPECT_THROW(sequence_probability(OutcomeSequence{2}, same), InvalidInput);
}

TEST(BinomialPmf, AgreesWithPascalOnBothPaths) {
  for (std::size_t n : {1u, 5u, 30u, 31u, 60u, 200u}) {
    for (double p : {0.0, 0.01, 0.37, 0.5, 0.9, 1.0}) {
      const auto got = binomial_pmf(n, p);
      const auto want = oracle::binomial_pascal(n, p);
      for (std::size_t k = 0; k <= n; ++k) ASSERT_NEAR(got[k], want[k], 1e-12) << n << " " << p;
    }
  }
}

TEST(BinomialPmf, LargeNStaysNormalized) {
  const auto pmf = binomial_pmf(20000, 0.3);
  EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-10);
}

TEST(CountDistribution, Examples) {
  const auto fair = count_distribution(make_mixture(1.0, 0.5, 0.2), 2);
  EXPECT_DOUBLE_EQ(fair[0], 0.25);
  EXPECT_DOUBLE_EQ(fair[1], 0.5);
  EXPECT_DOUBLE_EQ(fair[2], 0.25);

  const auto d = count_distribution(make_mixture(0.5, 0.9, 0.1), 10);
  const double want = 0.5 * 10 * std::pow(0.9, 9) * 0.1 + 0.5 * 10 * std::pow(0.1, 9) * 0.9;
  EXPECT_NEAR(d[9], want, 1e-15);
  EXPECT_NEAR(d[9], 0.19371024900000008, 1e-15);
  EXPECT_THROW(count_distribution(make_mixture(0.5, 0.9, 0.1), 0), InvalidParameter);
}

TEST(CountDistribution, MatchesEnumeration) {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (const auto& spec : {make_mixture(0.5, 0.9, 0.1), make_mixture(0.2, 0.33, 0.71),
                             make_mixture(1.0, 0.6, 0.0), make_mixture(0.0, 0.6, 1.0)}) {
      double total = 0.0;
      const auto brute = oracle::enumerate_counts(spec, n, &total);
      const auto dist = count_distribution(spec, n);
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_NEAR(dist.total(), 1.0, 1e-10);
      for (std::size_t q = 0; q <= n; ++q) ASSERT_NEAR(dist[q], brute[q], 1e-12);
    }
  }
}

TEST(PoissonApprox, Examples) {
  const auto zero = poisson_approx(make_mixture(0.3, 0.0, 0.0), 50);
  EXPECT_EQ(zero.distribution[0], 1.0);
  EXPECT_EQ(zero.folded_mass, 0.0);

  const auto spec = make_mixture(1.0, 0.01, 0.01);
  const auto pois = poisson_approx(spec, 1000);
  const auto exact = count_distribution(spec, 1000);
  double tv = 0.0;
  for (std::size_t q = 0; q <= 1000; ++q) tv += std::abs(pois.distribution[q] - exact[q]);
  tv *= 0.5;
  EXPECT_LT(tv, 0.01);
  EXPECT_NEAR(tv, 0.0024579161905954076, 1e-6);  // scipy reference
  EXPECT_TRUE(pois.valid);
  EXPECT_NEAR(pois.distribution.total(), 1.0, 1e-12);

  EXPECT_FALSE(poisson_approx(make_mixture(1.0, 0.9, 0.9), 10).valid);
}

TEST(PoissonApprox, FoldsTailIntoLastBin) {
  // Mean 4.5 on support 0..5 leaves visible mass above Q = 5.
  const auto r = poisson_approx(make_mixture(1.0, 0.9, 0.9), 5);
  EXPECT_GT(r.folded_mass, 0.1);
  EXPECT_NEAR(r.distribution.total(), 1.0, 1e-12);
}

TEST(WindowCorrelation, VanishingCases) {
  for (std::size_t q1 = 0; q1 <= 6; ++q1) {
    for (std::size_t q2 = 0; q2 <= 4; ++q2) {
      EXPECT_EQ(window_correlation(make_mixture(1.0, 0.9, 0.1), 6, 4, q1, q2), 0.0);
      EXPECT_EQ(window_correlation(make_mixture(0.0, 0.9, 0.1), 6, 4, q1, q2), 0.0);
      EXPECT_EQ(window_correlation(make_mixture(0.4, 0.3, 0.3), 6, 4, q1, q2), 0.0);
    }
  }
}

TEST(WindowCorrelation, MatchesJointMixtureIdentity) {
  const auto spec = make_mixture(0.5, 0.9, 0.1);
  EXPECT_NEAR(window_correlation(spec, 10, 10, 9, 9), oracle::correlation_from_joint(spec, 10, 10, 9, 9),
              1e-12);
  const auto spec2 = make_mixture(0.27, 0.64, 0.15);
  for (std::size_t q1 = 0; q1 <= 7; ++q1) {
    for (std::size_t q2 = 0; q2 <= 5; ++q2) {
      ASSERT_NEAR(window_correlation(spec2, 7, 5, q1, q2),
                  oracle::correlation_from_joint(spec2, 7, 5, q1, q2), 1e-12);
    }
  }
  EXPECT_THROW(window_correlation(spec, 3, 3, 4, 0), InvalidParameter);
}

TEST(WindowCorrelation, SymmetricAndSumsToZero) {
  const auto spec = make_mixture(0.35, 0.8, 0.25);
  const auto t = window_correlation_table(spec, 8, 5);
  double sum = 0.0;
  for (std::size_t a = 0; a <= 8; ++a) {
    for (std::size_t b = 0; b <= 5; ++b) {
      sum += t.at(a, b);
      EXPECT_EQ(t.at(a, b), window_correlation(spec, 8, 5, a, b));
      EXPECT_DOUBLE_EQ(window_correlation(spec, 8, 5, a, b), window_correlation(spec, 5, 8, b, a));
    }
  }
  EXPECT_NEAR(sum, 0.0, 1e-10);
}

TEST(SimulateRuns, DegenerateProbabilities) {
  for (const auto& run : simulate_runs(make_mixture(0.5, 1.0, 1.0), 17, 40, 3)) {
    EXPECT_EQ(run.transmissions(), 17u);
  }
  for (const auto& run : simulate_runs(make_mixture(0.5, 0.0, 0.0), 17, 40, 3)) {
    EXPECT_EQ(run.transmissions(), 0u);
  }
}

TEST(SimulateRuns, RegenerateFromStreamKey) {
  const auto spec = make_mixture(0.5, 0.7, 0.2);
  const auto runs = simulate_runs(spec, 30, 20, 99);
  for (const auto& run : runs) {
    const auto again = regenerate_run(spec, 30, run.seed);
    EXPECT_EQ(again.sequence, run.sequence);
    EXPECT_EQ(again.initial_dot, run.initial_dot);
  }
}

TEST(SimulateRuns, TwoClustersAndExactBands) {
  const auto spec = make_mixture(0.5, 0.9, 0.1);
  const std::size_t n = 100;
  const std::size_t runs_n = 10000;
  const auto runs = simulate_runs(spec, n, runs_n, 2024);
  std::size_t near_high = 0, near_low = 0;
  for (const auto& r : runs) {
    const double frac = static_cast<double>(r.transmissions()) / n;
    if (std::abs(frac - 0.9) < 0.15) ++near_high;
    if (std::abs(frac - 0.1) < 0.15) ++near_low;
  }
  EXPECT_EQ(near_high + near_low, runs_n);

  const auto emp = empirical_distribution(runs);
  const auto exact = count_distribution(spec, n);
  for (std::size_t q = 0; q <= n; ++q) {
    const double sigma = std::sqrt(exact[q] * (1.0 - exact[q]) / runs_n);
    ASSERT_LE(std::abs(emp[q] - exact[q]), 4.0 * sigma + 1.0 / runs_n) << q;
  }
}

TEST(EmpiricalDistribution, Examples) {
  RunSample a;
  a.sequence = {1, 0, 1, 1};
  const auto point = empirical_distribution(std::vector<RunSample>{a});
  EXPECT_EQ(point[3], 1.0);
  EXPECT_EQ(point.total(), 1.0);

  RunSample lo, hi;
  lo.sequence = {0, 0, 0};
  hi.sequence = {1, 1, 1};
  const auto ends = empirical_distribution(std::vector<RunSample>{lo, hi});
  EXPECT_EQ(ends[0], 0.5);
  EXPECT_EQ(ends[3], 0.5);

  RunSample short_run;
  short_run.sequence = {1};
  EXPECT_THROW(empirical_distribution(std::vector<RunSample>{lo, short_run}), InvalidInput);
  EXPECT_THROW(empirical_distribution(std::vector<RunSample>{}), InvalidInput);
}

TEST(EmpiricalDistribution, ConvergesToBinomial) {
  const auto spec = make_mixture(1.0, 0.5, 0.5);
  const auto runs = simulate_runs(spec, 20, 100000, 5);
  const auto emp = empirical_distribution(runs);
  const auto exact = count_distribution(spec, 20);
  double tv = 0.0;
  for (std::size_t q = 0; q <= 20; ++q) tv += std::abs(emp[q] - exact[q]);
  EXPECT_LT(0.5 * tv, 0.01);
}

TEST(EmpiricalWindowCorrelation, IndependentCasesNearZero) {
  for (const auto& spec : {make_mixture(1.0, 0.6, 0.2), make_mixture(0.5, 0.4, 0.4)}) {
    const std::size_t runs_n = 20000;
    const auto runs = simulate_runs(spec, 12, runs_n, 77);
    const auto est = empirical_window_correlation(runs, 6, 6);
    const auto err = window_correlation_stderr(spec, 6, 6, runs_n);
    for (std::size_t a = 0; a <= 6; ++a) {
      for (std::size_t b = 0; b <= 6; ++b) {
        ASSERT_LE(std::abs(est.at(a, b)), 4.0 * err.at(a, b) + 2.0 / runs_n) << a << "," << b;
      }
    }
  }
}

TEST(EmpiricalWindowCorrelation, RejectsShortRuns) {
  const auto runs = simulate_runs(make_mixture(0.5, 0.9, 0.1), 10, 5, 1);
  EXPECT_THROW(empirical_window_correlation(runs, 6, 5), InvalidInput);
}

TEST(TwoPeakReadout, RecoversWeights) {
  const auto dist = count_distribution(make_mixture(0.3, 0.9, 0.1), 100);
  const auto r = two_peak_readout(dist, 0.9, 0.1);
  EXPECT_TRUE(r.two_peaked);
  EXPECT_NEAR(r.weight_l, 0.3, 1e-9);
  EXPECT_NEAR(r.weight_r, 0.7, 1e-9);
  EXPECT_EQ(r.mode_l, 90u);
  EXPECT_EQ(r.mode_r, 10u);

  const auto single = count_distribution(make_mixture(1.0, 0.5, 0.5), 50);
  EXPECT_FALSE(two_peak_readout(single, 0.5, 0.5).two_peaked);
}

TEST(CountingProperties, DirectionIndependentTransmissions) {
  // Probabilities taken from barrier angles do not depend on the current direction.
  const BarrierParams l{0.4, 0.2, 0.9}, r{1.1, -0.5, -0.3};
  const auto spec = make_mixture(0.6, transmission_probability(l), transmission_probability(r));
  const auto s_l = build_smatrix(l), s_r = build_smatrix(r);
  for (const auto dir : {Direction::Forward, Direction::Backward}) {
    const int c = channel(dir);
    EXPECT_NEAR(std::norm(s_l(c, c)), spec.p_l, 1e-15);
    EXPECT_NEAR(std::norm(s_r(c, c)), spec.p_r, 1e-15);
  }
}

}  // namespace
}  // namespace dephasim
