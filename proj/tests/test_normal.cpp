#include "doctest.h"

#include <cmath>
#include <vector>

#include "aqt/normal.hpp"
#include "aqt/rng.hpp"
#include "support/oracles.hpp"

using aqt::Rng;
using aqt::TruncatedNormalSpec;

TEST_SUITE("normal") {

TEST_CASE("cdf reference values") {
  CHECK(aqt::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(aqt::normal_cdf(1.0) ==
        doctest::Approx(0.8413447460685429).epsilon(1e-13));
  CHECK(aqt::normal_cdf(-1.0) + aqt::normal_cdf(1.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(aqt::normal_cdf(-10.0) ==
        doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
}

TEST_CASE("icdf known quantiles") {
  CHECK(aqt::normal_icdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(aqt::normal_icdf(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(aqt::normal_icdf(0.8413447460685429) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("icdf round trip across the support") {
  const double ps[] = {1e-300, 1e-100, 1e-12, 1e-6, 0.02425, 0.3,  0.5,
                       0.7,    0.97,   1.0 - 1e-6, 1.0 - 1e-12, 1.0 - 1e-15};
  for (double p : ps) {
    const double x = aqt::normal_icdf(p);
    const double back = aqt::normal_cdf(x);
    // relative error in probability, symmetric for the upper tail
    const double scale = std::min(p, 1.0 - p);
    if (scale > 0)
      CHECK(std::fabs(back - p) / scale < 1e-11);
  }
}

TEST_CASE("standard normal draws match moments") {
  Rng rng(5);
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = aqt::sample_standard_normal(rng);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  CHECK(std::fabs(mean) < 0.015);
  CHECK(sum2 / n - mean * mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("truncated draws stay inside arbitrary bounds") {
  Rng rng(6);
  for (int trial = 0; trial < 2000; ++trial) {
    TruncatedNormalSpec spec;
    spec.mean = rng.uniform(-3.0, 3.0);
    spec.stddev = rng.uniform(0.0, 2.0);  // includes degenerate 0
    spec.lower = rng.uniform(-2.0, 2.0);
    spec.upper = spec.lower + rng.uniform(0.0, 2.0);
    const double x = aqt::truncated_normal_sample(spec, rng);
    CHECK(x >= spec.lower);
    CHECK(x <= spec.upper);
  }
}

TEST_CASE("degenerate cases collapse to point masses") {
  Rng rng(7);
  CHECK(aqt::truncated_normal_sample({0.5, 0.0, -1.0, 1.0}, rng) == 0.5);
  CHECK(aqt::truncated_normal_sample({5.0, 0.0, -1.0, 1.0}, rng) == 1.0);
  CHECK(aqt::truncated_normal_sample({0.3, 1.0, 0.7, 0.7}, rng) == 0.7);
}

TEST_CASE("negligible-mass interval falls back to the nearer bound") {
  Rng rng(8);
  // mass ~ 7.6e-24 below the 1e-15 cutoff; nearer bound to mean 0 is 10
  for (int i = 0; i < 10; ++i)
    CHECK(aqt::truncated_normal_sample({0.0, 1.0, 10.0, 11.0}, rng) == 10.0);
  // mirrored: interval far below the mean
  for (int i = 0; i < 10; ++i)
    CHECK(aqt::truncated_normal_sample({0.0, 1.0, -11.0, -10.0}, rng) == -10.0);
}

TEST_CASE("symmetric interval has symmetric sample mean") {
  Rng rng(9);
  const int n = 200000;
  double sum = 0;
  for (int i = 0; i < n; ++i)
    sum += aqt::truncated_normal_sample({0.0, 1.0, -1.0, 1.0}, rng);
  // sd of the mean ~ sqrt(0.2911)/sqrt(n) = 0.0012
  CHECK(std::fabs(sum / n) < 0.005);
}

TEST_CASE("moments match the analytic truncated-normal values") {
  struct Probe {
    double mean, sd, lo, hi;
  };
  const Probe probes[] = {
      {0.0, 1.0, -1.0, 1.0},
      {0.3, 0.5, -0.2, 0.9},
      {-0.8, 0.25, -1.0, -0.1},
      {0.0, 2.0, 0.5, 1.0},
  };
  Rng rng(10);
  const int n = 200000;
  for (const Probe& p : probes) {
    const auto [want_mean, want_var] =
        oracles::tn_moments(p.mean, p.sd, p.lo, p.hi);
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x =
          aqt::truncated_normal_sample({p.mean, p.sd, p.lo, p.hi}, rng);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double mean_tol = 5.0 * std::sqrt(want_var / n);
    CHECK(std::fabs(mean - want_mean) < mean_tol);
    CHECK(var == doctest::Approx(want_var).epsilon(0.03));
  }
}

TEST_CASE("distribution passes a KS check") {
  Rng rng(11);
  const int n = 100000;
  std::vector<double> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i)
    samples.push_back(
        aqt::truncated_normal_sample({0.3, 0.5, -0.2, 0.9}, rng));
  const double d = oracles::tn_ks_statistic(samples, 0.3, 0.5, -0.2, 0.9);
  // K_alpha / sqrt(n) with alpha ~ 1e-4
  CHECK(d < 2.2 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("reference value: variance of TN(0,1,[-1,1])") {
  // analytic: 1 - 2 phi(1) / (2 Phi(1) - 1) = 0.29112...
  const auto [mean, var] = oracles::tn_moments(0.0, 1.0, -1.0, 1.0);
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(var == doctest::Approx(0.2911251).epsilon(1e-5));

  Rng rng(12);
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = aqt::truncated_normal_sample({0.0, 1.0, -1.0, 1.0}, rng);
    sum += x;
    sum2 += x * x;
  }
  const double m = sum / n;
  CHECK(std::fabs(sum2 / n - m * m - var) < 0.004);
}

}  // TEST_SUITE
