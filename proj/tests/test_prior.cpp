#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "aqt/backend.hpp"
#include "aqt/bloch.hpp"
#include "aqt/prior.hpp"
#include "aqt/rng.hpp"

using namespace aqt;

namespace {

OutcomeCounts counts_on(const Vec3& axis, long shots, long n_plus) {
  return {axis, shots, n_plus};
}

GaussianPrior pauli_prior(long n0, long px, long py, long pz,
                          double eps = 1e-4) {
  return build_prior(counts_on({1, 0, 0}, n0, px), counts_on({0, 1, 0}, n0, py),
                     counts_on({0, 0, 1}, n0, pz), eps);
}

// isotropic prior with hand-picked variance, for the volume/diameter checks
GaussianPrior manual_prior(double sigma_jj) {
  GaussianPrior p;
  p.mean = {0, 0, 0};
  p.raw_mean = {0, 0, 0};
  p.variance = {sigma_jj, sigma_jj, sigma_jj};
  p.epsilon = 1e-4;
  p.shots_per_axis = 50;
  return p;
}

}  // namespace

TEST_SUITE("prior") {

TEST_CASE("maximally mixed counts give the 1/49 floor") {
  const GaussianPrior p = pauli_prior(50, 25, 25, 25);
  CHECK(p.mean.norm() == 0.0);
  CHECK(p.raw_mean.norm() == 0.0);
  for (int j = 0; j < 3; ++j) {
    CHECK(p.variance[j] == doctest::Approx(1.0 / 49 + 1e-4).epsilon(1e-14));
  }
  CHECK(p.shots_per_axis == 50);
}

TEST_CASE("saturated counts collapse the variance to epsilon") {
  const GaussianPrior p = pauli_prior(50, 25, 25, 50);
  CHECK(p.mean.z == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.variance[2] == doctest::Approx(1e-4).epsilon(1e-12));
  // the formula reduces to (1 - r^2)/(N0 - 1) + eps
  CHECK(p.variance[0] == doctest::Approx(1.0 / 49 + 1e-4).epsilon(1e-12));
}

TEST_CASE("out-of-ball raw mean is projected onto the sphere") {
  // n+ = 48 on every axis: r_hat = (48-2)/50 = 0.92 per axis
  const GaussianPrior p = pauli_prior(50, 48, 48, 48);
  CHECK(p.raw_mean.x == doctest::Approx(0.92).epsilon(1e-14));
  CHECK(p.raw_mean.y == doctest::Approx(0.92).epsilon(1e-14));
  CHECK(p.raw_mean.z == doctest::Approx(0.92).epsilon(1e-14));
  CHECK(p.mean.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const double unit = 1.0 / std::sqrt(3.0);
  CHECK(p.mean.x == doctest::Approx(unit).epsilon(1e-14));
  CHECK(p.mean.y == doctest::Approx(unit).epsilon(1e-14));
  CHECK(p.mean.z == doctest::Approx(unit).epsilon(1e-14));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS((void)pauli_prior(1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)pauli_prior(50, 25, 25, 25, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pauli_prior(50, 25, 25, 25, -1e-4),
                  std::invalid_argument);
  // mismatched budgets
  CHECK_THROWS_AS((void)build_prior(counts_on({1, 0, 0}, 50, 25),
                                    counts_on({0, 1, 0}, 40, 25),
                                    counts_on({0, 0, 1}, 50, 25), 1e-4),
                  std::invalid_argument);
  // wrong axes
  CHECK_THROWS_AS(
      (void)build_prior(counts_on({0, 1, 0}, 50, 25),
                        counts_on({1, 0, 0}, 50, 25),
                        counts_on({0, 0, 1}, 50, 25), 1e-4),
      std::invalid_argument);
}

TEST_CASE("variance is monotone decreasing in the estimate magnitude") {
  double prev = 1e9;
  for (long np = 25; np <= 50; ++np) {
    const GaussianPrior p = pauli_prior(50, np, 25, 25);
    CHECK(p.variance[0] < prev);
    prev = p.variance[0];
  }
}

TEST_CASE("ellipsoid diameters") {
  const double s = 11.345;
  const Vec3 d = ellipsoid_diameters(manual_prior(4e-4), s);
  CHECK(d.x == doctest::Approx(0.1348).epsilon(0.0005 / 0.1348));
  CHECK(d.x == doctest::Approx(2.0 * std::sqrt(s * 4e-4)).epsilon(1e-14));
  CHECK(d.y == d.x);
  CHECK(d.z == d.x);

  const Vec3 wide = ellipsoid_diameters(manual_prior(1.0 / 49), s);
  CHECK(wide.x == doctest::Approx(0.962).epsilon(0.001));

  const Vec3 zero = ellipsoid_diameters(manual_prior(0.0), s);
  CHECK(zero.x == 0.0);
  CHECK(zero.y == 0.0);
  CHECK(zero.z == 0.0);

  CHECK_THROWS_AS((void)ellipsoid_diameters(manual_prior(4e-4), 0.0),
                  std::invalid_argument);
}

TEST_CASE("prior volume and the unit-ball ratio") {
  const double s = 11.345;
  const double ball = 4.0 * std::numbers::pi / 3.0;

  // at Sigma_jj ~ 2e-3 the credible region is already tiny
  const double tight = prior_volume(manual_prior(2.1e-3), s);
  CHECK(tight / ball == doctest::Approx(0.0036774).epsilon(1e-4));
  CHECK(tight / ball <= 0.1);

  // at the N0=50 maximally mixed floor the reduction is weaker
  const double floor50 = prior_volume(manual_prior(1.0 / 49 + 1e-4), s);
  CHECK(floor50 / ball == doctest::Approx(0.1122).epsilon(1e-3));

  CHECK(prior_volume(manual_prior(0.0), s) == 0.0);
}

TEST_CASE("mahalanobis distance uses the raw center") {
  GaussianPrior p = manual_prior(0.01);
  p.raw_mean = {0.5, 0, 0};
  p.mean = {0.4, 0, 0};  // deliberately different
  const double d2 = prior_mahalanobis2(p, {0.6, 0, 0});
  CHECK(d2 == doctest::Approx(0.01 / 0.01).epsilon(1e-12));
  CHECK(prior_mahalanobis2(p, p.raw_mean) == 0.0);
}

TEST_CASE("sampled cloud has uniform weights and valid norms") {
  const GaussianPrior p = pauli_prior(50, 40, 20, 30);
  Rng rng(17);
  const ParticleCloud cloud = sample_prior_cloud(p, 1000, rng);
  REQUIRE(cloud.size() == 1000);
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    CHECK(cloud.w[k] == 1e-3);
    CHECK(cloud.location(k).norm() <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS((void)sample_prior_cloud(p, 0, rng), std::invalid_argument);
}

TEST_CASE("vanishing covariance concentrates the cloud at the mean") {
  GaussianPrior p = manual_prior(1e-8);
  p.mean = {0.2, -0.3, 0.4};
  p.raw_mean = p.mean;
  Rng rng(19);
  const ParticleCloud cloud = sample_prior_cloud(p, 500, rng);
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const Vec3 d = cloud.location(k) - p.mean;
    CHECK(d.norm() < 1e-3);
  }
}

TEST_CASE("wide symmetric prior samples to a near-zero mean") {
  const GaussianPrior p = manual_prior(0.0204);
  Rng rng(23);
  const ParticleCloud cloud = sample_prior_cloud(p, 100000, rng);
  const Vec3 m = bme(cloud);
  CHECK(std::fabs(m.x) < 0.01);
  CHECK(std::fabs(m.y) < 0.01);
  CHECK(std::fabs(m.z) < 0.01);
}

TEST_CASE("credible ellipsoid covers the true state") {
  // 400 simulated trials at N0 = 50; the 99% ellipsoid centered at the raw
  // estimate should cover the truth in nearly all of them.
  Rng master(29);
  const double s = 11.345;
  int covered = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    Rng trial = master.substream(static_cast<std::uint64_t>(t));
    const Vec3 truth = random_state(StateKind::mixed, trial);
    Backend b = Backend::ideal(truth, trial.substream(1));
    const OutcomeCounts cx = b.measure({1, 0, 0}, 50);
    const OutcomeCounts cy = b.measure({0, 1, 0}, 50);
    const OutcomeCounts cz = b.measure({0, 0, 1}, 50);
    const GaussianPrior p = build_prior(cx, cy, cz, 1e-4);
    if (prior_mahalanobis2(p, truth) <= s) ++covered;
  }
  CHECK(static_cast<double>(covered) / trials >= 0.93);
}

}  // TEST_SUITE
