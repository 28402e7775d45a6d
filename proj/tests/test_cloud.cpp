#include "doctest.h"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>

#include "aqt/cloud.hpp"
#include "aqt/errors.hpp"

using namespace aqt;

namespace {

ParticleCloud make_cloud(std::initializer_list<Vec3> pts,
                         std::initializer_list<double> ws) {
  ParticleCloud c;
  for (const Vec3& p : pts) {
    c.x.push_back(p.x);
    c.y.push_back(p.y);
    c.z.push_back(p.z);
  }
  for (double w : ws) c.w.push_back(w);
  return c;
}

}  // namespace

TEST_SUITE("cloud") {

TEST_CASE("log likelihood values") {
  // p = 0.5 at the maximally mixed state: any 50-shot split gives 50 ln 1/2
  const OutcomeCounts even{{0, 0, 1}, 50, 25};
  CHECK(log_likelihood({0, 0, 0}, even) ==
        doctest::Approx(-50.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(log_likelihood({0, 0, 0}, even) == doctest::Approx(-34.657).epsilon(1e-4));

  // eigenstate, all plus: certain outcome carries zero information
  const OutcomeCounts all_plus{{0, 0, 1}, 50, 50};
  CHECK(log_likelihood({0, 0, 1}, all_plus) == 0.0);

  // eigenstate with an impossible minus outcome
  const OutcomeCounts one_minus{{0, 0, 1}, 50, 49};
  CHECK(log_likelihood({0, 0, 1}, one_minus) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("bayes update normalizes a 2:1 likelihood ratio") {
  // choose projections so L0 / L1 = 2 with one shot:
  // p0 = 2/3, p1 = 1/3 along z
  ParticleCloud c = make_cloud({{0, 0, 1.0 / 3}, {0, 0, -1.0 / 3}}, {0.5, 0.5});
  bayes_update(c, {{0, 0, 1}, 1, 1});
  CHECK(c.w[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(c.w[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(c.t == 1);
}

TEST_CASE("constant likelihood leaves weights unchanged") {
  // both particles differ only along x; measure z with an even split
  ParticleCloud c = make_cloud({{0.5, 0, 0.2}, {-0.5, 0, 0.2}}, {0.7, 0.3});
  bayes_update(c, {{0, 0, 1}, 40, 24});
  CHECK(c.w[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(c.w[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("splitting a batch of shots does not change the posterior") {
  ParticleCloud whole = make_cloud(
      {{0.1, 0.2, 0.3}, {-0.4, 0.0, 0.5}, {0.0, -0.6, -0.1}, {0.2, 0.2, 0.2}},
      {0.25, 0.25, 0.25, 0.25});
  ParticleCloud split = whole;

  const Vec3 axis = Vec3{1, 2, -1}.normalized();
  bayes_update(whole, {axis, 60, 37});
  bayes_update(split, {axis, 23, 15});
  bayes_update(split, {axis, 37, 22});

  for (std::size_t k = 0; k < whole.size(); ++k)
    CHECK(std::fabs(whole.w[k] - split.w[k]) < 1e-9);
  CHECK(whole.t == 1);
  CHECK(split.t == 2);
}

TEST_CASE("weight sum stays normalized through repeated updates") {
  ParticleCloud c = make_cloud(
      {{0.1, 0, 0}, {0, 0.7, 0}, {0, 0, -0.8}, {0.3, 0.3, 0.3}},
      {0.25, 0.25, 0.25, 0.25});
  double sum = 0;
  for (int i = 0; i < 20; ++i)
    bayes_update(c, {{0, 0, 1}, 30, 10 + i % 10});
  sum = c.w[0] + c.w[1] + c.w[2] + c.w[3];
  CHECK(std::fabs(sum - 1.0) < 1e-9);
}

TEST_CASE("measure-zero posterior raises") {
  // both particles are z eigenstates; observed counts contradict both
  ParticleCloud c = make_cloud({{0, 0, 1}, {0, 0, 1}}, {0.5, 0.5});
  CHECK_THROWS_AS(bayes_update(c, {{0, 0, 1}, 10, 5}),
                  DegeneratePosteriorError);
}

TEST_CASE("effective sample size") {
  ParticleCloud u = make_cloud({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}},
                               {0.25, 0.25, 0.25, 0.25});
  CHECK(effective_sample_size(u) == doctest::Approx(4.0).epsilon(1e-12));

  ParticleCloud one = make_cloud({{0, 0, 0}, {0, 0, 0}}, {1.0, 0.0});
  CHECK(effective_sample_size(one) == doctest::Approx(1.0).epsilon(1e-12));

  ParticleCloud two =
      make_cloud({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, {0.5, 0.5, 0.0});
  CHECK(effective_sample_size(two) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bayesian mean estimate") {
  ParticleCloud single = make_cloud({{0.3, -0.2, 0.5}}, {1.0});
  const Vec3 m1 = bme(single);
  CHECK(m1.x == 0.3);
  CHECK(m1.y == -0.2);
  CHECK(m1.z == 0.5);

  ParticleCloud anti = make_cloud({{0, 0, 1}, {0, 0, -1}}, {0.5, 0.5});
  CHECK(bme(anti).norm() < 1e-15);

  ParticleCloud skew = make_cloud({{0, 0, 1}, {0, 0, -1}}, {0.25, 0.75});
  CHECK(bme(skew).z == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("weighted covariance") {
  ParticleCloud single = make_cloud({{0.3, -0.2, 0.5}}, {1.0});
  CHECK(weighted_covariance(single).max_abs_diff(Mat3::diagonal({0, 0, 0})) <
        1e-15);

  ParticleCloud anti = make_cloud({{0, 0, 1}, {0, 0, -1}}, {0.5, 0.5});
  CHECK(weighted_covariance(anti).max_abs_diff(Mat3::diagonal({0, 0, 1})) <
        1e-14);

  // permutation invariance
  ParticleCloud a = make_cloud({{0.1, 0.4, -0.3}, {-0.2, 0.0, 0.6}},
                               {0.3, 0.7});
  ParticleCloud b = make_cloud({{-0.2, 0.0, 0.6}, {0.1, 0.4, -0.3}},
                               {0.7, 0.3});
  CHECK(weighted_covariance(a).max_abs_diff(weighted_covariance(b)) < 1e-15);
}

TEST_CASE("credible volume closed form") {
  const double s = 11.345;
  const Mat3 sigma = Mat3::diagonal({4e-4, 4e-4, 4e-4});
  const double vol = credible_volume(sigma, s);
  const double want = (4.0 * std::numbers::pi / 3.0) * std::pow(s, 1.5) *
                      std::sqrt(sigma.det());
  CHECK(vol == doctest::Approx(want).epsilon(1e-14));
  CHECK(vol == doctest::Approx(1.28e-3).epsilon(0.005));

  CHECK(credible_volume(Mat3::diagonal({0, 0, 0}), s) == 0.0);
  // singular but nonzero
  CHECK(credible_volume(Mat3::diagonal({0.1, 0.1, 0}), s) == 0.0);

  // scaling law: 4x covariance -> 8x volume
  const Mat3 big = Mat3::diagonal({1.6e-3, 1.6e-3, 1.6e-3});
  CHECK(credible_volume(big, s) == doctest::Approx(8.0 * vol).epsilon(1e-12));

  // strictly increasing in each eigenvalue
  CHECK(credible_volume(Mat3::diagonal({5e-4, 4e-4, 4e-4}), s) > vol);
}

}  // TEST_SUITE
