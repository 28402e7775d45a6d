#include "aqt/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "aqt/errors.hpp"
#include "aqt/kernels.hpp"

namespace aqt {

double log_likelihood(const Vec3& r, const OutcomeCounts& counts) {
  const double t = std::clamp(dot(counts.axis, r), -1.0, 1.0);
  const double p = 0.5 * (1.0 + t);
  double acc = 0.0;
  if (counts.n_plus > 0) acc += static_cast<double>(counts.n_plus) * std::log(p);
  if (counts.n_minus() > 0)
    acc += static_cast<double>(counts.n_minus()) * std::log(1.0 - p);
  return acc;
}

void bayes_update(ParticleCloud& cloud, const OutcomeCounts& counts) {
  const std::size_t n = cloud.size();
  const kernels::Ops& ops = kernels::active();

  thread_local std::vector<double> proj, delta;
  proj.resize(n);
  delta.resize(n);

  ops.axis_projection(cloud.x.data(), cloud.y.data(), cloud.z.data(), n,
                      counts.axis.x, counts.axis.y, counts.axis.z, proj.data());
  ops.binomial_loglike(proj.data(), n, static_cast<double>(counts.n_plus),
                       static_cast<double>(counts.n_minus()), delta.data());

  const double shift = ops.masked_max(delta.data(), cloud.w.data(), n);
  if (!std::isfinite(shift))
    throw DegeneratePosteriorError(
        "all particles have zero likelihood at update " +
        std::to_string(cloud.t + 1));

  const double total = ops.exp_weight_update(cloud.w.data(), delta.data(), shift, n);
  if (!(total > 0.0))
    throw DegeneratePosteriorError(
        "posterior weight mass vanished at update " +
        std::to_string(cloud.t + 1));

  ops.scale(cloud.w.data(), 1.0 / total, n);
  ++cloud.t;
}

double effective_sample_size(const ParticleCloud& cloud) {
  const double ss =
      kernels::active().sum_squares(cloud.w.data(), cloud.size());
  return ss > 0.0 ? 1.0 / ss : 0.0;
}

Vec3 bme(const ParticleCloud& cloud) {
  double m[3];
  kernels::active().weighted_mean3(cloud.x.data(), cloud.y.data(),
                                   cloud.z.data(), cloud.w.data(), cloud.size(),
                                   m);
  return {m[0], m[1], m[2]};
}

Mat3 weighted_covariance(const ParticleCloud& cloud) {
  return weighted_covariance(cloud, bme(cloud));
}

Mat3 weighted_covariance(const ParticleCloud& cloud, const Vec3& mean) {
  const double mu[3] = {mean.x, mean.y, mean.z};
  double c[6];
  kernels::active().weighted_cov3(cloud.x.data(), cloud.y.data(),
                                  cloud.z.data(), cloud.w.data(), cloud.size(),
                                  mu, c);
  Mat3 out;
  out.m[0][0] = c[0];
  out.m[1][1] = c[1];
  out.m[2][2] = c[2];
  out.m[0][1] = out.m[1][0] = c[3];
  out.m[0][2] = out.m[2][0] = c[4];
  out.m[1][2] = out.m[2][1] = c[5];
  return out;
}

double credible_volume(const Mat3& sigma, double s) {
  const double d = sigma.det();
  if (!(d > 0.0)) return 0.0;
  return (4.0 * std::numbers::pi / 3.0) * std::pow(s, 1.5) * std::sqrt(d);
}

}  // namespace aqt
