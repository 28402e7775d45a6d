#include "aqt/prior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aqt/resampler.hpp"

namespace aqt {

namespace {

void check_axis(const OutcomeCounts& counts, const Vec3& expected,
                const char* name) {
  if ((counts.axis - expected).norm() > 1e-9)
    throw std::invalid_argument(std::string("prior counts for the ") + name +
                                " axis were measured on a different axis");
}

double axis_variance(const OutcomeCounts& counts, double r_hat) {
  const double np = static_cast<double>(counts.n_plus);
  const double nm = static_cast<double>(counts.n_minus());
  const double n0 = static_cast<double>(counts.shots);
  const double dev_plus = 1.0 - r_hat;
  const double dev_minus = -1.0 - r_hat;
  return (np * dev_plus * dev_plus + nm * dev_minus * dev_minus) /
         (n0 * (n0 - 1.0));
}

}  // namespace

GaussianPrior build_prior(const OutcomeCounts& counts_x,
                          const OutcomeCounts& counts_y,
                          const OutcomeCounts& counts_z, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (counts_x.shots < 2)
    throw std::invalid_argument("prior needs at least 2 shots per axis");
  if (counts_y.shots != counts_x.shots || counts_z.shots != counts_x.shots)
    throw std::invalid_argument("prior counts must share one shot budget");
  check_axis(counts_x, {1, 0, 0}, "x");
  check_axis(counts_y, {0, 1, 0}, "y");
  check_axis(counts_z, {0, 0, 1}, "z");

  GaussianPrior prior;
  prior.epsilon = epsilon;
  prior.shots_per_axis = counts_x.shots;

  const OutcomeCounts* counts[3] = {&counts_x, &counts_y, &counts_z};
  for (int j = 0; j < 3; ++j) {
    const double r_hat =
        static_cast<double>(counts[j]->n_plus - counts[j]->n_minus()) /
        static_cast<double>(counts[j]->shots);
    prior.raw_mean[j] = r_hat;
    prior.variance[j] = axis_variance(*counts[j], r_hat) + epsilon;
  }

  prior.mean = prior.raw_mean;
  if (prior.mean.norm() > 1.0) prior.mean = prior.mean.normalized();
  return prior;
}

Vec3 ellipsoid_diameters(const GaussianPrior& prior, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("chi-square quantile must be > 0");
  return {2.0 * std::sqrt(s * prior.variance.x),
          2.0 * std::sqrt(s * prior.variance.y),
          2.0 * std::sqrt(s * prior.variance.z)};
}

double prior_volume(const GaussianPrior& prior, double s) {
  return credible_volume(Mat3::diagonal(prior.variance), s);
}

double prior_mahalanobis2(const GaussianPrior& prior, const Vec3& r) {
  const Vec3 d = r - prior.raw_mean;
  return d.x * d.x / prior.variance.x + d.y * d.y / prior.variance.y +
         d.z * d.z / prior.variance.z;
}

ParticleCloud sample_prior_cloud(const GaussianPrior& prior, std::size_t count,
                                 Rng& rng) {
  if (count == 0) throw std::invalid_argument("cloud size must be >= 1");

  const SymEigen3 eig = eigen_sym3(Mat3::diagonal(prior.variance), 0.0);
  const Vec3 sigma{std::sqrt(eig.values.x), std::sqrt(eig.values.y),
                   std::sqrt(eig.values.z)};

  ParticleCloud cloud;
  cloud.resize(count);
  const double w_uniform = 1.0 / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Vec3 p = constrained_gaussian_draw(eig.vectors, sigma, prior.mean, rng);
    cloud.x[k] = p.x;
    cloud.y[k] = p.y;
    cloud.z[k] = p.z;
    cloud.w[k] = w_uniform;
  }
  return cloud;
}

}  // namespace aqt
