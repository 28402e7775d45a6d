#pragma once

#include "aqt/backend.hpp"
#include "aqt/cloud.hpp"
#include "aqt/linalg.hpp"
#include "aqt/rng.hpp"

namespace aqt {

// Empirical Gaussian prior N(mean, diag(variance)) built from one round of
// Pauli-axis counts. `mean` is projected onto the sphere when the raw
// per-axis estimate lands outside the ball; `raw_mean` keeps the
// unprojected estimate (the right center for coverage checks, since
// projection biases it).
struct GaussianPrior {
  Vec3 mean;
  Vec3 raw_mean;
  Vec3 variance;  // Sigma_jj including the epsilon floor
  double epsilon = 1e-4;
  long shots_per_axis = 0;
};

// r_hat_j = (n+ - n-)/N0 per axis;
// Sigma_jj = [n+ (1 - r_hat)^2 + n- (-1 - r_hat)^2] / (N0 (N0 - 1)) + eps.
// Requires all three counts on the Pauli axes with a common N0 >= 2.
GaussianPrior build_prior(const OutcomeCounts& counts_x,
                          const OutcomeCounts& counts_y,
                          const OutcomeCounts& counts_z, double epsilon = 1e-4);

// Per-axis diameters 2 sqrt(s Sigma_jj) of the chi-square(3) ellipsoid.
Vec3 ellipsoid_diameters(const GaussianPrior& prior, double s);

// Volume of the s-quantile ellipsoid of the prior.
double prior_volume(const GaussianPrior& prior, double s);

// Squared Mahalanobis distance of r from the raw (unprojected) center.
double prior_mahalanobis2(const GaussianPrior& prior, const Vec3& r);

// K particles with uniform weights, drawn from the prior constrained to the
// unit ball via the same sequential truncated-normal scheme the resampler
// uses.
ParticleCloud sample_prior_cloud(const GaussianPrior& prior, std::size_t count,
                                 Rng& rng);

}  // namespace aqt
