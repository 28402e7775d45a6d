#pragma once

#include "aqt/cloud.hpp"
#include "aqt/linalg.hpp"
#include "aqt/rng.hpp"

namespace aqt {

// Liu-West shrinkage parameter; h^2 scales the spread of the rejuvenation
// noise so the first two posterior moments are preserved.
struct ResampleParams {
  double a = 0.1;

  double h() const { return std::sqrt(std::max(0.0, 1.0 - a * a)); }
};

// One point in the unit ball, distributed as N(mean, V diag(sigma^2) V^T)
// constrained by sequential per-axis truncated normals: in the frame of V
// (columns = principal axes, widest first), each coordinate tau_j is drawn
// from TN(mean_j, sigma_j) on +-sqrt(1 - sum_{l<j} tau_l^2). Every return
// value satisfies ||r|| <= 1 with no projection step.
Vec3 constrained_gaussian_draw(const Mat3& V, const Vec3& sigma,
                               const Vec3& mean, Rng& rng);

// Liu-West resampling with in-ball rejuvenation. Each output particle picks
// an ancestor with probability w_k, shrinks it toward the cloud mean by a,
// and adds constrained noise with covariance h^2 Cov. Output weights are
// uniform 1/K; `count` overrides the output size (default: input size).
ParticleCloud liu_west_resample(const ParticleCloud& cloud,
                                const ResampleParams& params, Rng& rng,
                                std::size_t count = 0);

// Comparison oracle: same ancestor/shrinkage step but unconstrained Gaussian
// noise, then radial projection of any draw that left the ball. Reports the
// number of raw draws with ||r|| > 1 through `invalid_raw`. Not a production
// path; it exhibits the boundary pile-up the constrained sampler avoids.
ParticleCloud clip_project_resample(const ParticleCloud& cloud,
                                    const ResampleParams& params, Rng& rng,
                                    long* invalid_raw = nullptr,
                                    std::size_t count = 0);

}  // namespace aqt
