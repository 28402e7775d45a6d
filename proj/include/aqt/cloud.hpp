#pragma once

#include <cstddef>
#include <vector>

#include "aqt/backend.hpp"
#include "aqt/linalg.hpp"

namespace aqt {

// Weighted particle approximation of the posterior over Bloch vectors,
// stored as parallel arrays. Weights are kept normalized (sum 1); t counts
// Bayesian updates applied.
struct ParticleCloud {
  std::vector<double> x, y, z, w;
  long t = 0;

  std::size_t size() const { return w.size(); }

  void resize(std::size_t k) {
    x.resize(k);
    y.resize(k);
    z.resize(k);
    w.resize(k);
  }

  Vec3 location(std::size_t k) const { return {x[k], y[k], z[k]}; }
};

// n+ ln p + n- ln(1-p) with p the Born probability of the + outcome; the
// multinomial coefficient is constant across particles and omitted. Returns
// -inf when an impossible outcome (p in {0,1} contradicting the counts) was
// observed.
double log_likelihood(const Vec3& r, const OutcomeCounts& counts);

// w_k <- w_k * L_k, renormalized via max-log shift; increments t. Throws
// DegeneratePosteriorError when every positive-weight particle has zero
// likelihood.
void bayes_update(ParticleCloud& cloud, const OutcomeCounts& counts);

// 1 / sum w_k^2 for normalized weights; ranges over [1, K].
double effective_sample_size(const ParticleCloud& cloud);

// Bayesian mean estimate sum_k w_k r_k.
Vec3 bme(const ParticleCloud& cloud);

Mat3 weighted_covariance(const ParticleCloud& cloud);
Mat3 weighted_covariance(const ParticleCloud& cloud, const Vec3& mean);

// Volume of {x : (x-mu)^T Sigma^-1 (x-mu) <= s}: (4pi/3) s^(3/2) sqrt(det).
// Zero for singular Sigma.
double credible_volume(const Mat3& sigma, double s);

}  // namespace aqt
