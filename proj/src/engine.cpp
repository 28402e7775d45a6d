#include "aqt/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aqt/bloch.hpp"
#include "aqt/cloud.hpp"
#include "aqt/errors.hpp"
#include "aqt/prior.hpp"
#include "aqt/resampler.hpp"

namespace aqt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const RunConfig& config) {
  if (config.particles < 2)
    throw std::invalid_argument("need at least 2 particles");
  if (config.shots_per_axis < 1)
    throw std::invalid_argument("shots per axis must be >= 1");
  if (config.iterations < 1)
    throw std::invalid_argument("iterations must be >= 1");
  if (!(config.resample_a >= 0.0 && config.resample_a <= 1.0))
    throw std::invalid_argument("resample shrinkage a must lie in [0,1]");
  if (!(config.ess_fraction >= 0.0 && config.ess_fraction <= 1.0))
    throw std::invalid_argument("ESS fraction must lie in [0,1]");
  if (!(config.chi2_s > 0.0))
    throw std::invalid_argument("chi-square quantile must be > 0");
}

double infidelity_to(const Vec3* truth, const Vec3& estimate) {
  if (truth == nullptr) return kNaN;
  Vec3 est = estimate;
  const double n = est.norm();
  if (n > 1.0) est = est * (1.0 / n);  // absorb summation round-off
  return infidelity(bloch_to_density(*truth), bloch_to_density(est));
}

RunResult run_impl(const RunConfig& config, Backend& backend,
                   const Vec3* true_state, bool adaptive) {
  validate(config);
  Rng rng(config.seed);

  RunResult result;
  const long n0 = config.shots_per_axis;
  const Vec3 pauli[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  const OutcomeCounts cx = backend.measure(pauli[0], n0);
  const OutcomeCounts cy = backend.measure(pauli[1], n0);
  const OutcomeCounts cz = backend.measure(pauli[2], n0);
  const GaussianPrior prior = build_prior(cx, cy, cz, config.epsilon);
  ParticleCloud cloud = sample_prior_cloud(
      prior, static_cast<std::size_t>(config.particles), rng);

  long cumulative = 3 * n0;
  Mat3 triad = Mat3::identity();
  Vec3 estimate = bme(cloud);

  IterationRecord rec;
  rec.iteration = 0;
  rec.triad = triad;
  rec.cumulative_shots = cumulative;
  rec.bme = estimate;
  rec.infidelity = infidelity_to(true_state, estimate);
  rec.volume = credible_volume(weighted_covariance(cloud, estimate), config.chi2_s);
  rec.ess = effective_sample_size(cloud);
  rec.resampled = false;
  result.records.push_back(rec);

  const ResampleParams params{config.resample_a};
  const double ess_floor =
      config.ess_fraction * static_cast<double>(config.particles);

  for (long it = 1; it < config.iterations; ++it) {
    if (adaptive) triad = triad_from_estimate(estimate, triad);

    const int first_axis = config.schedule == Schedule::all_three_axes ? 0 : 2;
    try {
      for (int axis = first_axis; axis < 3; ++axis) {
        const OutcomeCounts counts = backend.measure(triad.col(axis), n0);
        bayes_update(cloud, counts);
        cumulative += n0;
      }
    } catch (const DegeneratePosteriorError& err) {
      result.completed = false;
      result.error = err.what();
      return result;
    }

    estimate = bme(cloud);
    const double ess = effective_sample_size(cloud);
    const bool resample = ess < ess_floor;

    rec.iteration = it;
    rec.triad = triad;
    rec.cumulative_shots = cumulative;
    rec.bme = estimate;
    rec.infidelity = infidelity_to(true_state, estimate);
    rec.volume =
        credible_volume(weighted_covariance(cloud, estimate), config.chi2_s);
    rec.ess = ess;
    rec.resampled = resample;
    result.records.push_back(rec);

    if (resample) cloud = liu_west_resample(cloud, params, rng);
  }
  return result;
}

}  // namespace

Mat3 triad_from_estimate(const Vec3& r, const Mat3& previous) {
  const double n = r.norm();
  if (n < 1e-6) return previous;

  const Vec3 u = r * (1.0 / n);
  // Canonical basis vector least aligned with u, then Gram-Schmidt.
  int least = 0;
  double best = std::fabs(u.x);
  if (std::fabs(u.y) < best) {
    least = 1;
    best = std::fabs(u.y);
  }
  if (std::fabs(u.z) < best) least = 2;
  Vec3 e{};
  e[least] = 1.0;

  const Vec3 c1 = (e - u * dot(e, u)).normalized();
  const Vec3 c2 = cross(u, c1);  // completes a right-handed frame

  Mat3 triad;
  triad.set_col(0, c1);
  triad.set_col(1, c2);
  triad.set_col(2, u);
  return triad;
}

RunResult run_adaptive(const RunConfig& config, Backend& backend,
                       const Vec3* true_state) {
  return run_impl(config, backend, true_state, true);
}

RunResult run_static(const RunConfig& config, Backend& backend,
                     const Vec3* true_state) {
  return run_impl(config, backend, true_state, false);
}

}  // namespace aqt
