#include "aqt/sgqt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "aqt/bloch.hpp"

namespace aqt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fold theta back into [0, pi] (reflecting through the pole flips phi) and
// phi into [0, 2pi).
void normalize_angles(double& theta, double& phi) {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  if (theta > std::numbers::pi) {
    theta = kTwoPi - theta;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
}

}  // namespace

Vec3 angles_to_bloch(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

double estimated_fidelity(double theta, double phi, Backend& backend,
                          long shots) {
  const OutcomeCounts counts = backend.measure(angles_to_bloch(theta, phi), shots);
  return static_cast<double>(counts.n_plus) / static_cast<double>(counts.shots);
}

RunResult run_sgqt(const SgqtConfig& config, Backend& backend,
                   const Vec3* true_state) {
  if (config.iterations < 1)
    throw std::invalid_argument("iterations must be >= 1");
  if (config.shots_per_step < 2)
    throw std::invalid_argument("need at least 2 shots per step");
  const SpsaGains& g = config.gains;
  if (!(g.alpha > 0.5 && g.alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0.5, 1]");
  if (!(g.gamma > 0.0 && g.gamma <= 0.5))
    throw std::invalid_argument("gamma must lie in (0, 0.5]");
  if (!(g.a0 >= 0.0 && g.c0 > 0.0))
    throw std::invalid_argument("gains must be nonnegative, c0 positive");

  Rng rng(config.seed);
  const Vec3 start = random_state(StateKind::pure, rng);
  double theta = std::acos(std::clamp(start.z, -1.0, 1.0));
  double phi = std::atan2(start.y, start.x);
  normalize_angles(theta, phi);

  RunResult result;
  long cumulative = 0;
  const long probe_a = config.shots_per_step / 2;
  const long probe_b = config.shots_per_step - probe_a;

  for (long k = 1; k <= config.iterations; ++k) {
    const double ck = g.c0 / std::pow(static_cast<double>(k), g.gamma);
    const double ak =
        g.a0 / std::pow(static_cast<double>(k) + g.A, g.alpha);
    const double d_theta = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double d_phi = rng.bernoulli(0.5) ? 1.0 : -1.0;

    const double f_plus = estimated_fidelity(theta + ck * d_theta,
                                             phi + ck * d_phi, backend, probe_a);
    const double f_minus = estimated_fidelity(theta - ck * d_theta,
                                              phi - ck * d_phi, backend, probe_b);
    const double gain = (f_plus - f_minus) / (2.0 * ck);
    theta += ak * gain * d_theta;
    phi += ak * gain * d_phi;
    normalize_angles(theta, phi);
    cumulative += config.shots_per_step;

    IterationRecord rec;
    rec.iteration = k;
    rec.triad = Mat3::identity();
    rec.cumulative_shots = cumulative;
    rec.bme = angles_to_bloch(theta, phi);
    rec.infidelity =
        true_state == nullptr
            ? kNaN
            : infidelity(bloch_to_density(*true_state),
                         bloch_to_density(rec.bme));
    rec.volume = kNaN;
    rec.ess = kNaN;
    rec.resampled = false;
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace aqt
