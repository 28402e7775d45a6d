#pragma once

#include <cstdint>

#include "aqt/backend.hpp"
#include "aqt/engine.hpp"
#include "aqt/linalg.hpp"

namespace aqt {

// SPSA schedules: step a_k = a0 / (k + A)^alpha, perturbation
// c_k = c0 / k^gamma, k = 1, 2, ...
struct SpsaGains {
  double a0 = 0.1;
  double A = 0.0;
  double alpha = 0.602;
  double c0 = 0.2;
  double gamma = 0.101;
};

struct SgqtConfig {
  long iterations = 200;
  long shots_per_step = 50;  // split evenly across the two perturbed probes
  SpsaGains gains;
  std::uint64_t seed = 1;
};

// (sin t cos p, sin t sin p, cos t): the pure state at spherical angles.
Vec3 angles_to_bloch(double theta, double phi);

// n_plus / shots from measuring along the candidate's own axis; an unbiased
// estimate of the fidelity (1 + n.r_true)/2 between the pure candidate and
// the backend's state.
double estimated_fidelity(double theta, double phi, Backend& backend,
                          long shots);

// Self-guided tomography: stochastic ascent of the estimated fidelity over
// the pure-state angles with simultaneous Rademacher perturbations. Records
// the candidate after each step; volume and ESS fields are NaN (there is no
// posterior).
RunResult run_sgqt(const SgqtConfig& config, Backend& backend,
                   const Vec3* true_state = nullptr);

}  // namespace aqt
