#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aqt/backend.hpp"
#include "aqt/linalg.hpp"

namespace aqt {

enum class Schedule { all_three_axes, diagonal_only };

struct RunConfig {
  long particles = 1000;     // K
  long shots_per_axis = 50;  // N0, also the prior round's per-axis budget
  long iterations = 60;      // total including the prior stage (iteration 0)
  double resample_a = 0.1;
  double ess_fraction = 0.5;  // resample when ESS < fraction * K
  Schedule schedule = Schedule::all_three_axes;
  double epsilon = 1e-4;
  double chi2_s = 11.345;  // 99% quantile, 3 dof
  std::uint64_t seed = 1;
};

struct IterationRecord {
  long iteration = 0;
  Mat3 triad;  // columns are the measured axes; third diagonalizes
  long cumulative_shots = 0;
  Vec3 bme;
  double infidelity = 0;  // NaN when the true state is unknown
  double volume = 0;      // NaN for methods without a posterior
  double ess = 0;
  bool resampled = false;
};

struct RunResult {
  std::vector<IterationRecord> records;
  bool completed = true;
  std::string error;  // set when completed is false
};

// Right-handed orthonormal triad whose third column is r/||r||; the other
// two columns complete the frame deterministically. Returns `previous`
// unchanged when ||r|| < 1e-6.
Mat3 triad_from_estimate(const Vec3& r, const Mat3& previous);

// Full tomography loop: iteration 0 measures N0 shots on each Pauli axis,
// builds the Gaussian prior and samples the particle cloud; every later
// iteration measures per the schedule in the current triad, applies the
// Bayesian update per axis batch, resamples when ESS drops below the
// threshold, and re-aims the triad at the current mean estimate.
// A degenerate posterior stops the run early with the records so far and
// completed = false; backend errors propagate.
RunResult run_adaptive(const RunConfig& config, Backend& backend,
                       const Vec3* true_state = nullptr);

// Same pipeline with the triad pinned to the Pauli axes throughout.
RunResult run_static(const RunConfig& config, Backend& backend,
                     const Vec3* true_state = nullptr);

}  // namespace aqt
