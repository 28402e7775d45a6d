#pragma once

#include <complex>

#include "aqt/linalg.hpp"
#include "aqt/rng.hpp"

namespace aqt {

// 2x2 complex density matrix, row-major.
struct DensityMatrix {
  std::complex<double> m00, m01, m10, m11;

  std::complex<double> trace() const { return m00 + m11; }
  std::complex<double> det() const { return m00 * m11 - m01 * m10; }
};

// Measurement along unit vector n; sign selects the +n or -n outcome.
struct MeasurementAxis {
  Vec3 n;
  int sign = +1;
};

enum class StateKind { pure, mixed };

// rho = (I + r.sigma)/2. Rejects ||r|| > 1 + 1e-9.
DensityMatrix bloch_to_density(const Vec3& r);

// r_j = tr(rho sigma_j). Rejects non-Hermitian or trace != 1 input (1e-12).
Vec3 density_to_bloch(const DensityMatrix& rho);

// p(sign) = (1 + sign * n.r) / 2, clamped to [0,1]; p(+) + p(-) == 1 exactly.
double born_probability(const Vec3& r, const MeasurementAxis& axis);

// Squared square-root fidelity, qubit closed form:
//   F = tr(rho sigma) + 2 sqrt(det rho * det sigma), clamped to [0,1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// 1 - sqrt(F). Zero iff the states coincide.
double infidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// tr(rho^2) = (1 + ||r||^2) / 2.
double purity(const Vec3& r);

// pure: uniform on the unit sphere; mixed: uniform in the open unit ball.
Vec3 random_state(StateKind kind, Rng& rng);

}  // namespace aqt
