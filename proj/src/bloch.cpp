#include "aqt/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aqt/errors.hpp"
#include "aqt/normal.hpp"

namespace aqt {

DensityMatrix bloch_to_density(const Vec3& r) {
  const double n = r.norm();
  if (n > 1.0 + 1e-9)
    throw InvalidStateError("Bloch vector norm " + std::to_string(n) +
                            " exceeds 1");
  DensityMatrix rho;
  rho.m00 = {0.5 * (1.0 + r.z), 0.0};
  rho.m11 = {0.5 * (1.0 - r.z), 0.0};
  rho.m01 = {0.5 * r.x, -0.5 * r.y};
  rho.m10 = {0.5 * r.x, 0.5 * r.y};
  return rho;
}

Vec3 density_to_bloch(const DensityMatrix& rho) {
  const double herm = std::abs(rho.m01 - std::conj(rho.m10));
  if (herm > 1e-12 || std::fabs(rho.m00.imag()) > 1e-12 ||
      std::fabs(rho.m11.imag()) > 1e-12)
    throw InvalidStateError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-12)
    throw InvalidStateError("density matrix trace differs from 1");
  return {2.0 * rho.m10.real(), 2.0 * rho.m10.imag(),
          rho.m00.real() - rho.m11.real()};
}

double born_probability(const Vec3& r, const MeasurementAxis& axis) {
  const double p = std::clamp(0.5 * (1.0 + dot(axis.n, r)), 0.0, 1.0);
  return axis.sign > 0 ? p : 1.0 - p;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double tr_prod = (rho.m00 * sigma.m00 + rho.m01 * sigma.m10 +
                          rho.m10 * sigma.m01 + rho.m11 * sigma.m11)
                             .real();
  const double radicand =
      std::max(0.0, rho.det().real() * sigma.det().real());
  return std::clamp(tr_prod + 2.0 * std::sqrt(radicand), 0.0, 1.0);
}

double infidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::max(0.0, 1.0 - std::sqrt(fidelity(rho, sigma)));
}

double purity(const Vec3& r) { return 0.5 * (1.0 + dot(r, r)); }

Vec3 random_state(StateKind kind, Rng& rng) {
  Vec3 dir;
  double n;
  do {
    dir = {sample_standard_normal(rng), sample_standard_normal(rng),
           sample_standard_normal(rng)};
    n = dir.norm();
  } while (n < 1e-12);
  dir = dir * (1.0 / n);
  if (kind == StateKind::pure) return dir;
  return dir * std::cbrt(rng.uniform());
}

}  // namespace aqt
