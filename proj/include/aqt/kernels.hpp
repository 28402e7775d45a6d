#pragma once

// Batched primitives over particle arrays (structure-of-arrays layout).
// A scalar reference implementation always exists; an AVX2+FMA variant is
// compiled on x86-64 and selected at runtime when the CPU supports it.
// Variants agree to floating-point tolerance, not bit-exactly: SIMD sums
// associate differently and the vector log/exp are polynomial kernels.

#include <cstddef>

namespace aqt::kernels {

struct Ops {
  const char* name;

  // out[i] = ax*x[i] + ay*y[i] + az*z[i]
  void (*axis_projection)(const double* x, const double* y, const double* z,
                          std::size_t n, double ax, double ay, double az,
                          double* out);

  // out[i] = n_plus*log(p) + n_minus*log(1-p) with p = (1 + clamp(proj[i]))/2.
  // Terms with a zero count are dropped; log(0) contributes -infinity.
  void (*binomial_loglike)(const double* proj, std::size_t n, double n_plus,
                           double n_minus, double* out);

  // max of v[i] over entries with w[i] > 0; -infinity when none qualify.
  double (*masked_max)(const double* v, const double* w, std::size_t n);

  // w[i] *= exp(delta[i] - shift); returns the updated sum of w.
  double (*exp_weight_update)(double* w, const double* delta, double shift,
                              std::size_t n);

  void (*scale)(double* v, double s, std::size_t n);
  double (*sum)(const double* v, std::size_t n);
  double (*sum_squares)(const double* v, std::size_t n);

  // out = { sum w*x, sum w*y, sum w*z }
  void (*weighted_mean3)(const double* x, const double* y, const double* z,
                         const double* w, std::size_t n, double out[3]);

  // Centered second moments around `mean`:
  // out = { xx, yy, zz, xy, xz, yz } with e.g. xy = sum w*(x-mx)*(y-my).
  void (*weighted_cov3)(const double* x, const double* y, const double* z,
                        const double* w, std::size_t n, const double mean[3],
                        double out[6]);

  // out[i] = a*x[i] + b
  void (*axpb)(const double* x, double a, double b, double* out, std::size_t n);
};

enum class Variant { scalar, avx2 };

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when not compiled in
bool cpu_supports_avx2();

/// The runtime-selected implementation (AVX2 when available, else scalar).
const Ops& active();

/// Force a specific variant; returns false (and leaves the selection alone)
/// when that variant is unavailable on this build/CPU.
bool set_active(Variant v);
Variant active_variant();

}  // namespace aqt::kernels
