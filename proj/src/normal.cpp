#include "aqt/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aqt {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Rational approximations from P. J. Acklam's inverse-normal algorithm,
// used only as the initial guess before Halley refinement.
double icdf_initial(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("normal_icdf: p outside [0, 1]");
  }

  double x = icdf_initial(p);
  // Halley's method; each step roughly cubes the error. exp(x*x/2) stays
  // finite for p above ~1e-308 (|x| < 37.6).
  for (int i = 0; i < 2; ++i) {
    const double err = normal_cdf(x) - p;
    const double u = err * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double sample_standard_normal(Rng& rng) { return normal_icdf(rng.uniform_open()); }

double truncated_normal_sample(const TruncatedNormalSpec& spec, Rng& rng) {
  if (!(spec.lower <= spec.upper))
    throw std::invalid_argument("truncated_normal_sample: lower > upper");
  if (!(spec.stddev >= 0.0))
    throw std::invalid_argument("truncated_normal_sample: negative stddev");

  if (spec.stddev == 0.0 || spec.lower == spec.upper)
    return std::clamp(spec.mean, spec.lower, spec.upper);

  double alpha = (spec.lower - spec.mean) / spec.stddev;
  double beta = (spec.upper - spec.mean) / spec.stddev;

  // Work on the side where the CDF is evaluated away from 1, mirroring the
  // interval if needed, so tail intervals keep full precision.
  const bool mirrored = alpha + beta > 0.0;
  if (mirrored) {
    const double a0 = alpha;
    alpha = -beta;
    beta = -a0;
  }

  const double p_lo = normal_cdf(alpha);
  const double p_hi = normal_cdf(beta);
  const double mass = p_hi - p_lo;
  if (!(mass > 1e-15)) {
    // Interval so deep in a tail that inversion is meaningless; the nearer
    // bound carries essentially all the conditional mass.
    return std::fabs(alpha) <= std::fabs(beta)
               ? (mirrored ? spec.upper : spec.lower)
               : (mirrored ? spec.lower : spec.upper);
  }

  const double u = rng.uniform_open();
  double z = normal_icdf(p_lo + u * mass);
  if (mirrored) z = -z;
  return std::clamp(spec.mean + spec.stddev * z, spec.lower, spec.upper);
}

}  // namespace aqt
