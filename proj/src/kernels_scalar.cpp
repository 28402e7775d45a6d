#include <algorithm>
#include <cmath>
#include <limits>

#include "aqt/kernels.hpp"

// Reference implementations. These define the semantics the SIMD variants
// are tested against.

namespace aqt::kernels {

namespace {

void axis_projection_scalar(const double* x, const double* y, const double* z,
                            std::size_t n, double ax, double ay, double az,
                            double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ax * x[i] + ay * y[i] + az * z[i];
}

void binomial_loglike_scalar(const double* proj, std::size_t n, double n_plus,
                             double n_minus, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::clamp(proj[i], -1.0, 1.0);
    const double p = 0.5 * (1.0 + t);
    double acc = 0.0;
    if (n_plus > 0.0) acc += n_plus * std::log(p);
    if (n_minus > 0.0) acc += n_minus * std::log(1.0 - p);
    out[i] = acc;
  }
}

double masked_max_scalar(const double* v, const double* w, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] > 0.0 && v[i] > best) best = v[i];
  return best;
}

double exp_weight_update_scalar(double* w, const double* delta, double shift,
                                std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] *= std::exp(delta[i] - shift);
    total += w[i];
  }
  return total;
}

void scale_scalar(double* v, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v[i] *= s;
}

double sum_scalar(const double* v, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += v[i];
  return total;
}

double sum_squares_scalar(const double* v, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += v[i] * v[i];
  return total;
}

void weighted_mean3_scalar(const double* x, const double* y, const double* z,
                           const double* w, std::size_t n, double out[3]) {
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sz += w[i] * z[i];
  }
  out[0] = sx;
  out[1] = sy;
  out[2] = sz;
}

void weighted_cov3_scalar(const double* x, const double* y, const double* z,
                          const double* w, std::size_t n, const double mean[3],
                          double out[6]) {
  double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean[0];
    const double dy = y[i] - mean[1];
    const double dz = z[i] - mean[2];
    xx += w[i] * dx * dx;
    yy += w[i] * dy * dy;
    zz += w[i] * dz * dz;
    xy += w[i] * dx * dy;
    xz += w[i] * dx * dz;
    yz += w[i] * dy * dz;
  }
  out[0] = xx;
  out[1] = yy;
  out[2] = zz;
  out[3] = xy;
  out[4] = xz;
  out[5] = yz;
}

void axpb_scalar(const double* x, double a, double b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",
      axis_projection_scalar,
      binomial_loglike_scalar,
      masked_max_scalar,
      exp_weight_update_scalar,
      scale_scalar,
      sum_scalar,
      sum_squares_scalar,
      weighted_mean3_scalar,
      weighted_cov3_scalar,
      axpb_scalar,
  };
  return ops;
}

}  // namespace aqt::kernels
