// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers must check cpu_supports_avx2() first (the dispatcher
// in kernels.cpp does). Tail elements fall through to the scalar reference
// so only full 4-lane blocks take the vector path.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "aqt/kernels.hpp"

namespace aqt::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// log(x) for positive normal doubles. x == 0 maps to -inf, x < 0 to NaN;
// denormals also flush to -inf (cannot arise from clamped projections).
// Decomposes x = 2^e * m with m in [sqrt(1/2), sqrt(2)) and evaluates
// 2*atanh((m-1)/(m+1)) as an odd series; worst-case error ~4e-14 relative.
inline __m256d vlog(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);

  const __m256d tiny_mask = _mm256_cmp_pd(x, _mm256_set1_pd(DBL_MIN), _CMP_LT_OQ);
  const __m256d neg_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);

  const __m256i ix = _mm256_castpd_si256(x);
  __m256i exp_bits = _mm256_and_si256(_mm256_srli_epi64(ix, 52),
                                      _mm256_set1_epi64x(0x7FF));
  // int64 -> double for small nonnegative values via the 2^52 bias trick.
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(exp_bits, magic)),
      _mm256_set1_pd(4503599627370496.0));
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(ix, mant_mask), one_bits));

  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d big = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, half), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, one));

  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);

  __m256d poly = _mm256_set1_pd(1.0 / 15.0);
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 3.0));
  poly = _mm256_fmadd_pd(poly, s2, one);
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), poly);

  // ln2 split so e*ln2_hi is exact for |e| < 2^32.
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  __m256d result =
      _mm256_add_pd(_mm256_mul_pd(e, ln2_hi), _mm256_fmadd_pd(e, ln2_lo, log_m));

  result = _mm256_blendv_pd(result,
                            _mm256_set1_pd(-std::numeric_limits<double>::infinity()),
                            tiny_mask);
  result = _mm256_blendv_pd(result,
                            _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN()),
                            neg_mask);
  return result;
}

// exp(x) with the usual 2^n * exp(r) reduction, |r| <= ln2/2, Taylor to
// r^13; error is a couple of ulp. Underflows (x < -708.4, including -inf)
// return 0, overflows return +inf.
inline __m256d vexp(__m256d x) {
  const __m256d under = _mm256_cmp_pd(x, _mm256_set1_pd(-708.4), _CMP_LT_OQ);
  const __m256d over = _mm256_cmp_pd(x, _mm256_set1_pd(709.78), _CMP_GT_OQ);
  // Clamp before reduction so masked lanes cannot poison 2^n.
  __m256d xc = _mm256_max_pd(x, _mm256_set1_pd(-708.4));
  xc = _mm256_min_pd(xc, _mm256_set1_pd(709.78));

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);

  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-06);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256d pow2 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52));
  __m256d result = _mm256_mul_pd(p, pow2);

  result = _mm256_andnot_pd(under, result);  // underflow -> +0
  result = _mm256_blendv_pd(result,
                            _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                            over);
  return result;
}

// Scalar tail helpers mirroring kernels_scalar.cpp semantics.
double loglike_tail(double proj, double n_plus, double n_minus) {
  const double t = std::clamp(proj, -1.0, 1.0);
  const double p = 0.5 * (1.0 + t);
  double acc = 0.0;
  if (n_plus > 0.0) acc += n_plus * std::log(p);
  if (n_minus > 0.0) acc += n_minus * std::log(1.0 - p);
  return acc;
}

void axis_projection_avx2(const double* x, const double* y, const double* z,
                          std::size_t n, double ax, double ay, double az,
                          double* out) {
  const __m256d vax = _mm256_set1_pd(ax);
  const __m256d vay = _mm256_set1_pd(ay);
  const __m256d vaz = _mm256_set1_pd(az);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(vax, _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(vay, _mm256_loadu_pd(y + i), acc);
    acc = _mm256_fmadd_pd(vaz, _mm256_loadu_pd(z + i), acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = ax * x[i] + ay * y[i] + az * z[i];
}

void binomial_loglike_avx2(const double* proj, std::size_t n, double n_plus,
                           double n_minus, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg_one = _mm256_set1_pd(-1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d vnp = _mm256_set1_pd(n_plus);
  const __m256d vnm = _mm256_set1_pd(n_minus);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_loadu_pd(proj + i);
    t = _mm256_min_pd(_mm256_max_pd(t, neg_one), one);
    const __m256d p = _mm256_mul_pd(half, _mm256_add_pd(one, t));
    __m256d acc = _mm256_setzero_pd();
    if (n_plus > 0.0) acc = _mm256_mul_pd(vnp, vlog(p));
    if (n_minus > 0.0)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(vnm, vlog(_mm256_sub_pd(one, p))));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = loglike_tail(proj[i], n_plus, n_minus);
}

double masked_max_avx2(const double* v, const double* w, std::size_t n) {
  const __m256d neg_inf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d best = neg_inf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(w + i), _mm256_setzero_pd(),
                                       _CMP_GT_OQ);
    best = _mm256_max_pd(best, _mm256_blendv_pd(neg_inf, _mm256_loadu_pd(v + i), mask));
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, best);
  double out = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i)
    if (w[i] > 0.0 && v[i] > out) out = v[i];
  return out;
}

double exp_weight_update_avx2(double* w, const double* delta, double shift,
                              std::size_t n) {
  const __m256d vshift = _mm256_set1_pd(shift);
  __m256d total = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d f = vexp(_mm256_sub_pd(_mm256_loadu_pd(delta + i), vshift));
    const __m256d updated = _mm256_mul_pd(_mm256_loadu_pd(w + i), f);
    _mm256_storeu_pd(w + i, updated);
    total = _mm256_add_pd(total, updated);
  }
  double out = hsum(total);
  for (; i < n; ++i) {
    w[i] *= std::exp(delta[i] - shift);
    out += w[i];
  }
  return out;
}

void scale_avx2(double* v, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), vs));
  for (; i < n; ++i) v[i] *= s;
}

double sum_avx2(const double* v, std::size_t n) {
  __m256d total = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) total = _mm256_add_pd(total, _mm256_loadu_pd(v + i));
  double out = hsum(total);
  for (; i < n; ++i) out += v[i];
  return out;
}

double sum_squares_avx2(const double* v, std::size_t n) {
  __m256d total = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(v + i);
    total = _mm256_fmadd_pd(a, a, total);
  }
  double out = hsum(total);
  for (; i < n; ++i) out += v[i] * v[i];
  return out;
}

void weighted_mean3_avx2(const double* x, const double* y, const double* z,
                         const double* w, std::size_t n, double out[3]) {
  __m256d sx = _mm256_setzero_pd();
  __m256d sy = _mm256_setzero_pd();
  __m256d sz = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    sx = _mm256_fmadd_pd(vw, _mm256_loadu_pd(x + i), sx);
    sy = _mm256_fmadd_pd(vw, _mm256_loadu_pd(y + i), sy);
    sz = _mm256_fmadd_pd(vw, _mm256_loadu_pd(z + i), sz);
  }
  out[0] = hsum(sx);
  out[1] = hsum(sy);
  out[2] = hsum(sz);
  for (; i < n; ++i) {
    out[0] += w[i] * x[i];
    out[1] += w[i] * y[i];
    out[2] += w[i] * z[i];
  }
}

void weighted_cov3_avx2(const double* x, const double* y, const double* z,
                        const double* w, std::size_t n, const double mean[3],
                        double out[6]) {
  const __m256d mx = _mm256_set1_pd(mean[0]);
  const __m256d my = _mm256_set1_pd(mean[1]);
  const __m256d mz = _mm256_set1_pd(mean[2]);
  __m256d xx = _mm256_setzero_pd(), yy = xx, zz = xx, xy = xx, xz = xx, yz = xx;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), mx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), my);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(z + i), mz);
    const __m256d wdx = _mm256_mul_pd(vw, dx);
    const __m256d wdy = _mm256_mul_pd(vw, dy);
    xx = _mm256_fmadd_pd(wdx, dx, xx);
    yy = _mm256_fmadd_pd(wdy, dy, yy);
    zz = _mm256_fmadd_pd(_mm256_mul_pd(vw, dz), dz, zz);
    xy = _mm256_fmadd_pd(wdx, dy, xy);
    xz = _mm256_fmadd_pd(wdx, dz, xz);
    yz = _mm256_fmadd_pd(wdy, dz, yz);
  }
  out[0] = hsum(xx);
  out[1] = hsum(yy);
  out[2] = hsum(zz);
  out[3] = hsum(xy);
  out[4] = hsum(xz);
  out[5] = hsum(yz);
  for (; i < n; ++i) {
    const double dx = x[i] - mean[0];
    const double dy = y[i] - mean[1];
    const double dz = z[i] - mean[2];
    out[0] += w[i] * dx * dx;
    out[1] += w[i] * dy * dy;
    out[2] += w[i] * dz * dz;
    out[3] += w[i] * dx * dy;
    out[4] += w[i] * dx * dz;
    out[5] += w[i] * dy * dz;
  }
}

void axpb_avx2(const double* x, double a, double b, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vb));
  for (; i < n; ++i) out[i] = a * x[i] + b;
}

}  // namespace

const Ops* avx2_ops_table() {
  static const Ops ops = {
      "avx2",
      axis_projection_avx2,
      binomial_loglike_avx2,
      masked_max_avx2,
      exp_weight_update_avx2,
      scale_avx2,
      sum_avx2,
      sum_squares_avx2,
      weighted_mean3_avx2,
      weighted_cov3_avx2,
      axpb_avx2,
  };
  return &ops;
}

}  // namespace aqt::kernels

#endif  // x86-64
