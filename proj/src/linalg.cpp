#include "aqt/linalg.hpp"

#include <algorithm>
#include <array>

namespace aqt {

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

// Cyclic Jacobi on the 3x3 symmetric case. Converges to machine precision in
// a handful of sweeps; 32 is a hard cap that is never reached in practice.
SymEigen3 eigen_sym3(const Mat3& input, double floor) {
  double a[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = 0.5 * (input.m[i][j] + input.m[j][i]);

  Mat3 v = Mat3::identity();
  const double scale = std::fmax(1.0, std::fabs(a[0][0]) + std::fabs(a[1][1]) + std::fabs(a[2][2]));

  for (int sweep = 0; sweep < 32; ++sweep) {
    const double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
    if (off <= 1e-300 || off <= 1e-16 * scale) break;

    static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pair : kPairs) {
      const int p = pair[0];
      const int q = pair[1];
      if (std::fabs(a[p][q]) <= 1e-300) continue;

      const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;

      for (int k = 0; k < 3; ++k) {
        const double akp = a[k][p];
        const double akq = a[k][q];
        a[k][p] = c * akp - s * akq;
        a[k][q] = s * akp + c * akq;
      }
      for (int k = 0; k < 3; ++k) {
        const double apk = a[p][k];
        const double aqk = a[q][k];
        a[p][k] = c * apk - s * aqk;
        a[q][k] = s * apk + c * aqk;
      }
      for (int k = 0; k < 3; ++k) {
        const double vkp = v.m[k][p];
        const double vkq = v.m[k][q];
        v.m[k][p] = c * vkp - s * vkq;
        v.m[k][q] = s * vkp + c * vkq;
      }
    }
  }

  std::array<int, 3> order = {0, 1, 2};
  const Vec3 raw = {a[0][0], a[1][1], a[2][2]};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return raw[i] > raw[j]; });

  SymEigen3 out;
  for (int j = 0; j < 3; ++j) {
    out.values[j] = std::fmax(raw[order[j]], floor);
    out.vectors.set_col(j, v.col(order[j]));
  }
  return out;
}

}  // namespace aqt
