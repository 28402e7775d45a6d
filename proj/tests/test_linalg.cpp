#include "doctest.h"

#include <cmath>

#include "aqt/linalg.hpp"
#include "aqt/rng.hpp"

using aqt::Mat3;
using aqt::Rng;
using aqt::Vec3;

namespace {

Mat3 random_symmetric(Rng& rng, double scale) {
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      a.m[i][j] = a.m[j][i] = rng.uniform(-scale, scale);
  return a;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("vector basics") {
  const Vec3 a{1, 2, 3};
  const Vec3 b{-2, 0.5, 4};
  CHECK(aqt::dot(a, b) == doctest::Approx(11.0));
  const Vec3 c = aqt::cross(a, b);
  CHECK(aqt::dot(c, a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(aqt::dot(c, b) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(Vec3{3, 4, 0}.norm() == doctest::Approx(5.0));
  CHECK(Vec3{3, 4, 0}.normalized().norm() == doctest::Approx(1.0));
  CHECK(aqt::angle_between({1, 0, 0}, {0, 1, 0}) ==
        doctest::Approx(std::acos(0.0)));
  CHECK(aqt::angle_between({1, 0, 0}, {1, 0, 0}) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("matrix basics") {
  const Mat3 d = Mat3::diagonal({2, 3, 4});
  CHECK(d.det() == doctest::Approx(24.0));
  CHECK(d.trace() == doctest::Approx(9.0));
  const Vec3 v = d * Vec3{1, 1, 1};
  CHECK(v.x == 2.0);
  CHECK(v.z == 4.0);
  const Mat3 p = d * d.transpose();
  CHECK(p.m[0][0] == doctest::Approx(4.0));
  CHECK(Mat3::identity().max_abs_diff(Mat3::identity()) == 0.0);
}

TEST_CASE("eigen of diagonal matrix sorts descending") {
  const aqt::SymEigen3 e = aqt::eigen_sym3(Mat3::diagonal({0.5, 3.0, 1.5}));
  CHECK(e.values.x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.values.y == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(e.values.z == doctest::Approx(0.5).epsilon(1e-12));
  // first column must be (up to sign) the y axis
  CHECK(std::fabs(e.vectors.col(0).y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigen reconstructs random symmetric matrices") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat3 a = random_symmetric(rng, 2.0);
    const aqt::SymEigen3 e = aqt::eigen_sym3(a);

    CHECK(e.values.x >= e.values.y);
    CHECK(e.values.y >= e.values.z);

    const Mat3 vt_v = e.vectors.transpose() * e.vectors;
    CHECK(vt_v.max_abs_diff(Mat3::identity()) < 1e-12);

    const Mat3 rebuilt =
        e.vectors * Mat3::diagonal(e.values) * e.vectors.transpose();
    CHECK(rebuilt.max_abs_diff(a) < 1e-10);

    for (int k = 0; k < 3; ++k) {
      const Vec3 av = a * e.vectors.col(k);
      const Vec3 lv = e.vectors.col(k) * e.values[k];
      CHECK((av - lv).norm() < 1e-10);
    }
  }
}

TEST_CASE("eigen floor clamps round-off negatives") {
  // rank-1 outer product: exact eigenvalues {1.5, 0, 0}
  Mat3 a;
  const Vec3 u{1.0, 0.5, -0.5};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.m[i][j] = u[i] * u[j];
  const aqt::SymEigen3 e = aqt::eigen_sym3(a, 0.0);
  CHECK(e.values.x == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(e.values.y >= 0.0);
  CHECK(e.values.z >= 0.0);
  CHECK(e.values.y < 1e-12);
}

TEST_CASE("eigen handles the zero matrix") {
  const aqt::SymEigen3 e = aqt::eigen_sym3(Mat3{}, 0.0);
  CHECK(e.values.x == 0.0);
  CHECK(e.values.z == 0.0);
  CHECK(e.vectors.max_abs_diff(Mat3::identity()) == 0.0);
}

}  // TEST_SUITE
