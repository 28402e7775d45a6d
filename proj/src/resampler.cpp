#include "aqt/resampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqt/normal.hpp"

namespace aqt {

namespace {

// Inverse-CDF ancestor lookup table over the cumulative weights.
struct AncestorTable {
  std::vector<double> cumulative;

  explicit AncestorTable(const std::vector<double>& w) {
    cumulative.resize(w.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      cumulative[i] = acc;
    }
    cumulative.back() = 1.0;  // absorb normalization round-off
  }

  std::size_t pick(double u) const {
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return it == cumulative.end() ? cumulative.size() - 1
                                  : static_cast<std::size_t>(it - cumulative.begin());
  }
};

struct MomentFrame {
  Vec3 mean;
  Mat3 axes;    // principal axes of h^2 Cov, columns, widest first
  Vec3 sigma;   // per-axis standard deviations
};

MomentFrame shrinkage_frame(const ParticleCloud& cloud,
                            const ResampleParams& params) {
  MomentFrame f;
  f.mean = bme(cloud);
  const double h = params.h();
  const SymEigen3 eig =
      eigen_sym3(weighted_covariance(cloud, f.mean) * (h * h), 0.0);
  f.axes = eig.vectors;
  f.sigma = {std::sqrt(eig.values.x), std::sqrt(eig.values.y),
             std::sqrt(eig.values.z)};
  return f;
}

}  // namespace

Vec3 constrained_gaussian_draw(const Mat3& V, const Vec3& sigma,
                               const Vec3& mean, Rng& rng) {
  const Vec3 mu = V.transpose() * mean;
  Vec3 tau;
  double budget = 1.0;
  for (int j = 0; j < 3; ++j) {
    const double bound = std::sqrt(std::max(0.0, budget));
    tau[j] = truncated_normal_sample({mu[j], sigma[j], -bound, bound}, rng);
    budget -= tau[j] * tau[j];
  }
  return V * tau;
}

ParticleCloud liu_west_resample(const ParticleCloud& cloud,
                                const ResampleParams& params, Rng& rng,
                                std::size_t count) {
  if (!(params.a >= 0.0 && params.a <= 1.0))
    throw std::invalid_argument("resample shrinkage a must lie in [0,1]");
  if (cloud.size() == 0)
    throw std::invalid_argument("cannot resample an empty cloud");

  const std::size_t k_out = count == 0 ? cloud.size() : count;
  const MomentFrame frame = shrinkage_frame(cloud, params);
  const AncestorTable table(cloud.w);

  ParticleCloud out;
  out.resize(k_out);
  out.t = cloud.t;
  const double w_uniform = 1.0 / static_cast<double>(k_out);
  for (std::size_t k = 0; k < k_out; ++k) {
    const std::size_t anc = table.pick(rng.uniform());
    const Vec3 shrunk =
        cloud.location(anc) * params.a + frame.mean * (1.0 - params.a);
    const Vec3 p = constrained_gaussian_draw(frame.axes, frame.sigma, shrunk, rng);
    out.x[k] = p.x;
    out.y[k] = p.y;
    out.z[k] = p.z;
    out.w[k] = w_uniform;
  }
  return out;
}

ParticleCloud clip_project_resample(const ParticleCloud& cloud,
                                    const ResampleParams& params, Rng& rng,
                                    long* invalid_raw, std::size_t count) {
  if (!(params.a >= 0.0 && params.a <= 1.0))
    throw std::invalid_argument("resample shrinkage a must lie in [0,1]");
  if (cloud.size() == 0)
    throw std::invalid_argument("cannot resample an empty cloud");

  const std::size_t k_out = count == 0 ? cloud.size() : count;
  const MomentFrame frame = shrinkage_frame(cloud, params);
  const AncestorTable table(cloud.w);

  ParticleCloud out;
  out.resize(k_out);
  out.t = cloud.t;
  long invalid = 0;
  const double w_uniform = 1.0 / static_cast<double>(k_out);
  for (std::size_t k = 0; k < k_out; ++k) {
    const std::size_t anc = table.pick(rng.uniform());
    const Vec3 shrunk =
        cloud.location(anc) * params.a + frame.mean * (1.0 - params.a);
    const Vec3 noise{frame.sigma.x * sample_standard_normal(rng),
                     frame.sigma.y * sample_standard_normal(rng),
                     frame.sigma.z * sample_standard_normal(rng)};
    Vec3 p = shrunk + frame.axes * noise;
    const double n = p.norm();
    if (n > 1.0) {
      ++invalid;
      p = p * (1.0 / n);
    }
    out.x[k] = p.x;
    out.y[k] = p.y;
    out.z[k] = p.z;
    out.w[k] = w_uniform;
  }
  if (invalid_raw != nullptr) *invalid_raw = invalid;
  return out;
}

}  // namespace aqt
