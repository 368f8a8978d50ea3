#include "airway/enhance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "airway/parallel.hpp"

namespace airway {

void EnhanceParams::validate() const {
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
  if (log_sigma <= 0) throw std::invalid_argument("log_sigma must be > 0");
  if (cef_scales.empty()) throw std::invalid_argument("cef_scales must not be empty");
  for (const double s : cef_scales)
    if (s <= 0) throw std::invalid_argument("cef_scales must all be > 0");
}

namespace {

std::vector<double> gaussian_kernel(double sigma_vox) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma_vox));
  std::vector<double> k(2 * radius + 1);
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma_vox * sigma_vox));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// 1-D convolution along `axis` with edge replication, double accumulators.
void convolve_axis(const ScalarVolume& in, ScalarVolume& out, int axis,
                   const std::vector<double>& kernel) {
  const Index3 d = in.geom.dims;
  const int radius = static_cast<int>(kernel.size() / 2);
  const int n_axis = d[axis];
  parallel_for(0, static_cast<std::size_t>(d.z), [&](std::size_t z0, std::size_t z1) {
    for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
      for (int y = 0; y < d.y; ++y)
        for (int x = 0; x < d.x; ++x) {
          Index3 p{x, y, z};
          double acc = 0;
          for (int t = -radius; t <= radius; ++t) {
            Index3 q = p;
            q[axis] = std::clamp(p[axis] + t, 0, n_axis - 1);
            acc += kernel[t + radius] * in.values[in.geom.index(q.x, q.y, q.z)];
          }
          out.values[out.geom.index(x, y, z)] = static_cast<float>(acc);
        }
  });
}

}  // namespace

ScalarVolume gaussian_smooth(const ScalarVolume& v, double sigma_mm) {
  if (sigma_mm <= 0) return v;
  ScalarVolume a = v, b(v.geom);
  bool result_in_a = true;
  for (int axis = 0; axis < 3; ++axis) {
    const double sigma_vox = sigma_mm / v.geom.spacing[axis];
    if (std::ceil(3.0 * sigma_vox) < 1) continue;  // sub-voxel scale: identity on this axis
    if (result_in_a)
      convolve_axis(a, b, axis, gaussian_kernel(sigma_vox));
    else
      convolve_axis(b, a, axis, gaussian_kernel(sigma_vox));
    result_in_a = !result_in_a;
  }
  return result_in_a ? std::move(a) : std::move(b);
}

ScalarVolume laplacian(const ScalarVolume& v) {
  const Index3 d = v.geom.dims;
  ScalarVolume out(v.geom);
  const double hx2 = v.geom.spacing.x * v.geom.spacing.x;
  const double hy2 = v.geom.spacing.y * v.geom.spacing.y;
  const double hz2 = v.geom.spacing.z * v.geom.spacing.z;
  parallel_for(0, static_cast<std::size_t>(d.z), [&](std::size_t z0, std::size_t z1) {
    for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
      for (int y = 0; y < d.y; ++y)
        for (int x = 0; x < d.x; ++x) {
          auto val = [&](int ax, int ay, int az) {
            return static_cast<double>(v.values[v.geom.index(std::clamp(ax, 0, d.x - 1),
                                                             std::clamp(ay, 0, d.y - 1),
                                                             std::clamp(az, 0, d.z - 1))]);
          };
          const double c = val(x, y, z);
          const double lap = (val(x + 1, y, z) - 2 * c + val(x - 1, y, z)) / hx2 +
                             (val(x, y + 1, z) - 2 * c + val(x, y - 1, z)) / hy2 +
                             (val(x, y, z + 1) - 2 * c + val(x, y, z - 1)) / hz2;
          out.values[out.geom.index(x, y, z)] = static_cast<float>(lap);
        }
  });
  return out;
}

ScalarVolume sharpen_log(const ScalarVolume& v, double beta, double log_sigma_mm) {
  const ScalarVolume log_v = laplacian(gaussian_smooth(v, log_sigma_mm));
  ScalarVolume out(v.geom);
  for (std::size_t i = 0; i < v.values.size(); ++i)
    out.values[i] = static_cast<float>(v.values[i] - beta * log_v.values[i]);
  return out;
}

HessianEigenvalues hessian_eigenvalues(const ScalarVolume& v, double sigma_mm) {
  const ScalarVolume sm = gaussian_smooth(v, sigma_mm);
  const Index3 d = v.geom.dims;
  const Vec3 h = v.geom.spacing;
  HessianEigenvalues out{ScalarVolume(v.geom), ScalarVolume(v.geom), ScalarVolume(v.geom)};
  const double norm = sigma_mm * sigma_mm;

  parallel_for(0, static_cast<std::size_t>(d.z), [&](std::size_t z0, std::size_t z1) {
    for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
      for (int y = 0; y < d.y; ++y)
        for (int x = 0; x < d.x; ++x) {
          auto val = [&](int ax, int ay, int az) {
            return static_cast<double>(sm.values[sm.geom.index(std::clamp(ax, 0, d.x - 1),
                                                               std::clamp(ay, 0, d.y - 1),
                                                               std::clamp(az, 0, d.z - 1))]);
          };
          const double c = val(x, y, z);
          Eigen::Matrix3d H;
          H(0, 0) = (val(x + 1, y, z) - 2 * c + val(x - 1, y, z)) / (h.x * h.x);
          H(1, 1) = (val(x, y + 1, z) - 2 * c + val(x, y - 1, z)) / (h.y * h.y);
          H(2, 2) = (val(x, y, z + 1) - 2 * c + val(x, y, z - 1)) / (h.z * h.z);
          H(0, 1) = H(1, 0) = (val(x + 1, y + 1, z) - val(x + 1, y - 1, z) -
                               val(x - 1, y + 1, z) + val(x - 1, y - 1, z)) /
                              (4 * h.x * h.y);
          H(0, 2) = H(2, 0) = (val(x + 1, y, z + 1) - val(x + 1, y, z - 1) -
                               val(x - 1, y, z + 1) + val(x - 1, y, z - 1)) /
                              (4 * h.x * h.z);
          H(1, 2) = H(2, 1) = (val(x, y + 1, z + 1) - val(x, y + 1, z - 1) -
                               val(x, y - 1, z + 1) + val(x, y - 1, z - 1)) /
                              (4 * h.y * h.z);
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
          es.computeDirect(H, Eigen::EigenvaluesOnly);
          const std::size_t i = v.geom.index(x, y, z);
          out.l1.values[i] = static_cast<float>(norm * es.eigenvalues()[0]);
          out.l2.values[i] = static_cast<float>(norm * es.eigenvalues()[1]);
          out.l3.values[i] = static_cast<float>(norm * es.eigenvalues()[2]);
        }
  });
  return out;
}

std::pair<ScalarVolume, BinaryMask> cef(const ScalarVolume& v, const EnhanceParams& p) {
  p.validate();
  ScalarVolume score(v.geom, 0.0f);
  for (const double sigma : p.cef_scales) {
    const HessianEigenvalues ev = hessian_eigenvalues(v, sigma);
    for (std::size_t i = 0; i < score.values.size(); ++i) {
      const float l1 = ev.l1.values[i], l2 = ev.l2.values[i], l3 = ev.l3.values[i];
      // Dark tube: both cross-section curvatures positive, along-axis small.
      if (l2 > 0 && l3 > 0 && std::abs(l1) < 0.5f * l2)
        score.values[i] = std::max(score.values[i], l2);
    }
  }
  BinaryMask candidates(v.geom);
  for (std::size_t i = 0; i < score.values.size(); ++i)
    candidates.values[i] =
        v.values[i] <= p.cef_hu_threshold && score.values[i] >= p.cef_score_threshold;
  return {std::move(score), std::move(candidates)};
}

}  // namespace airway
