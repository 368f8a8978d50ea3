#include "airway/trachea.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace airway {

void GrowParams::validate() const {
  if (hu_start >= hu_max) throw std::invalid_argument("hu_start must be < hu_max");
  if (hu_step <= 0) throw std::invalid_argument("hu_step must be > 0");
  if (explosion_ratio <= 1) throw std::invalid_argument("explosion_ratio must be > 1");
}

namespace {

// Offsets of the 26-neighborhood.
const std::vector<Index3>& offsets26() {
  static const std::vector<Index3> offs = [] {
    std::vector<Index3> o;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (dx || dy || dz) o.push_back({dx, dy, dz});
    return o;
  }();
  return offs;
}

int faces_touched(const Geometry& g, const std::vector<std::size_t>& voxels) {
  bool f[6] = {};
  for (const std::size_t i : voxels) {
    const int z = static_cast<int>(i / (static_cast<std::size_t>(g.dims.x) * g.dims.y));
    const std::size_t rem = i % (static_cast<std::size_t>(g.dims.x) * g.dims.y);
    const int y = static_cast<int>(rem / g.dims.x);
    const int x = static_cast<int>(rem % g.dims.x);
    f[0] |= x == 0;
    f[1] |= x == g.dims.x - 1;
    f[2] |= y == 0;
    f[3] |= y == g.dims.y - 1;
    f[4] |= z == 0;
    f[5] |= z == g.dims.z - 1;
  }
  int n = 0;
  for (const bool b : f) n += b;
  return n;
}

}  // namespace

BinaryMask grow_trachea(const ScalarVolume& v, const Index3& seed, const GrowParams& p) {
  p.validate();
  if (!v.geom.contains(seed.x, seed.y, seed.z))
    throw std::invalid_argument("seed outside volume");
  if (v.at(seed.x, seed.y, seed.z) > p.hu_start)
    throw std::runtime_error("seed not in air: intensity above threshold");

  const Geometry& g = v.geom;
  const auto& offs = offsets26();

  // Threshold sweep. The region at T is grown incrementally: voxels rejected
  // at lower thresholds wait in buckets keyed by the first threshold that
  // admits them.
  std::vector<double> thresholds;
  for (double t = p.hu_start; t <= p.hu_max + 1e-9; t += p.hu_step) thresholds.push_back(t);

  std::vector<std::uint8_t> state(g.voxel_count(), 0);  // 0 new, 1 queued/bucketed, 2 accepted
  std::vector<std::size_t> accepted;                    // in acceptance order
  std::vector<std::vector<std::size_t>> buckets(thresholds.size());
  std::vector<std::size_t> stack;

  auto bucket_of = [&](float value) {
    for (std::size_t k = 0; k < thresholds.size(); ++k)
      if (value <= thresholds[k]) return static_cast<int>(k);
    return -1;
  };

  const std::size_t seed_i = g.index(seed.x, seed.y, seed.z);
  stack.push_back(seed_i);
  state[seed_i] = 1;

  std::vector<std::size_t> sizes;
  std::size_t stop_size = 0;
  bool stopped = false;
  for (std::size_t k = 0; k < thresholds.size() && !stopped; ++k) {
    const double T = thresholds[k];
    stack.insert(stack.end(), buckets[k].begin(), buckets[k].end());
    buckets[k].clear();
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      if (state[cur] == 2) continue;
      if (v.values[cur] > T) {
        const int b = bucket_of(v.values[cur]);
        if (b >= 0) buckets[b].push_back(cur);
        continue;
      }
      state[cur] = 2;
      accepted.push_back(cur);
      const int z = static_cast<int>(cur / (static_cast<std::size_t>(g.dims.x) * g.dims.y));
      const std::size_t rem = cur % (static_cast<std::size_t>(g.dims.x) * g.dims.y);
      const int y = static_cast<int>(rem / g.dims.x);
      const int x = static_cast<int>(rem % g.dims.x);
      for (const auto& o : offs) {
        const int nx = x + o.x, ny = y + o.y, nz = z + o.z;
        if (!g.contains(nx, ny, nz)) continue;
        const std::size_t ni = g.index(nx, ny, nz);
        if (state[ni] == 0) {
          state[ni] = 1;
          stack.push_back(ni);
        }
      }
    }
    sizes.push_back(accepted.size());
    if (k == 0) {
      if (faces_touched(g, accepted) >= 3)
        throw std::runtime_error("seed likely outside body: region at starting threshold "
                                 "touches 3+ volume faces");
    } else if (static_cast<double>(sizes[k]) >
               p.explosion_ratio * static_cast<double>(sizes[k - 1])) {
      // The step to T exploded; roll back to the previous threshold's region.
      stop_size = sizes[k - 1];
      stopped = true;
    }
  }
  if (!stopped) stop_size = accepted.size();

  BinaryMask out(g);
  for (std::size_t i = 0; i < stop_size; ++i) out.values[accepted[i]] = 1;
  return out;
}

Voi estimate_root_voi(const BinaryMask& m, const VoiSizing& sizing) {
  const Geometry& g = m.geom;
  // Topmost slice with mask content.
  int z_top = -1;
  for (int z = g.dims.z - 1; z >= 0 && z_top < 0; --z)
    for (int y = 0; y < g.dims.y && z_top < 0; ++y)
      for (int x = 0; x < g.dims.x; ++x)
        if (m(x, y, z)) {
          z_top = z;
          break;
        }
  if (z_top < 0) throw std::invalid_argument("empty mask");

  const double slab_mm = 20.0;
  const int z_lo = std::max(0, z_top - static_cast<int>(std::ceil(slab_mm / g.spacing.z)));

  // Centroid and covariance of the top slab.
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  std::size_t n = 0;
  std::set<int> slices;
  for (int z = z_lo; z <= z_top; ++z)
    for (int y = 0; y < g.dims.y; ++y)
      for (int x = 0; x < g.dims.x; ++x)
        if (m(x, y, z)) {
          const Vec3 c = g.voxel_center(x, y, z);
          mean += Eigen::Vector3d(c.x, c.y, c.z);
          slices.insert(z);
          ++n;
        }
  if (slices.size() < 2)
    throw std::runtime_error("insufficient extent: cannot orient a single-slice mask");
  mean /= static_cast<double>(n);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int z = z_lo; z <= z_top; ++z)
    for (int y = 0; y < g.dims.y; ++y)
      for (int x = 0; x < g.dims.x; ++x)
        if (m(x, y, z)) {
          const Vec3 c = g.voxel_center(x, y, z);
          const Eigen::Vector3d d = Eigen::Vector3d(c.x, c.y, c.z) - mean;
          cov += d * d.transpose();
        }
  cov /= static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Eigen::Vector3d principal = es.eigenvectors().col(2);  // largest eigenvalue
  if (principal.z() > 0) principal = -principal;         // caudal = -z
  const Vec3 axis{principal.x(), principal.y(), principal.z()};

  // Base and radius from the topmost slice.
  double cx = 0, cy = 0;
  std::size_t slice_n = 0;
  for (int y = 0; y < g.dims.y; ++y)
    for (int x = 0; x < g.dims.x; ++x)
      if (m(x, y, z_top)) {
        const Vec3 c = g.voxel_center(x, y, z_top);
        cx += c.x;
        cy += c.y;
        ++slice_n;
      }
  const Vec3 base{cx / slice_n, cy / slice_n, g.voxel_center(0, 0, z_top).z};
  const double area_mm2 = static_cast<double>(slice_n) * g.spacing.x * g.spacing.y;
  const double r_eq = std::sqrt(area_mm2 / kPi);
  return size_voi(r_eq, axis, base, 0, sizing);
}

}  // namespace airway
