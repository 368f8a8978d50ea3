#include "airway/voi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airway {

namespace {
constexpr float kPaddingHu = 1000.0f;  // solid-tissue sentinel outside the volume
constexpr double kOrthoTol = 1e-6;
}  // namespace

void Voi::validate() const {
  if (cross_size <= 0 || length <= 0)
    throw std::invalid_argument("degenerate VOI: extents must be > 0");
  if (std::abs(axis.norm() - 1.0) > kOrthoTol || std::abs(up.norm() - 1.0) > kOrthoTol ||
      std::abs(axis.dot(up)) > kOrthoTol)
    throw std::invalid_argument("VOI axes must be orthonormal");
}

Voi size_voi(double radius_mm, const Vec3& direction, const Vec3& base, int generation,
             const VoiSizing& sizing) {
  if (radius_mm <= 0) throw std::invalid_argument("VOI radius must be > 0");
  Voi v;
  v.base = base;
  v.axis = direction.normalized();
  v.up = perpendicular_of(v.axis);
  v.cross_size = std::max(sizing.cross_factor * radius_mm,
                          sizing.cross_floor_mm + 2.0 * radius_mm);
  v.length = sizing.length_factor * radius_mm;
  v.generation = generation;
  return v;
}

Voi extend_voi(const Voi& v, double step_mm) {
  if (step_mm <= 0) throw std::invalid_argument("extension step must be > 0");
  Voi out = v;
  out.length += step_mm;
  return out;
}

Index3 voi_lattice_dims(const Voi& voi, double pitch) {
  if (pitch <= 0) throw std::invalid_argument("voxel pitch must be > 0");
  voi.validate();
  auto cells = [pitch](double extent) {
    return std::max(1, static_cast<int>(std::ceil(extent / pitch - 1e-9)));
  };
  const int c = cells(voi.cross_size);
  return {c, c, cells(voi.length)};
}

Vec3 voi_lattice_origin(const Voi& voi, double pitch) {
  const double half = voi.cross_size / 2.0;
  return {-half + pitch / 2.0, -half + pitch / 2.0, pitch / 2.0};
}

ScalarVolume resample_to_voi(const ScalarVolume& v, const Voi& voi, double pitch) {
  const Index3 dims = voi_lattice_dims(voi, pitch);
  const Vec3 lorigin = voi_lattice_origin(voi, pitch);
  ScalarVolume out(dims, {pitch, pitch, pitch}, lorigin);

  const Vec3 ex = voi.up, ey = voi.lateral(), ez = voi.axis;
  for (int k = 0; k < dims.z; ++k)
    for (int j = 0; j < dims.y; ++j)
      for (int i = 0; i < dims.x; ++i) {
        const Vec3 local{lorigin.x + i * pitch, lorigin.y + j * pitch, lorigin.z + k * pitch};
        const Vec3 world = voi.base + ex * local.x + ey * local.y + ez * local.z;
        const Vec3 c = v.geom.world_to_voxel(world);
        out(i, j, k) = v.sample_trilinear(c, kPaddingHu);
      }
  return out;
}

BinaryMask project_mask_to_global(const BinaryMask& m, const Voi& voi,
                                  const BinaryMask& target) {
  voi.validate();
  const double pitch = m.geom.spacing.x;
  if (std::abs(m.geom.spacing.y - pitch) > 1e-9 || std::abs(m.geom.spacing.z - pitch) > 1e-9)
    throw std::invalid_argument("VOI mask must have isotropic pitch");
  const Index3 expected = voi_lattice_dims(voi, pitch);
  if (!(m.geom.dims == expected))
    throw std::invalid_argument("VOI mask dims inconsistent with VOI extents");

  BinaryMask out = target;
  if (m.count() == 0) return out;

  // World-space AABB of the box, then scan the covered global voxels.
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  const double half = voi.cross_size / 2.0;
  for (const double lx : {-half, half})
    for (const double ly : {-half, half})
      for (const double lz : {0.0, voi.length}) {
        const Vec3 w = voi.local_to_world({lx, ly, lz});
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], w[a]);
          hi[a] = std::max(hi[a], w[a]);
        }
      }
  const Geometry& g = target.geom;
  Index3 lo_i, hi_i;
  for (int a = 0; a < 3; ++a) {
    lo_i[a] = std::max(0, static_cast<int>(std::floor((lo[a] - g.origin[a]) / g.spacing[a])));
    hi_i[a] = std::min(g.dims[a] - 1,
                       static_cast<int>(std::ceil((hi[a] - g.origin[a]) / g.spacing[a])));
  }

  const Vec3 lorigin = voi_lattice_origin(voi, pitch);
  for (int z = lo_i.z; z <= hi_i.z; ++z)
    for (int y = lo_i.y; y <= hi_i.y; ++y)
      for (int x = lo_i.x; x <= hi_i.x; ++x) {
        const Vec3 local = voi.world_to_local(g.voxel_center(x, y, z));
        const int i = static_cast<int>(std::lround((local.x - lorigin.x) / pitch));
        const int j = static_cast<int>(std::lround((local.y - lorigin.y) / pitch));
        const int k = static_cast<int>(std::lround((local.z - lorigin.z) / pitch));
        if (!m.geom.contains(i, j, k)) continue;
        if (m(i, j, k)) out.values[g.index(x, y, z)] = 1;
      }
  return out;
}

}  // namespace airway
