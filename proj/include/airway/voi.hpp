#pragma once

#include "airway/geometry.hpp"
#include "airway/volume.hpp"

namespace airway {

// Oriented box tracking one branch. `base` is the center of the entry face;
// the box spans cross_size x cross_size laterally and `length` along `axis`.
// Local frame: x along `up`, y along axis x up, z along `axis`.
struct Voi {
  Vec3 base;
  Vec3 axis{0, 0, 1};
  Vec3 up{1, 0, 0};
  double cross_size = 0.0;  // mm
  double length = 0.0;      // mm
  int generation = 0;

  Vec3 lateral() const { return axis.cross(up); }
  Vec3 local_to_world(const Vec3& l) const {
    return base + up * l.x + lateral() * l.y + axis * l.z;
  }
  Vec3 world_to_local(const Vec3& p) const {
    const Vec3 d = p - base;
    return {d.dot(up), d.dot(lateral()), d.dot(axis)};
  }
  // Throws if axes are not orthonormal or extents are degenerate.
  void validate() const;
};

// Sizing constants for VOIs; defaults give cross = max(4r, 3mm + 2r),
// initial length 4r and extension steps of 2r.
struct VoiSizing {
  double cross_factor = 4.0;
  double cross_floor_mm = 3.0;
  double length_factor = 4.0;
  double extension_factor = 2.0;
};

Voi size_voi(double radius_mm, const Vec3& direction, const Vec3& base, int generation,
             const VoiSizing& sizing = {});

// Same frame, length increased by step.
Voi extend_voi(const Voi& v, double step_mm);

// Lattice dims of a VOI sampled at `pitch` (isotropic).
Index3 voi_lattice_dims(const Voi& voi, double pitch);
// Local-frame coordinates of voxel (0,0,0)'s center.
Vec3 voi_lattice_origin(const Voi& voi, double pitch);

// Resamples `v` onto the VOI lattice with trilinear interpolation. Samples
// outside the source volume take +1000 HU (solid-tissue padding). The result's
// geometry lives in the VOI's local frame.
ScalarVolume resample_to_voi(const ScalarVolume& v, const Voi& voi, double pitch);

// Sets every target voxel whose center falls inside a set VOI voxel
// (inverse-mapped, nearest neighbor). Monotone union: never clears bits.
BinaryMask project_mask_to_global(const BinaryMask& m, const Voi& voi,
                                  const BinaryMask& target);

}  // namespace airway
