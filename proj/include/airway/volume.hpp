#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airway/geometry.hpp"

namespace airway {

// Lattice metadata shared by volumes, masks and label maps. Voxel (0,0,0) has
// its center at `origin`; linear storage is x-fastest.
struct Geometry {
  Index3 dims{0, 0, 0};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};

  bool operator==(const Geometry&) const = default;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims.x) * dims.y * dims.z;
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < dims.x && y < dims.y && z < dims.z;
  }
  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims.x) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.y) * z);
  }
  Vec3 voxel_center(int x, int y, int z) const {
    return {origin.x + spacing.x * x, origin.y + spacing.y * y, origin.z + spacing.z * z};
  }
  // Continuous voxel coordinates of a world point (voxel centers sit at integers).
  Vec3 world_to_voxel(const Vec3& p) const {
    return {(p.x - origin.x) / spacing.x, (p.y - origin.y) / spacing.y,
            (p.z - origin.z) / spacing.z};
  }
  double min_spacing() const {
    return std::min(spacing.x, std::min(spacing.y, spacing.z));
  }
  void validate() const;
};

// Throws std::invalid_argument naming `what` when the two lattices differ.
void require_same_geometry(const Geometry& a, const Geometry& b, const char* what);

struct ScalarVolume {
  Geometry geom;
  std::vector<float> values;

  ScalarVolume() = default;
  ScalarVolume(Index3 dims, Vec3 spacing, Vec3 origin, float fill = 0.0f);
  explicit ScalarVolume(const Geometry& g, float fill = 0.0f);

  float at(int x, int y, int z) const;  // bounds-checked, throws out_of_range
  float& at(int x, int y, int z);
  float operator()(int x, int y, int z) const {  // unchecked
    return values[geom.index(x, y, z)];
  }
  float& operator()(int x, int y, int z) {
    return values[geom.index(x, y, z)];
  }

  // Trilinear interpolation at continuous voxel coordinates. Points farther
  // than half a voxel outside the lattice return `outside`; within the half
  // voxel rim the edge value is replicated. Documented clamping exception to
  // the strict-bounds rule.
  float sample_trilinear(const Vec3& voxel_coord, float outside) const;
};

struct BinaryMask {
  Geometry geom;
  std::vector<std::uint8_t> values;

  BinaryMask() = default;
  BinaryMask(Index3 dims, Vec3 spacing, Vec3 origin, bool fill = false);
  explicit BinaryMask(const Geometry& g, bool fill = false);

  bool at(int x, int y, int z) const;
  void set(int x, int y, int z, bool v);
  bool operator()(int x, int y, int z) const {
    return values[geom.index(x, y, z)] != 0;
  }
  std::size_t count() const;
};

struct LabelMap {
  Geometry geom;
  std::vector<std::int32_t> values;  // 0 = background, labels dense from 1
  int component_count = 0;

  std::int32_t at(int x, int y, int z) const;
};

// Connected-component labeling under 6- or 26-adjacency. Labels are assigned
// in scanline-first-seen order (x fastest), so the result is deterministic.
LabelMap connected_components(const BinaryMask& m, int connectivity = 26);

// Topology-preserving 3-D thinning: 6-subiteration directional border peeling
// with sequential simple-point deletion. Foreground stays 26-connected,
// background 6-connected; curve endpoints are retained. Idempotent.
BinaryMask thin_3d(const BinaryMask& m);

// True iff deleting p keeps both foreground and background topology:
// exactly one 26-component of foreground in N26(p) and exactly one
// 6-component of background in N18(p) that is 6-adjacent to p.
bool is_simple_point(const BinaryMask& m, int x, int y, int z);

}  // namespace airway
