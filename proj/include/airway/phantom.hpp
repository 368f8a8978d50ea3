#pragma once

#include <cstdint>
#include <utility>

#include "airway/tree.hpp"
#include "airway/volume.hpp"

namespace airway {

// Synthetic binary-bifurcating airway tree with exact ground truth. Children
// are deflected +-branch_angle/2 in a plane that alternates per generation,
// so trees are genuinely 3-D. The root runs caudally (-z) from the top of the
// volume.
struct PhantomSpec {
  int generations = 3;
  double root_radius = 4.0;          // mm
  double radius_decay = 0.7;         // per generation, in (0,1)
  double branch_angle = 40.0;        // degrees between the two children
  double branch_length_factor = 8.0;  // length = factor * radius
  double lumen_hu = -1000.0;
  double wall_hu = 0.0;
  double background_hu = -900.0;
  double noise_sigma = 0.0;  // HU
  std::uint64_t rng_seed = 0;
  double spacing = 0.5;  // mm, isotropic
  double margin = 6.0;   // mm of background around the tree

  void validate() const;
};

struct GroundTruth {
  BinaryMask mask;  // exact lumen voxels, before noise
  AirwayTree tree;  // exact centerlines, radii, parents
  Index3 seed;      // a lumen voxel near the root entry, for tracing
};

std::pair<ScalarVolume, GroundTruth> generate_phantom(const PhantomSpec& spec);

// Single straight tube spanning the whole lattice along `axis` (no end caps
// when axis-aligned). Unit fixture for cross-section tests.
std::pair<ScalarVolume, GroundTruth> generate_cylinder(double radius_mm, double length_mm,
                                                       const Vec3& axis,
                                                       const PhantomSpec& hu_profile);

// Flat key=value parsing for phantom specs (keys: generations, root_radius,
// radius_decay, branch_angle, branch_length_factor, lumen_hu, wall_hu,
// background_hu, noise_sigma, rng_seed, spacing, margin).
PhantomSpec phantom_spec_from_file(const std::string& path);
std::string phantom_spec_help();

}  // namespace airway
