#pragma once

#include "airway/voi.hpp"
#include "airway/volume.hpp"

namespace airway {

// Adaptive-threshold region growing. The threshold walks from hu_start in
// hu_step increments up to hu_max and stops before the first step that
// multiplies the region volume by more than explosion_ratio.
struct GrowParams {
  double hu_start = -950.0;
  double hu_step = 25.0;
  double hu_max = -775.0;
  double explosion_ratio = 1.5;

  void validate() const;
};

// 26-connected region of voxels <= T* containing the seed, where T* is the
// largest non-exploding threshold of the sweep. Throws "seed not in air" when
// v(seed) > hu_start and "seed likely outside body" when the first region
// touches three or more volume faces.
BinaryMask grow_trachea(const ScalarVolume& v, const Index3& seed, const GrowParams& p);

// Root VOI from the grown trachea: axis = principal axis of the top 20 mm of
// the mask oriented caudally (-z), base at the centroid of the topmost slice,
// cross-section from that slice's equivalent-disk radius.
Voi estimate_root_voi(const BinaryMask& m, const VoiSizing& sizing = {});

}  // namespace airway
