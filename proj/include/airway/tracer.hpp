#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airway/enhance.hpp"
#include "airway/gvf.hpp"
#include "airway/trachea.hpp"
#include "airway/tree.hpp"
#include "airway/tube.hpp"
#include "airway/voi.hpp"

namespace airway {

struct LeakParams {
  double s_ratio_max = 0.33;
  double circularity_min = 0.4;

  void validate() const;
};

enum class VoiFace { Front, XMin, XMax, YMin, YMax };
const char* to_string(VoiFace f);

// A connected exit region on the VOI surface (front + four side faces; the
// entry plane k=0 is excluded). Components merge across face edges; `face`
// reports where most of the voxels sit.
struct SurfaceComponent {
  VoiFace face = VoiFace::Front;
  int label = 0;
  int voxel_count = 0;
  Vec3 centroid_local;             // VOI-frame mm
  std::vector<Index3> voxels;      // lattice indices in the VOI volume
};

// 26-connected labeling of mask voxels on the VOI's exit surface, components
// under 3 voxels discarded as noise, sorted by centroid (lexicographic).
std::vector<SurfaceComponent> surface_exit_components(const BinaryMask& candidates,
                                                      const Voi& voi);

struct LeakCheck {
  bool ok = true;
  std::string reason;
  double s_ratio = 0.0;
  double circularity = 1.0;  // of the largest front-face component; 1 when empty
};

// S_ratio = candidate voxels on all six faces / all surface voxels; leak when
// above s_ratio_max. Circularity 4*pi*A/P^2 of the largest front-face
// component (area = voxel count, perimeter = marching-squares contour
// length); leak when below circularity_min.
LeakCheck detect_leak(const BinaryMask& candidates, const Voi& voi, const LeakParams& p);

// Circularity of a 2-D blob: 4*pi*area / perimeter^2 with the perimeter taken
// as the marching-squares contour length of the 0/1 image.
double contour_circularity(const std::vector<std::uint8_t>& image, int nx, int ny);
double marching_squares_perimeter(const std::vector<std::uint8_t>& image, int nx, int ny);

struct TracerParams {
  VoiSizing sizing;
  int generation_cap = 12;
  std::int64_t voxel_budget = 50000000;
  int max_extensions = 48;            // per branch
  double revisit_max_fraction = 0.6;  // terminate when this much is already traced
  double voi_pitch = 0.0;             // mm; <= 0 uses the source min spacing

  void validate() const;
};

struct TraceConfig {
  GrowParams grow;
  EnhanceParams enhance;
  GvfParams gvf;
  TubeParams tube;
  LeakParams leak;
  TracerParams tracer;

  void validate() const;
};

// Full pipeline: trachea growing, root VOI, then a FIFO VOI loop of
// resample / sharpen / CEF / GVF / tube-likeness / centerline / leak check /
// exit analysis. One exit extends the branch, two or more spawn children at
// the branch point, zero (or a leak) terminates it. Deterministic for fixed
// inputs regardless of worker count.
AirwayTree trace(const ScalarVolume& v, const Index3& seed, const TraceConfig& config);

// Union of all accepted VOI masks back-projected into `target_geom`.
// Idempotent; leaked VOIs contribute nothing.
BinaryMask reconstruct(const AirwayTree& tree, const Geometry& target_geom);

}  // namespace airway
