#pragma once

#include <optional>
#include <vector>

#include "airway/gvf.hpp"
#include "airway/volume.hpp"

namespace airway {

struct TubeParams {
  double t_l = 500.0;     // tube-likeness threshold, in 1000 x mean-flow units
  double t_m = 50.0;      // magnitude threshold, in 1000 x |V| units
  double r_max = 10.0;    // mm
  int samples = 32;       // circle sample count
  double edge_stop = 2.0; // stop when mean |V| falls below running max / edge_stop

  void validate() const;
};

struct TubeScore {
  double score = 0.0;
  double fitted_radius = 0.0;  // mm
};

// Mean inward flow of V through circles centered at x in the plane normal to
// `normal`. Radii grow from one voxel pitch in half-pitch steps until r_max,
// the lattice edge, or the magnitude drop criterion (the mean sampled |V|
// peaks where the circle touches the object edge; growth stops once it falls
// below running-max / edge_stop). Returns the best score and its radius.
// Throws when even the smallest circle leaves the lattice.
TubeScore tube_likeness(const VectorField& field, const Vec3& x_world, const Vec3& normal,
                        const TubeParams& p);

// Per-voxel max tube-likeness over three candidate normals: the local tube
// direction estimated from the GVF structure tensor (3^3 neighborhood) and
// its two lattice-nearest axes. Boundary voxels score 0. An optional mask
// restricts evaluation (outside voxels score 0).
ScalarVolume tube_likeness_map(const VectorField& field, const TubeParams& p,
                               const BinaryMask* mask = nullptr);

struct CenterlineGraph {
  struct Node {
    Index3 pos;
    int degree = 0;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> adjacency;  // node ids, 26-adjacency
  std::vector<int> endpoints;               // degree 1
  std::vector<int> furcations;              // degree >= 3

  int node_at(const Index3& p) const;  // -1 when absent
  std::size_t edge_count() const;

 private:
  friend CenterlineGraph build_centerline_graph(const BinaryMask& m);
  std::vector<int> index_of_;  // linear voxel index -> node id (-1 absent)
  Index3 dims_;
};

CenterlineGraph build_centerline_graph(const BinaryMask& m);

// Candidate centerline voxels = candidates  &  1000|V| < t_m  &  1000*tubeness > t_l,
// thinned to one voxel width; graph carries per-node degrees.
std::pair<BinaryMask, CenterlineGraph> extract_centerline(const ScalarVolume& magnitude,
                                                          const ScalarVolume& tubeness,
                                                          const BinaryMask& candidates,
                                                          const TubeParams& p);

struct BranchPoint {
  Index3 voxel;
  Vec3 position;                 // world mm
  std::vector<Vec3> directions;  // unit, one per incident arm
};

// Every node of degree >= 3; child directions are averaged over the first
// five voxels of each incident arm.
std::vector<BranchPoint> find_branch_points(const CenterlineGraph& g, const Geometry& geom);

}  // namespace airway
