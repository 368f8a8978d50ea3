#pragma once

#include <vector>

#include "airway/volume.hpp"

namespace airway {

// Per-voxel 3-vector lattice, interleaved xyz, x-fastest like ScalarVolume.
struct VectorField {
  Geometry geom;
  std::vector<float> data;  // 3 * voxel_count

  VectorField() = default;
  explicit VectorField(const Geometry& g);

  Vec3 at(int x, int y, int z) const;
  void set(int x, int y, int z, const Vec3& v);
  std::size_t vec_index(int x, int y, int z) const { return 3 * geom.index(x, y, z); }

  // Trilinear interpolation at continuous voxel coordinates; returns false
  // when the point is outside the voxel-center hull.
  bool sample(const Vec3& voxel_coord, Vec3& out) const;
};

struct GvfParams {
  double sigma = 1.0;    // mm, gradient smoothing scale
  double f_max = 0.0;    // gradient magnitude cap; <= 0 uses the 99th percentile
  double mu = 0.1;       // smoothness weight
  int max_iters = 400;
  double tol = 1e-4;     // max vector update threshold

  void validate() const;
};

// F = -grad(G_sigma * v), spacing-aware central differences, edge replication.
VectorField smoothed_gradient(const ScalarVolume& v, double sigma_mm);

// Normalized initial field: each vector rescaled to min(|F|, F_max)/F_max of
// unit length, so magnitudes are in [0,1] and saturate at the cap.
VectorField initial_field(const ScalarVolume& v, const GvfParams& p);

// The effective cap used by initial_field (the configured value, or the 99th
// percentile of |F| when f_max <= 0).
double effective_f_max(const VectorField& raw_gradient, const GvfParams& p);

struct GvfDiagnostics {
  int iterations = 0;
  std::vector<double> energy;  // per accepted iterate, starting at V0
};

// Minimizes sum mu*|grad V|^2 + |F|^2 |V - F|^2 by explicit diffusion
// V <- V + dt (mu lap V - |F|^2 (V - F)), V0 = F, Neumann boundaries. The
// step size satisfies the diffusion stability bound and keeps the discrete
// energy non-increasing. Stops at max_iters or when the max update < tol.
VectorField solve_gvf(const VectorField& f, const GvfParams& p,
                      GvfDiagnostics* diag = nullptr);

// Discrete energy of the functional solve_gvf minimizes (forward-difference
// gradient over interior links). Deterministic summation order.
double discrete_energy(const VectorField& v, const VectorField& f, double mu);

ScalarVolume magnitude_map(const VectorField& f);

}  // namespace airway
