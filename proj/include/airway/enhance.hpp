#pragma once

#include <utility>
#include <vector>

#include "airway/volume.hpp"

namespace airway {

struct EnhanceParams {
  double beta = 0.05;                          // sharpening weight
  double log_sigma = 0.5;                      // mm
  double cef_hu_threshold = -800.0;            // intensity gate, applied to the (sharpened) input
  std::vector<double> cef_scales{0.5, 1.0, 2.0};  // mm
  double cef_score_threshold = 10.0;           // HU-curvature units

  void validate() const;
};

// Separable Gaussian smoothing, kernel truncated at 3 sigma, edge replication.
// sigma is in mm; a sigma too small for the lattice returns a copy.
ScalarVolume gaussian_smooth(const ScalarVolume& v, double sigma_mm);

// Spacing-aware Laplacian with second central differences, edge replication.
ScalarVolume laplacian(const ScalarVolume& v);

// result = v - beta * LoG_sigma(v). Counters partial-volume blur around thin
// walls before cavity enhancement.
ScalarVolume sharpen_log(const ScalarVolume& v, double beta, double log_sigma_mm);

// Eigenvalues (ascending) of the sigma^2-normalized Hessian of the
// sigma-smoothed volume, one volume per eigenvalue.
struct HessianEigenvalues {
  ScalarVolume l1, l2, l3;
};
HessianEigenvalues hessian_eigenvalues(const ScalarVolume& v, double sigma_mm);

// Cavity enhancement: multiscale dark-tube response. At each scale the
// response is l2 where l2 > 0, l3 > 0 and |l1| < l2/2, else 0; the score is
// the max over scales. Candidates are voxels passing both the intensity gate
// (v <= cef_hu_threshold) and the score gate.
std::pair<ScalarVolume, BinaryMask> cef(const ScalarVolume& v, const EnhanceParams& p);

}  // namespace airway
