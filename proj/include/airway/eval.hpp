#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "airway/phantom.hpp"
#include "airway/tree.hpp"

namespace airway {

struct Metrics {
  int branches_extracted = 0;
  int branches_total = 0;
  double extraction_ratio = 0.0;  // percent
  double fpr = 0.0;               // percent
  std::int64_t fp_voxels = 0;
  std::int64_t tp_voxels = 0;
};

// A truth branch counts as extracted when at least half of its centerline
// voxels lie within 2 voxels (Euclidean) of the result mask. FPR = voxels of
// the result outside the truth mask dilated by one voxel (26-neighborhood),
// as a percentage of the result; empty result gives FPR 0.
Metrics evaluate(const BinaryMask& result_mask, const AirwayTree& result_tree,
                 const GroundTruth& truth);

// Text table with the columns Method | Average Extracted Numbers |
// Ratio of Extracted Number(%) | FPR(%), two-decimal cells. With a baseline,
// adds a baseline row and a delta row.
std::string report(const Metrics& m, const std::optional<Metrics>& baseline = std::nullopt);

std::string metrics_to_json(const Metrics& m);

}  // namespace airway
