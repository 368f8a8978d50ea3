#pragma once

#include <optional>
#include <string>
#include <vector>

#include "airway/voi.hpp"
#include "airway/volume.hpp"

namespace airway {

enum class BranchStatus { Open, Terminated, Leaked };

const char* to_string(BranchStatus s);
BranchStatus branch_status_from_string(const std::string& s);

struct BranchRecord {
  int id = 0;
  std::optional<int> parent;
  int generation = 0;
  std::vector<Vec3> centerline;  // world mm
  double mean_radius = 0.0;      // mm
  BranchStatus status = BranchStatus::Open;

  // Accepted per-VOI masks in their local frames, parallel to voi_chain.
  // Kept in memory for reconstruction; not serialized.
  std::vector<Voi> voi_chain;
  std::vector<BinaryMask> voi_masks;
};

struct AirwayTree {
  std::vector<BranchRecord> branches;
  int root_id = 0;
  BinaryMask mask;  // global frame union of accepted VOI masks
  bool complete = true;

  // Parent links must form a rooted tree; throws on cycles or multiple roots.
  void validate() const;
};

// JSON schema: {"branches":[{id,parent,generation,centerline,mean_radius,
// status}],"voxel_count":N,"complete":bool}. Masks and VOI chains travel
// separately as MetaImage.
std::string tree_to_json(const AirwayTree& tree);
AirwayTree tree_from_json(const std::string& text);

}  // namespace airway
