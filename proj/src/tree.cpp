#include "airway/tree.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace airway {

const char* to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::Open: return "open";
    case BranchStatus::Terminated: return "terminated";
    case BranchStatus::Leaked: return "leaked";
  }
  return "open";
}

BranchStatus branch_status_from_string(const std::string& s) {
  if (s == "open") return BranchStatus::Open;
  if (s == "terminated") return BranchStatus::Terminated;
  if (s == "leaked") return BranchStatus::Leaked;
  throw std::invalid_argument("unknown branch status: " + s);
}

void AirwayTree::validate() const {
  std::unordered_map<int, const BranchRecord*> by_id;
  for (const auto& b : branches) {
    if (!by_id.emplace(b.id, &b).second)
      throw std::logic_error("duplicate branch id " + std::to_string(b.id));
  }
  int roots = 0;
  for (const auto& b : branches) {
    if (!b.parent) {
      ++roots;
      continue;
    }
    if (!by_id.count(*b.parent))
      throw std::logic_error("branch " + std::to_string(b.id) + " has unknown parent");
    // Walk up; a cycle would revisit b.
    std::unordered_set<int> seen{b.id};
    const BranchRecord* cur = by_id.at(*b.parent);
    while (true) {
      if (!seen.insert(cur->id).second)
        throw std::logic_error("cycle in branch parents at " + std::to_string(cur->id));
      if (!cur->parent) break;
      cur = by_id.at(*cur->parent);
    }
  }
  if (!branches.empty() && roots != 1)
    throw std::logic_error("tree must have exactly one root");
  for (const auto& b : branches) {
    if (b.parent && by_id.at(*b.parent)->generation + 1 != b.generation)
      throw std::logic_error("generation of branch " + std::to_string(b.id) +
                             " is not parent + 1");
  }
}

std::string tree_to_json(const AirwayTree& tree) {
  nlohmann::json j;
  j["branches"] = nlohmann::json::array();
  for (const auto& b : tree.branches) {
    nlohmann::json jb;
    jb["id"] = b.id;
    if (b.parent)
      jb["parent"] = *b.parent;
    else
      jb["parent"] = nullptr;
    jb["generation"] = b.generation;
    auto& cl = jb["centerline"] = nlohmann::json::array();
    for (const auto& p : b.centerline) cl.push_back({p.x, p.y, p.z});
    jb["mean_radius"] = b.mean_radius;
    jb["status"] = to_string(b.status);
    j["branches"].push_back(std::move(jb));
  }
  j["voxel_count"] = tree.mask.count();
  j["complete"] = tree.complete;
  return j.dump(2) + "\n";
}

AirwayTree tree_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  AirwayTree tree;
  tree.complete = j.value("complete", true);
  for (const auto& jb : j.at("branches")) {
    BranchRecord b;
    b.id = jb.at("id").get<int>();
    if (!jb.at("parent").is_null()) b.parent = jb.at("parent").get<int>();
    b.generation = jb.at("generation").get<int>();
    for (const auto& p : jb.at("centerline"))
      b.centerline.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    b.mean_radius = jb.at("mean_radius").get<double>();
    b.status = branch_status_from_string(jb.at("status").get<std::string>());
    if (!b.parent) tree.root_id = b.id;
    tree.branches.push_back(std::move(b));
  }
  return tree;
}

}  // namespace airway
