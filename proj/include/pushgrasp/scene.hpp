#pragma once

#include <algorithm>
#include <vector>

#include "pushgrasp/geometry.hpp"

namespace pushgrasp {

using ObjectId = int;

struct SceneObject {
  ObjectId id = 0;
  Polygon shape;  // local frame
  Pose2d pose;

  Polygon world() const { return transform(shape, pose); }
  Point2 world_centroid() const { return pose.apply(centroid(shape)); }
};

/// Object shapes and planar poses of everything currently on the table.
struct SceneState {
  std::vector<SceneObject> objects;

  std::size_t size() const { return objects.size(); }
  bool empty() const { return objects.empty(); }

  const SceneObject* find(ObjectId id) const {
    auto it = std::find_if(objects.begin(), objects.end(), [id](const SceneObject& o) { return o.id == id; });
    return it == objects.end() ? nullptr : &*it;
  }

  const SceneObject& at(ObjectId id) const {
    const SceneObject* o = find(id);
    if (!o) throw Error(Errc::InvalidInput, "unknown object id " + std::to_string(id));
    return *o;
  }

  void erase(ObjectId id) {
    std::erase_if(objects, [id](const SceneObject& o) { return o.id == id; });
  }
};

using Scene = SceneState;

/// Ordered set of object ids that a grasp targets.
struct ObjectGroup {
  std::vector<ObjectId> member_ids;

  ObjectGroup() = default;
  explicit ObjectGroup(std::vector<ObjectId> ids) : member_ids(std::move(ids)) {
    std::sort(member_ids.begin(), member_ids.end());
    member_ids.erase(std::unique(member_ids.begin(), member_ids.end()), member_ids.end());
  }

  std::size_t size() const { return member_ids.size(); }
  bool contains(ObjectId id) const { return std::binary_search(member_ids.begin(), member_ids.end(), id); }

  bool is_subset_of(const ObjectGroup& other) const {
    return std::includes(other.member_ids.begin(), other.member_ids.end(), member_ids.begin(), member_ids.end());
  }

  friend bool operator==(const ObjectGroup&, const ObjectGroup&) = default;
  friend auto operator<=>(const ObjectGroup&, const ObjectGroup&) = default;
};

inline ObjectGroup whole_scene_group(const SceneState& s) {
  std::vector<ObjectId> ids;
  for (const auto& o : s.objects) ids.push_back(o.id);
  return ObjectGroup(std::move(ids));
}

}  // namespace pushgrasp
