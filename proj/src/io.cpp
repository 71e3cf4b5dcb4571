#include "pushgrasp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace pushgrasp {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const char* what) {
  if (!obj.is_object()) throw Error(Errc::InvalidInput, std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw Error(Errc::InvalidInput, std::string("unknown key '") + key + "' in " + what);
  }
}

template <class T>
void read_if(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(Errc::InvalidInput, std::string("bad value for '") + key + "'");
  }
}

void apply_gripper(const Json& j, Gripper& g) {
  check_keys(j, {"w_max", "jaw_length", "jaw_thickness", "f_g"}, "gripper");
  read_if(j, "w_max", g.max_opening);
  read_if(j, "jaw_length", g.jaw_length);
  read_if(j, "jaw_thickness", g.jaw_thickness);
  read_if(j, "f_g", g.max_force);
}

Json gripper_json(const Gripper& g) {
  return Json{{"w_max", g.max_opening}, {"jaw_length", g.jaw_length}, {"jaw_thickness", g.jaw_thickness},
              {"f_g", g.max_force}};
}

Json pose_json(const Pose2d& p) { return Json::array({p.x, p.y, p.theta}); }

Pose2d pose_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(Errc::InvalidInput, "pose must be [x, y, theta]");
  return Pose2d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Json polygon_json(const Polygon& poly) {
  Json v = Json::array();
  for (const auto& p : poly.vertices()) v.push_back(Json::array({p.x(), p.y()}));
  return v;
}

Polygon polygon_from(const Json& j) {
  if (!j.is_array()) throw Error(Errc::InvalidInput, "vertices must be a list of [x, y]");
  std::vector<Point2> pts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw Error(Errc::InvalidInput, "vertex must be [x, y]");
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return Polygon::from_points(pts);
}

Json scene_objects_json(const Scene& scene) {
  Json objs = Json::array();
  for (const auto& o : scene.objects) {
    objs.push_back(Json{{"id", o.id}, {"vertices", polygon_json(o.shape)}, {"pose", pose_json(o.pose)}});
  }
  return objs;
}

Scene scene_from(const Json& objs) {
  if (!objs.is_array()) throw Error(Errc::InvalidInput, "scene must be a list of objects");
  Scene scene;
  int next_id = 0;
  for (const auto& o : objs) {
    check_keys(o, {"id", "vertices", "pose"}, "scene object");
    SceneObject obj;
    obj.id = o.contains("id") ? o.at("id").get<int>() : next_id;
    next_id = obj.id + 1;
    obj.shape = polygon_from(o.at("vertices"));
    obj.pose = pose_from(o.at("pose"));
    if (scene.find(obj.id)) throw Error(Errc::InvalidInput, "duplicate object id " + std::to_string(obj.id));
    scene.objects.push_back(std::move(obj));
  }
  return scene;
}

Json contact_json(const Contact& c) {
  auto body = [](const BodyRef& b) -> Json {
    switch (b.kind) {
      case BodyRef::Kind::LeftJaw: return "left_jaw";
      case BodyRef::Kind::RightJaw: return "right_jaw";
      case BodyRef::Kind::Object: return b.id;
    }
    return nullptr;
  };
  return Json{{"a", body(c.body_a)},
              {"b", body(c.body_b)},
              {"point", Json::array({c.point.x(), c.point.y()})},
              {"normal", Json::array({c.normal.x(), c.normal.y()})},
              {"depth", c.depth}};
}

Json ids_json(const std::vector<ObjectId>& ids) {
  Json a = Json::array();
  for (ObjectId id : ids) a.push_back(id);
  return a;
}

}  // namespace

Config parse_config(const std::string& text, Config base) {
  const Json j = parse_json(text);
  if (j.is_object() && j.contains("w_max")) {
    apply_gripper(j, base.gripper);
    return base;
  }
  check_keys(j, {"gripper", "sim", "planner", "picking"}, "config");
  if (j.contains("gripper")) apply_gripper(j.at("gripper"), base.gripper);
  if (j.contains("sim")) {
    const Json& s = j.at("sim");
    check_keys(s, {"jaw_step", "penetration_tol", "max_projection_iters", "angle_tol", "escape_margin"}, "sim");
    read_if(s, "jaw_step", base.sim.jaw_step);
    read_if(s, "penetration_tol", base.sim.penetration_tol);
    read_if(s, "max_projection_iters", base.sim.max_projection_iters);
    read_if(s, "angle_tol", base.sim.angle_tol);
    read_if(s, "escape_margin", base.sim.escape_margin);
  }
  if (j.contains("planner")) {
    const Json& p = j.at("planner");
    check_keys(p, {"n_positions", "n_orientations", "strategy", "seed"}, "planner");
    read_if(p, "n_positions", base.planner.n_positions);
    read_if(p, "n_orientations", base.planner.n_orientations);
    read_if(p, "seed", base.planner.rng_seed);
    if (p.contains("strategy")) base.planner.strategy = parse_strategy(p.at("strategy").get<std::string>());
  }
  if (j.contains("picking")) {
    const Json& p = j.at("picking");
    check_keys(p, {"time_limit", "attempt_limit"}, "picking");
    read_if(p, "time_limit", base.picking.time_limit);
    read_if(p, "attempt_limit", base.picking.attempt_limit);
  }
  base.gripper.validate();
  base.sim.validate(base.gripper);
  base.planner.validate();
  base.picking.validate();
  return base;
}

Config load_config(const std::string& path, Config base) { return parse_config(read_file(path), std::move(base)); }

std::string config_to_json(const Config& c) {
  Json j{{"gripper", gripper_json(c.gripper)},
         {"sim",
          {{"jaw_step", c.sim.jaw_step},
           {"penetration_tol", c.sim.penetration_tol},
           {"max_projection_iters", c.sim.max_projection_iters},
           {"angle_tol", c.sim.angle_tol},
           {"escape_margin", c.sim.escape_margin}}},
         {"planner",
          {{"n_positions", c.planner.n_positions},
           {"n_orientations", c.planner.n_orientations},
           {"strategy", strategy_name(c.planner.strategy)},
           {"seed", c.planner.rng_seed}}},
         {"picking", {{"time_limit", c.picking.time_limit}, {"attempt_limit", c.picking.attempt_limit}}}};
  return j.dump(2) + "\n";
}

std::string gripper_to_json(const Gripper& gripper) { return gripper_json(gripper).dump(2) + "\n"; }

std::string shape_library_to_json(const ShapeLibrary& shapes, std::uint64_t seed) {
  Json list = Json::array();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    list.push_back(Json{{"index", i}, {"vertices", polygon_json(shapes[i])}});
  }
  return Json{{"seed", seed}, {"shapes", list}}.dump(2) + "\n";
}

ShapeLibrary parse_shape_library(const std::string& text) {
  const Json j = parse_json(text);
  check_keys(j, {"seed", "shapes"}, "shape library");
  ShapeLibrary out;
  for (const auto& s : j.at("shapes")) out.push_back(polygon_from(s.at("vertices")));
  if (out.empty()) throw Error(Errc::InvalidInput, "shape library is empty");
  return out;
}

std::string scene_to_json(const Scene& scene) { return scene_objects_json(scene).dump(2) + "\n"; }

Scene parse_scene(const std::string& text) {
  const Json j = parse_json(text);
  if (j.is_object() && j.contains("scenes")) {
    const auto set = parse_scene_set(text);
    if (set.size() != 1) throw Error(Errc::InvalidInput, "expected a single scene");
    return set.front().scene;
  }
  return scene_from(j);
}

std::string scene_set_to_json(const std::vector<LabeledScene>& scenes) {
  Json list = Json::array();
  for (const auto& s : scenes) {
    list.push_back(
        Json{{"class", s.grasp_class}, {"index", s.index}, {"seed", s.seed}, {"objects", scene_objects_json(s.scene)}});
  }
  return Json{{"scenes", list}}.dump(1) + "\n";
}

std::vector<LabeledScene> parse_scene_set(const std::string& text) {
  const Json j = parse_json(text);
  std::vector<LabeledScene> out;
  if (j.is_array()) {
    out.push_back(LabeledScene{0, 0, 0, scene_from(j)});
    return out;
  }
  check_keys(j, {"scenes"}, "scene set");
  for (const auto& s : j.at("scenes")) {
    check_keys(s, {"class", "index", "seed", "objects"}, "scene entry");
    LabeledScene ls;
    read_if(s, "class", ls.grasp_class);
    read_if(s, "index", ls.index);
    read_if(s, "seed", ls.seed);
    ls.scene = scene_from(s.at("objects"));
    out.push_back(std::move(ls));
  }
  return out;
}

std::string plan_result_to_json(const PlanResult& r, const ObjectGroup& group, Strategy strategy) {
  Json j{{"strategy", strategy_name(strategy)},
         {"group", ids_json(group.member_ids)},
         {"found", r.grasp.has_value()},
         {"grasp", r.grasp ? pose_json(r.grasp->pose) : Json(nullptr)},
         {"tested_in_sim", r.tested_in_sim},
         {"filtered_out", r.filtered_out},
         {"candidates_total", r.candidates_total},
         {"sim_iterations", r.sim_iterations}};
  return j.dump(2) + "\n";
}

std::optional<Grasp> parse_plan_grasp(const std::string& text) {
  const Json j = parse_json(text);
  if (!j.is_object() || !j.contains("grasp")) throw Error(Errc::InvalidInput, "not a plan file");
  if (j.at("grasp").is_null()) return std::nullopt;
  return Grasp{pose_from(j.at("grasp"))};
}

std::string picking_report_to_json(const PickingReport& r) {
  Json attempts = Json::array();
  for (const auto& a : r.attempts) {
    attempts.push_back(Json{{"group", ids_json(a.group.member_ids)},
                            {"grasp", pose_json(a.grasp.pose)},
                            {"tested_in_sim", a.tested_in_sim},
                            {"success", a.success},
                            {"picked", ids_json(a.picked)}});
  }
  Json j{{"grasp_attempts", r.grasp_attempts},
         {"successful_attempts", r.successful_attempts},
         {"objects_picked", r.objects_picked},
         {"objects_total", r.objects_total},
         {"actions_used", r.actions_used},
         {"success_rate", r.success_rate()},
         {"percent_picked", r.percent_picked()},
         {"cleared", r.cleared},
         {"time_limited", r.time_limited},
         {"attempts", attempts}};
  return j.dump(2) + "\n";
}

void write_trace_jsonl(std::ostream& out, const SqueezeTrace& trace) {
  for (const auto& f : trace) {
    Json poses = Json::array();
    for (const auto& [id, pose] : f.poses) poses.push_back(Json{{"id", id}, {"pose", pose_json(pose)}});
    Json contacts = Json::array();
    for (const auto& c : f.contacts) contacts.push_back(contact_json(c));
    out << Json{{"step", f.step}, {"opening", f.opening}, {"poses", poses}, {"contacts", contacts}}.dump() << '\n';
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidInput, "cannot write " + path);
  out << content;
  if (!out) throw Error(Errc::InvalidInput, "write failed for " + path);
}

}  // namespace pushgrasp
