// Copyright 2026 The stlcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stlcomm/error.hpp"
#include "stlcomm/planner/planner.hpp"

namespace stlcomm::planner {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "/" + key;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ValidationError(join(path, key), "unknown field");
  }
}

const json& object_at(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  return j;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(path, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ValidationError(path, "expected true or false");
  return j.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path, std::size_t size) {
  if (!j.is_array() || j.size() != size) {
    throw ValidationError(path, "expected an array of " + std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < size; ++k) out.push_back(number(j[k], join(path, std::to_string(k))));
  return out;
}

template <typename F>
void optional_field(const json& obj, const std::string& path, const char* key, F&& read) {
  if (auto it = obj.find(key); it != obj.end()) read(*it, join(path, key));
}

const json& required_field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(join(path, key), "missing required field");
  return *it;
}

// {"faces": [{"a": [a1, a2], "b": b}, ...]} or {"box": [x0, x1, y0, y1]}.
Polytope polytope(const json& j, const std::string& path) {
  object_at(j, path);
  reject_unknown(j, path, {"faces", "box"});
  const bool has_faces = j.contains("faces");
  const bool has_box = j.contains("box");
  if (has_faces == has_box) throw ValidationError(path, "give exactly one of faces or box");
  if (has_box) {
    const auto b = numbers(j["box"], join(path, "box"), 4);
    if (!(b[0] < b[1]) || !(b[2] < b[3])) throw ValidationError(join(path, "box"), "empty box");
    return Polytope::box(b[0], b[1], b[2], b[3]);
  }
  const std::string fp = join(path, "faces");
  const json& faces = j["faces"];
  if (!faces.is_array()) throw ValidationError(fp, "expected an array of faces");
  Polytope out;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const std::string at = join(fp, std::to_string(k));
    object_at(faces[k], at);
    reject_unknown(faces[k], at, {"a", "b"});
    const auto a = numbers(required_field(faces[k], at, "a"), join(at, "a"), 2);
    out.faces.push_back({{a[0], a[1]}, number(required_field(faces[k], at, "b"), join(at, "b"))});
  }
  return out;
}

template <int R, int C>
Eigen::Matrix<double, R, C> matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != R) {
    throw ValidationError(path, "expected " + std::to_string(R) + " rows of " + std::to_string(C));
  }
  Eigen::Matrix<double, R, C> m;
  for (int r = 0; r < R; ++r) {
    const auto row = numbers(j[r], join(path, std::to_string(r)), C);
    for (int c = 0; c < C; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

}  // namespace

Scenario load_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
  object_at(doc, "");
  reject_unknown(doc, "",
                 {"schema_version", "T_f", "dt", "agents", "obstacles", "obstacle_buffer", "u_max", "v_max",
                  "H", "d1", "d2", "q", "r", "alpha", "M", "epsilon", "grid", "channel", "A_d", "B_d",
                  "collision_mode", "obstacle_mode", "pairs", "baseline", "occupancy_tightening"});
  const int version = integer(required_field(doc, "", "schema_version"), "schema_version");
  if (version != kScenarioSchemaVersion) {
    throw ValidationError("schema_version", "unsupported version " + std::to_string(version) + ", expected " +
                                                std::to_string(kScenarioSchemaVersion));
  }

  Scenario s;
  s.horizon = integer(required_field(doc, "", "T_f"), "T_f");
  optional_field(doc, "", "dt", [&](const json& j, const std::string& p) { s.dt = number(j, p); });
  optional_field(doc, "", "obstacle_buffer",
                 [&](const json& j, const std::string& p) { s.obstacle_buffer = number(j, p); });
  s.u_max = number(required_field(doc, "", "u_max"), "u_max");
  s.v_max = number(required_field(doc, "", "v_max"), "v_max");
  optional_field(doc, "", "H", [&](const json& j, const std::string& p) { s.polygon_sides = integer(j, p); });
  s.d1 = number(required_field(doc, "", "d1"), "d1");
  s.d2 = number(required_field(doc, "", "d2"), "d2");
  optional_field(doc, "", "q", [&](const json& j, const std::string& p) {
    const auto v = numbers(j, p, 4);
    std::copy(v.begin(), v.end(), s.q.begin());
  });
  optional_field(doc, "", "r", [&](const json& j, const std::string& p) {
    const auto v = numbers(j, p, 2);
    std::copy(v.begin(), v.end(), s.r.begin());
  });
  s.alpha = number(required_field(doc, "", "alpha"), "alpha");
  optional_field(doc, "", "M", [&](const json& j, const std::string& p) { s.big_m = number(j, p); });
  optional_field(doc, "", "epsilon", [&](const json& j, const std::string& p) { s.epsilon = number(j, p); });
  optional_field(doc, "", "baseline", [&](const json& j, const std::string& p) { s.baseline = boolean(j, p); });
  optional_field(doc, "", "occupancy_tightening",
                 [&](const json& j, const std::string& p) { s.occupancy_tightening = boolean(j, p); });

  {
    const json& g = object_at(required_field(doc, "", "grid"), "grid");
    reject_unknown(g, "grid", {"N", "d", "x_min", "y_min"});
    s.grid.N = integer(required_field(g, "grid", "N"), "grid/N");
    s.grid.d = number(required_field(g, "grid", "d"), "grid/d");
    optional_field(g, "grid", "x_min", [&](const json& j, const std::string& p) { s.grid.x_min = number(j, p); });
    optional_field(g, "grid", "y_min", [&](const json& j, const std::string& p) { s.grid.y_min = number(j, p); });
  }

  optional_field(doc, "", "channel", [&](const json& c, const std::string& path) {
    object_at(c, path);
    reject_unknown(c, path, {"L0", "n_l", "sigma_F_sq", "sigma_k_sq", "l", "training_samples", "epsilon_rssi"});
    auto& h = s.channel.hyperparams;
    optional_field(c, path, "L0", [&](const json& j, const std::string& p) { h.L0 = number(j, p); });
    optional_field(c, path, "n_l", [&](const json& j, const std::string& p) { h.n_l = number(j, p); });
    optional_field(c, path, "sigma_F_sq", [&](const json& j, const std::string& p) { h.sigma_F_sq = number(j, p); });
    optional_field(c, path, "sigma_k_sq", [&](const json& j, const std::string& p) { h.sigma_k_sq = number(j, p); });
    optional_field(c, path, "l", [&](const json& j, const std::string& p) { h.length_scale = number(j, p); });
    optional_field(c, path, "epsilon_rssi",
                   [&](const json& j, const std::string& p) { s.channel.rssi_exclusion_db = number(j, p); });
    optional_field(c, path, "training_samples", [&](const json& j, const std::string& p) {
      if (!j.is_string()) throw ValidationError(p, "expected a file path");
      std::filesystem::path tp = j.get<std::string>();
      if (tp.is_relative() && !base_dir.empty()) tp = base_dir / tp;
      s.channel.training_path = tp.string();
    });
  });

  s.A_d = encoder::double_integrator_A(s.dt);
  s.B_d = encoder::double_integrator_B(s.dt);
  optional_field(doc, "", "A_d", [&](const json& j, const std::string& p) { s.A_d = matrix<4, 4>(j, p); });
  optional_field(doc, "", "B_d", [&](const json& j, const std::string& p) { s.B_d = matrix<4, 2>(j, p); });

  optional_field(doc, "", "collision_mode", [&](const json& j, const std::string& p) {
    const std::string v = j.is_string() ? j.get<std::string>() : "";
    if (v == "conjunction") {
      s.collision_mode = stl::CollisionMode::kConjunction;
    } else if (v == "disjunction") {
      s.collision_mode = stl::CollisionMode::kDisjunction;
    } else {
      throw ValidationError(p, "expected \"conjunction\" or \"disjunction\"");
    }
  });
  optional_field(doc, "", "obstacle_mode", [&](const json& j, const std::string& p) {
    const std::string v = j.is_string() ? j.get<std::string>() : "";
    if (v == "conjunction") {
      s.obstacle_mode = stl::ObstacleMode::kConjunction;
    } else if (v == "disjunction") {
      s.obstacle_mode = stl::ObstacleMode::kDisjunction;
    } else {
      throw ValidationError(p, "expected \"conjunction\" or \"disjunction\"");
    }
  });

  {
    const json& agents = required_field(doc, "", "agents");
    if (!agents.is_array()) throw ValidationError("agents", "expected an array");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const std::string path = "agents/" + std::to_string(i);
      const json& a = object_at(agents[i], path);
      reject_unknown(a, path, {"initial_state", "mass", "goal"});
      encoder::AgentSpec spec;
      const auto x0 = numbers(required_field(a, path, "initial_state"), join(path, "initial_state"), 4);
      std::copy(x0.begin(), x0.end(), spec.initial_state.begin());
      optional_field(a, path, "mass", [&](const json& j, const std::string& p) { spec.mass = number(j, p); });
      spec.goal = polytope(required_field(a, path, "goal"), join(path, "goal"));
      s.agents.push_back(std::move(spec));
    }
  }
  optional_field(doc, "", "obstacles", [&](const json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array");
    for (std::size_t k = 0; k < j.size(); ++k) s.obstacles.push_back(polytope(j[k], join(path, std::to_string(k))));
  });
  optional_field(doc, "", "pairs", [&](const json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array of [sender, receiver]");
    for (std::size_t k = 0; k < j.size(); ++k) {
      const std::string at = join(path, std::to_string(k));
      if (!j[k].is_array() || j[k].size() != 2) throw ValidationError(at, "expected [sender, receiver]");
      s.pairs.emplace_back(integer(j[k][0], join(at, "0")), integer(j[k][1], join(at, "1")));
    }
  });

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return load_scenario(text.str(), path.parent_path());
}

}  // namespace stlcomm::planner
