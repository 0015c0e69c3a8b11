#include "crowdsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "crowdsim/errors.hpp"
#include "json.hpp"

namespace crowdsim {

namespace {

using nlohmann::ordered_json;

constexpr double kSqrt2 = 1.4142135623730951;

std::string vec_str(Vec2 v) {
  std::ostringstream os;
  os << "(" << v.x << ", " << v.y << ")";
  return os.str();
}

double require_finite_number(const ordered_json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(what + " must be finite");
  return v;
}

Vec2 parse_point(const ordered_json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ParseError(what + " must be an [x, y] pair");
  return {require_finite_number(j[0], what + "[0]"), require_finite_number(j[1], what + "[1]")};
}

Polygon parse_polygon(const ordered_json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of [x, y] pairs");
  Polygon poly;
  poly.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    poly.push_back(parse_point(j[i], what + "[" + std::to_string(i) + "]"));
  }
  return poly;
}

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ParseError("unknown key \"" + key + "\" in " + where);
  }
}

ordered_json point_json(Vec2 v) { return ordered_json::array({v.x, v.y}); }

}  // namespace

// ---------------------------------------------------------------------------
// Loading / saving

Scene scene_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scene file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scene file must contain a JSON object");
  reject_unknown_keys(
      j, {"version", "name", "floor", "obstacles", "grid_resolution", "humans", "episodes"},
      "scene");

  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1) {
    throw ParseError("scene \"version\" must be the integer 1");
  }

  Scene scene;
  scene.name = j.value("name", std::string{});
  if (!j.contains("floor")) throw ParseError("scene is missing \"floor\"");
  scene.floor = parse_polygon(j["floor"], "floor");

  if (j.contains("obstacles")) {
    const auto& obs = j["obstacles"];
    if (!obs.is_array()) throw ParseError("\"obstacles\" must be an array of polygons");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      scene.obstacles.push_back(parse_polygon(obs[i], "obstacle " + std::to_string(i)));
    }
  }

  if (j.contains("grid_resolution")) {
    scene.grid_resolution = require_finite_number(j["grid_resolution"], "grid_resolution");
  }

  if (j.contains("humans")) {
    const auto& humans = j["humans"];
    if (!humans.is_array()) throw ParseError("\"humans\" must be an array");
    for (std::size_t i = 0; i < humans.size(); ++i) {
      const auto& h = humans[i];
      const std::string where = "humans[" + std::to_string(i) + "]";
      if (!h.is_object()) throw ParseError(where + " must be an object");
      reject_unknown_keys(h,
                          {"id", "position", "destination", "radius", "mass", "desired_speed",
                           "desired_angular_speed", "heading"},
                          where);
      HumanSpec spec;
      if (!h.contains("id") || !h["id"].is_number_integer()) {
        throw ParseError(where + " needs an integer \"id\"");
      }
      spec.id = h["id"].get<int>();
      if (!h.contains("position")) throw ParseError(where + " needs \"position\"");
      spec.position = parse_point(h["position"], where + ".position");
      if (!h.contains("destination")) throw ParseError(where + " needs \"destination\"");
      spec.destination = parse_point(h["destination"], where + ".destination");
      if (h.contains("radius")) spec.radius = require_finite_number(h["radius"], where + ".radius");
      if (h.contains("mass")) spec.mass = require_finite_number(h["mass"], where + ".mass");
      if (h.contains("desired_speed")) {
        spec.desired_speed = require_finite_number(h["desired_speed"], where + ".desired_speed");
      }
      if (h.contains("desired_angular_speed")) {
        spec.desired_angular_speed =
            require_finite_number(h["desired_angular_speed"], where + ".desired_angular_speed");
      }
      if (h.contains("heading")) {
        spec.heading = require_finite_number(h["heading"], where + ".heading");
      }
      scene.humans.push_back(spec);
    }
  }

  if (j.contains("episodes")) {
    const auto& eps = j["episodes"];
    if (!eps.is_array()) throw ParseError("\"episodes\" must be an array");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const auto& e = eps[i];
      const std::string where = "episodes[" + std::to_string(i) + "]";
      if (!e.is_object()) throw ParseError(where + " must be an object");
      reject_unknown_keys(e, {"agent_start", "agent_heading", "goal"}, where);
      EpisodeSpec spec;
      if (!e.contains("agent_start")) throw ParseError(where + " needs \"agent_start\"");
      spec.agent_start = parse_point(e["agent_start"], where + ".agent_start");
      if (!e.contains("goal")) throw ParseError(where + " needs \"goal\"");
      spec.goal = parse_point(e["goal"], where + ".goal");
      if (e.contains("agent_heading")) {
        spec.agent_heading = require_finite_number(e["agent_heading"], where + ".agent_heading");
      }
      scene.episodes.push_back(spec);
    }
  }

  normalize_winding(scene.floor);
  for (auto& obs : scene.obstacles) normalize_winding(obs);
  validate_scene(scene);
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

std::string scene_to_json_text(const Scene& scene) {
  ordered_json j;
  j["version"] = 1;
  j["name"] = scene.name;
  ordered_json floor = ordered_json::array();
  for (Vec2 v : scene.floor) floor.push_back(point_json(v));
  j["floor"] = floor;
  ordered_json obstacles = ordered_json::array();
  for (const auto& obs : scene.obstacles) {
    ordered_json poly = ordered_json::array();
    for (Vec2 v : obs) poly.push_back(point_json(v));
    obstacles.push_back(poly);
  }
  j["obstacles"] = obstacles;
  j["grid_resolution"] = scene.grid_resolution;
  ordered_json humans = ordered_json::array();
  for (const auto& h : scene.humans) {
    ordered_json hj;
    hj["id"] = h.id;
    hj["position"] = point_json(h.position);
    hj["destination"] = point_json(h.destination);
    hj["radius"] = h.radius;
    hj["mass"] = h.mass;
    hj["desired_speed"] = h.desired_speed;
    hj["desired_angular_speed"] = h.desired_angular_speed;
    hj["heading"] = h.heading;
    humans.push_back(hj);
  }
  j["humans"] = humans;
  ordered_json episodes = ordered_json::array();
  for (const auto& e : scene.episodes) {
    ordered_json ej;
    ej["agent_start"] = point_json(e.agent_start);
    ej["agent_heading"] = e.agent_heading;
    ej["goal"] = point_json(e.goal);
    episodes.push_back(ej);
  }
  j["episodes"] = episodes;
  return j.dump(2) + "\n";
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scene file: " + path.string());
  out << scene_to_json_text(scene);
  if (!out) throw IoError("failed writing scene file: " + path.string());
}

// ---------------------------------------------------------------------------
// Validation

void validate_scene(const Scene& scene) {
  if (scene.floor.size() < 3) throw ValidationError("floor polygon needs at least 3 vertices");
  if (!is_simple_polygon(scene.floor)) throw ValidationError("floor polygon is self-intersecting");
  if (!(scene.grid_resolution > 0.0) || !std::isfinite(scene.grid_resolution)) {
    throw ValidationError("grid_resolution must be positive");
  }
  for (std::size_t k = 0; k < scene.obstacles.size(); ++k) {
    const auto& obs = scene.obstacles[k];
    if (obs.size() < 3) {
      throw ValidationError("obstacle " + std::to_string(k) + " needs at least 3 vertices");
    }
    if (!is_simple_polygon(obs)) {
      throw ValidationError("obstacle " + std::to_string(k) + " is self-intersecting");
    }
  }
  if (!(navigable_area(scene) > 0.0)) throw ValidationError("scene has no navigable area");

  std::set<int> ids;
  for (const auto& h : scene.humans) {
    if (!ids.insert(h.id).second) {
      throw ValidationError("duplicate human id " + std::to_string(h.id));
    }
  }

  for (const auto& h : scene.humans) {
    const std::string who = "human " + std::to_string(h.id);
    if (!(h.radius > 0.0)) throw ValidationError(who + " has non-positive radius");
    if (!(h.mass > 0.0)) throw ValidationError(who + " has non-positive mass");
    if (h.desired_speed < 0.0) throw ValidationError(who + " has negative desired_speed");
    if (h.desired_angular_speed < 0.0) {
      throw ValidationError(who + " has negative desired_angular_speed");
    }
    for (const char* label : {"start", "destination"}) {
      const Vec2 p = (label[0] == 's') ? h.position : h.destination;
      if (!point_in_polygon(p, scene.floor)) {
        throw ValidationError(who + " " + label + " " + vec_str(p) + " is outside the floor");
      }
      for (std::size_t k = 0; k < scene.obstacles.size(); ++k) {
        const double sd = polygon_signed_distance(p, scene.obstacles[k]);
        if (sd < h.radius) {
          throw ValidationError(who + " " + label + " overlaps obstacle " + std::to_string(k));
        }
      }
    }
  }

  for (std::size_t i = 0; i < scene.humans.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.humans.size(); ++j) {
      const auto& a = scene.humans[i];
      const auto& b = scene.humans[j];
      const double skin = distance(a.position, b.position) - a.radius - b.radius;
      if (skin <= 0.0) {
        throw ValidationError("human " + std::to_string(a.id) + " overlaps human " +
                              std::to_string(b.id) + " at start");
      }
    }
  }

  const OccupancyGrid grid = build_grid(scene);
  for (const auto& h : scene.humans) {
    const std::string who = "human " + std::to_string(h.id);
    if (!geodesic_distance(grid, h.position, h.destination)) {
      throw ValidationError(who + " cannot reach its destination");
    }
  }
  for (std::size_t i = 0; i < scene.episodes.size(); ++i) {
    const auto& e = scene.episodes[i];
    const std::string which = "episode " + std::to_string(i);
    if (!point_in_polygon(e.agent_start, scene.floor)) {
      throw ValidationError(which + " agent_start is outside the floor");
    }
    if (!point_in_polygon(e.goal, scene.floor)) {
      throw ValidationError(which + " goal is outside the floor");
    }
    if (!geodesic_distance(grid, e.agent_start, e.goal)) {
      throw ValidationError(which + " goal is unreachable from its start");
    }
  }
}

// ---------------------------------------------------------------------------
// Area and distance queries

double navigable_area(const Scene& scene) {
  double area = polygon_area(scene.floor);
  for (const auto& obs : scene.obstacles) {
    area -= polygon_intersection_area(obs, scene.floor);
  }
  return area;
}

double human_density(const Scene& scene) {
  if (scene.humans.empty()) return 0.0;
  return static_cast<double>(scene.humans.size()) / navigable_area(scene);
}

double distance_to_obstacles(const Scene& scene, Vec2 p) {
  double d = distance_to_polygon_boundary(p, scene.floor);
  bool free = point_in_polygon(p, scene.floor);
  for (const auto& obs : scene.obstacles) {
    d = std::min(d, distance_to_polygon_boundary(p, obs));
    if (point_in_polygon(p, obs) && distance_to_polygon_boundary(p, obs) > 0.0) free = false;
  }
  return free ? d : -d;
}

// ---------------------------------------------------------------------------
// Occupancy grid

OccupancyGrid build_grid(const Scene& scene) {
  OccupancyGrid grid;
  grid.resolution = scene.grid_resolution;
  double min_x = scene.floor[0].x, max_x = min_x;
  double min_y = scene.floor[0].y, max_y = min_y;
  for (Vec2 v : scene.floor) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  grid.origin = {min_x, min_y};
  grid.width = std::max(1, static_cast<int>(std::ceil((max_x - min_x) / grid.resolution - 1e-9)));
  grid.height = std::max(1, static_cast<int>(std::ceil((max_y - min_y) / grid.resolution - 1e-9)));

  double inflation = kDefaultHumanRadius;
  for (const auto& h : scene.humans) inflation = std::max(inflation, h.radius);
  grid.inflation = inflation;

  grid.cells.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);
  for (int cy = 0; cy < grid.height; ++cy) {
    for (int cx = 0; cx < grid.width; ++cx) {
      const Vec2 c = grid.cell_center(cx, cy);
      bool blocked = !point_in_polygon(c, scene.floor) ||
                     distance_to_polygon_boundary(c, scene.floor) < inflation;
      if (!blocked) {
        for (const auto& obs : scene.obstacles) {
          if (point_in_polygon(c, obs) || distance_to_polygon_boundary(c, obs) < inflation) {
            blocked = true;
            break;
          }
        }
      }
      grid.cells[static_cast<std::size_t>(grid.index(cx, cy))] = blocked ? 1 : 0;
    }
  }
  return grid;
}

std::optional<std::pair<int, int>> OccupancyGrid::cell_of(Vec2 p) const {
  const int cx = static_cast<int>(std::floor((p.x - origin.x) / resolution));
  const int cy = static_cast<int>(std::floor((p.y - origin.y) / resolution));
  if (!in_bounds(cx, cy)) return std::nullopt;
  return std::make_pair(cx, cy);
}

bool OccupancyGrid::is_free_point(Vec2 p) const {
  const auto c = cell_of(p);
  return c && !is_blocked(c->first, c->second);
}

bool OccupancyGrid::segment_free(Vec2 a, Vec2 b) const {
  const auto ca = cell_of(a);
  const auto cb = cell_of(b);
  if (!ca || !cb) return false;
  int x = ca->first, y = ca->second;
  const int xe = cb->first, ye = cb->second;
  if (is_blocked(x, y) || is_blocked(xe, ye)) return false;

  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;
  const double inf = std::numeric_limits<double>::infinity();
  // Parametric distance to the next vertical/horizontal cell border.
  auto border_t = [&](double start, double origin_c, int cell, int step, double delta) {
    if (delta == 0.0) return inf;
    const double edge = origin_c + (cell + (step > 0 ? 1 : 0)) * resolution;
    return (edge - start) / delta;
  };
  double t_max_x = border_t(a.x, origin.x, x, sx, dx);
  double t_max_y = border_t(a.y, origin.y, y, sy, dy);
  const double t_delta_x = dx == 0.0 ? inf : resolution / std::abs(dx);
  const double t_delta_y = dy == 0.0 ? inf : resolution / std::abs(dy);

  int guard = 2 * (width + height) + 4;
  while ((x != xe || y != ye) && guard-- > 0) {
    if (std::abs(t_max_x - t_max_y) < 1e-12) {
      // Corner crossing: both side cells must be free.
      if (in_bounds(x + sx, y) && is_blocked(x + sx, y)) return false;
      if (in_bounds(x, y + sy) && is_blocked(x, y + sy)) return false;
      x += sx;
      y += sy;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      x += sx;
      t_max_x += t_delta_x;
    } else {
      y += sy;
      t_max_y += t_delta_y;
    }
    if (!in_bounds(x, y) || is_blocked(x, y)) return false;
  }
  return guard > 0;
}

// ---------------------------------------------------------------------------
// Grid search. Costs are tracked as integer (straight, diagonal) move counts
// and folded into meters through one canonical expression, so distances are
// exactly symmetric and reproducible.

namespace {

struct MoveCount {
  int straight = 0;
  int diagonal = 0;
};

double move_length(MoveCount m, double res) {
  return m.straight * res + m.diagonal * (res * kSqrt2);
}

struct PqEntry {
  double f;
  double g;
  int cell;
};

struct PqCmp {
  bool operator()(const PqEntry& a, const PqEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g > b.g;
    return a.cell > b.cell;
  }
};

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

}  // namespace

std::optional<GridPath> grid_shortest_path(const OccupancyGrid& grid, std::pair<int, int> start,
                                           std::pair<int, int> goal) {
  if (!grid.in_bounds(start.first, start.second) || !grid.in_bounds(goal.first, goal.second)) {
    return std::nullopt;
  }
  if (grid.is_blocked(start.first, start.second) || grid.is_blocked(goal.first, goal.second)) {
    return std::nullopt;
  }
  const int n = grid.width * grid.height;
  const int start_i = grid.index(start.first, start.second);
  const int goal_i = grid.index(goal.first, goal.second);

  std::vector<MoveCount> best(static_cast<std::size_t>(n));
  std::vector<double> best_g(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<std::uint8_t> closed(static_cast<std::size_t>(n), 0);

  auto heuristic = [&](int cell) {
    const int cx = cell % grid.width;
    const int cy = cell / grid.width;
    const int adx = std::abs(cx - goal.first);
    const int ady = std::abs(cy - goal.second);
    const MoveCount h{std::abs(adx - ady), std::min(adx, ady)};
    return move_length(h, grid.resolution);
  };

  std::priority_queue<PqEntry, std::vector<PqEntry>, PqCmp> open;
  best[static_cast<std::size_t>(start_i)] = {0, 0};
  best_g[static_cast<std::size_t>(start_i)] = 0.0;
  open.push({heuristic(start_i), 0.0, start_i});

  while (!open.empty()) {
    const PqEntry top = open.top();
    open.pop();
    if (closed[static_cast<std::size_t>(top.cell)]) continue;
    if (top.g != best_g[static_cast<std::size_t>(top.cell)]) continue;
    closed[static_cast<std::size_t>(top.cell)] = 1;
    if (top.cell == goal_i) break;

    const int cx = top.cell % grid.width;
    const int cy = top.cell / grid.width;
    const MoveCount g = best[static_cast<std::size_t>(top.cell)];
    for (int k = 0; k < 8; ++k) {
      const int nx = cx + kDx[k];
      const int ny = cy + kDy[k];
      if (!grid.in_bounds(nx, ny) || grid.is_blocked(nx, ny)) continue;
      const bool diag = k >= 4;
      if (diag) {
        // No corner cutting past a blocked orthogonal neighbor.
        if (grid.is_blocked(cx + kDx[k], cy) || grid.is_blocked(cx, cy + kDy[k])) continue;
      }
      const MoveCount cand{g.straight + (diag ? 0 : 1), g.diagonal + (diag ? 1 : 0)};
      const double cand_g = move_length(cand, grid.resolution);
      const int ni = grid.index(nx, ny);
      if (cand_g < best_g[static_cast<std::size_t>(ni)]) {
        best[static_cast<std::size_t>(ni)] = cand;
        best_g[static_cast<std::size_t>(ni)] = cand_g;
        parent[static_cast<std::size_t>(ni)] = top.cell;
        open.push({cand_g + heuristic(ni), cand_g, ni});
      }
    }
  }

  if (!closed[static_cast<std::size_t>(goal_i)]) return std::nullopt;
  GridPath path;
  path.length = best_g[static_cast<std::size_t>(goal_i)];
  for (int cur = goal_i; cur != -1; cur = parent[static_cast<std::size_t>(cur)]) {
    path.cells.emplace_back(cur % grid.width, cur / grid.width);
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

std::optional<double> geodesic_distance(const OccupancyGrid& grid, Vec2 a, Vec2 b) {
  const auto ca = grid.cell_of(a);
  const auto cb = grid.cell_of(b);
  if (!ca || !cb) return std::nullopt;
  const auto path = grid_shortest_path(grid, *ca, *cb);
  if (!path) return std::nullopt;
  return path->length;
}

std::vector<double> distance_field(const OccupancyGrid& grid, Vec2 source) {
  const int n = grid.width * grid.height;
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  const auto cs = grid.cell_of(source);
  if (!cs || grid.is_blocked(cs->first, cs->second)) return dist;

  std::vector<MoveCount> best(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> closed(static_cast<std::size_t>(n), 0);
  std::priority_queue<PqEntry, std::vector<PqEntry>, PqCmp> open;
  const int start_i = grid.index(cs->first, cs->second);
  dist[static_cast<std::size_t>(start_i)] = 0.0;
  open.push({0.0, 0.0, start_i});

  while (!open.empty()) {
    const PqEntry top = open.top();
    open.pop();
    if (closed[static_cast<std::size_t>(top.cell)]) continue;
    closed[static_cast<std::size_t>(top.cell)] = 1;
    const int cx = top.cell % grid.width;
    const int cy = top.cell / grid.width;
    const MoveCount g = best[static_cast<std::size_t>(top.cell)];
    for (int k = 0; k < 8; ++k) {
      const int nx = cx + kDx[k];
      const int ny = cy + kDy[k];
      if (!grid.in_bounds(nx, ny) || grid.is_blocked(nx, ny)) continue;
      const bool diag = k >= 4;
      if (diag && (grid.is_blocked(cx + kDx[k], cy) || grid.is_blocked(cx, cy + kDy[k]))) continue;
      const MoveCount cand{g.straight + (diag ? 0 : 1), g.diagonal + (diag ? 1 : 0)};
      const double cand_g = move_length(cand, grid.resolution);
      const int ni = grid.index(nx, ny);
      if (cand_g < dist[static_cast<std::size_t>(ni)]) {
        best[static_cast<std::size_t>(ni)] = cand;
        dist[static_cast<std::size_t>(ni)] = cand_g;
        open.push({cand_g, cand_g, ni});
      }
    }
  }
  return dist;
}

}  // namespace crowdsim
