/// @file  scenario.hpp
/// @brief Deterministic drone-swarm scenario generator emitting proximity-graph traces

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "strel/error.hpp"
#include "strel/trace_io.hpp"

namespace strel {

struct vec2 {
  double x = 0.0;
  double y = 0.0;

  friend vec2 operator+(vec2 a, vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend vec2 operator-(vec2 a, vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend vec2 operator*(double k, vec2 a) { return {k * a.x, k * a.y}; }
  friend bool operator==(const vec2 &, const vec2 &) = default;
};

inline double norm(vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

struct circle {
  vec2 center;
  double radius = 1.0;
};

struct scenario_config {
  std::uint64_t seed = 1;
  std::size_t drones = 10;
  std::size_t stations = 5;
  std::size_t obstacles = 23;
  /// Side length of the square map, in meters
  double extent = 200.0;
  circle goal{{100.0, 100.0}, 10.0};
  /// Explicit placements; when given they override the counts above
  std::optional<std::vector<vec2>> station_positions;
  std::optional<std::vector<vec2>> drone_positions;
  std::optional<std::vector<circle>> obstacle_list;
  double obstacle_radius_min = 3.0;
  double obstacle_radius_max = 8.0;
  double period_ms = 10.0;
  std::size_t steps = 6001;
  /// Link radius when either endpoint is a ground station
  double radius_station = 40.0;
  /// Link radius between two drones
  double radius_drone = 30.0;
  /// Drone speed limit, in meters per second
  double max_speed = 5.0;
};

namespace detail {

inline vec2 read_vec(const json &j, const char *what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw config_error(std::string(what) + " must be a pair [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline circle read_circle(const json &j, const char *what) {
  if (!j.is_object() || !j.contains("center") || !j.contains("radius") || !j["radius"].is_number())
    throw config_error(std::string(what) + " must be {\"center\":[x,y], \"radius\":r}");
  return {read_vec(j["center"], what), j["radius"].get<double>()};
}

template <class T> T read_number(const json &j, const char *key) {
  if (!j.is_number())
    throw config_error(std::string("\"") + key + "\" must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                   j.get<std::int64_t>() < 0))
      throw config_error(std::string("\"") + key + "\" must be a non-negative integer");
  }
  return j.get<T>();
}

/// Uniform double in `[0, 1)` from the top 53 bits of one draw
inline double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

} // namespace detail

/// Reads a configuration object; unknown keys are rejected
inline scenario_config parse_config(const json &j) {
  using detail::read_number;
  if (!j.is_object())
    throw config_error("scenario configuration must be an object");
  scenario_config c;
  for (const auto &[key, v] : j.items()) {
    if (key == "seed")
      c.seed = read_number<std::uint64_t>(v, "seed");
    else if (key == "drones")
      c.drones = read_number<std::size_t>(v, "drones");
    else if (key == "stations")
      c.stations = read_number<std::size_t>(v, "stations");
    else if (key == "obstacles")
      c.obstacles = read_number<std::size_t>(v, "obstacles");
    else if (key == "extent")
      c.extent = read_number<double>(v, "extent");
    else if (key == "goal")
      c.goal = detail::read_circle(v, "goal");
    else if (key == "station_positions" || key == "drone_positions") {
      if (!v.is_array())
        throw config_error("\"" + key + "\" must be a list of [x, y] pairs");
      std::vector<vec2> ps;
      for (const auto &p : v)
        ps.push_back(detail::read_vec(p, key.c_str()));
      (key == "station_positions" ? c.station_positions : c.drone_positions) = std::move(ps);
    } else if (key == "obstacle_list") {
      if (!v.is_array())
        throw config_error("\"obstacle_list\" must be a list of circles");
      std::vector<circle> os;
      for (const auto &o : v)
        os.push_back(detail::read_circle(o, "obstacle"));
      c.obstacle_list = std::move(os);
    } else if (key == "obstacle_radius") {
      if (!v.is_array() || v.size() != 2)
        throw config_error("\"obstacle_radius\" must be a range [min, max]");
      c.obstacle_radius_min = read_number<double>(v[0], "obstacle_radius");
      c.obstacle_radius_max = read_number<double>(v[1], "obstacle_radius");
    } else if (key == "period_ms")
      c.period_ms = read_number<double>(v, "period_ms");
    else if (key == "steps")
      c.steps = read_number<std::size_t>(v, "steps");
    else if (key == "radius_station")
      c.radius_station = read_number<double>(v, "radius_station");
    else if (key == "radius_drone")
      c.radius_drone = read_number<double>(v, "radius_drone");
    else if (key == "max_speed")
      c.max_speed = read_number<double>(v, "max_speed");
    else
      throw config_error("unknown configuration key \"" + key + "\"");
  }
  if (c.drone_positions)
    c.drones = c.drone_positions->size();
  if (c.station_positions)
    c.stations = c.station_positions->size();
  if (c.obstacle_list)
    c.obstacles = c.obstacle_list->size();
  return c;
}

inline scenario_config load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw config_error("cannot open configuration file '" + path + "'");
  try {
    return parse_config(json::parse(in));
  } catch (const json::exception &e) {
    throw config_error("malformed configuration: " + std::string(e.what()));
  }
}

inline void validate_config(const scenario_config &c) {
  auto positive = [](double v, const char *what) {
    if (!(v > 0) || std::isinf(v))
      throw config_error(std::string(what) + " must be a positive finite number");
  };
  positive(c.extent, "extent");
  positive(c.goal.radius, "goal radius");
  positive(c.period_ms, "period_ms");
  positive(c.radius_station, "radius_station");
  positive(c.radius_drone, "radius_drone");
  positive(c.max_speed, "max_speed");
  positive(c.obstacle_radius_min, "obstacle radius");
  if (c.obstacle_radius_max < c.obstacle_radius_min)
    throw config_error("obstacle radius range is empty");
  if (c.steps < 1)
    throw config_error("steps must be at least 1");
  if (c.drones + c.stations == 0)
    throw config_error("scenario has no drones and no stations");
  if (c.obstacle_list) {
    for (const auto &o : *c.obstacle_list) {
      positive(o.radius, "obstacle radius");
      if (norm(c.goal.center - o.center) < o.radius)
        throw config_error("infeasible placement: goal center lies inside an obstacle");
    }
  }
}

/// Positions of everything in one scenario run
struct scenario_layout {
  std::vector<vec2> drones;
  std::vector<vec2> stations;
  std::vector<circle> obstacles;
};

/// Places drones, stations and obstacles from the seed. Drones start in the
/// lower-left corner of the map; obstacles keep clear of the goal and the
/// drone starts; stations are spread along the route from the start corner
/// to the goal, off any obstacle.
inline scenario_layout place(const scenario_config &c) {
  validate_config(c);
  std::mt19937_64 rng(c.seed);
  scenario_layout out;
  const double corner = 0.25 * c.extent;
  if (c.drone_positions) {
    out.drones = *c.drone_positions;
  } else {
    for (std::size_t i = 0; i < c.drones; ++i)
      out.drones.push_back({detail::uniform(rng, 0.0, corner), detail::uniform(rng, 0.0, corner)});
  }
  if (c.obstacle_list) {
    out.obstacles = *c.obstacle_list;
  } else {
    for (std::size_t i = 0; i < c.obstacles; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
        circle o{{detail::uniform(rng, 0.0, c.extent), detail::uniform(rng, 0.0, c.extent)},
                 detail::uniform(rng, c.obstacle_radius_min, c.obstacle_radius_max)};
        if (norm(o.center - c.goal.center) < o.radius + c.goal.radius)
          continue;
        bool clear = true;
        for (const auto &d : out.drones)
          if (norm(o.center - d) < o.radius + 2.0)
            clear = false;
        if (!clear)
          continue;
        out.obstacles.push_back(o);
        placed = true;
      }
      if (!placed)
        throw config_error("infeasible placement: cannot fit obstacle " + std::to_string(i));
    }
  }
  if (c.station_positions) {
    out.stations = *c.station_positions;
  } else {
    const vec2 from{0.5 * corner, 0.5 * corner};
    const vec2 route = c.goal.center - from;
    const double length = norm(route);
    const vec2 across = length > 0 ? vec2{-route.y / length, route.x / length} : vec2{1.0, 0.0};
    for (std::size_t i = 0; i < c.stations; ++i) {
      const vec2 base = from + ((static_cast<double>(i) + 0.5) / static_cast<double>(c.stations)) * route;
      vec2 p;
      bool placed = false;
      for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
        double spread = 8.0 + 0.01 * attempt * c.extent;
        p = base + detail::uniform(rng, -spread, spread) * across;
        placed = p.x >= 0 && p.y >= 0 && p.x <= c.extent && p.y <= c.extent;
        for (const auto &o : out.obstacles)
          if (norm(p - o.center) <= o.radius)
            placed = false;
      }
      if (!placed)
        throw config_error("infeasible placement: cannot fit station " + std::to_string(i));
      out.stations.push_back(p);
    }
  }
  return out;
}

/// One step of point-mass kinematics: unit attraction to the goal,
/// separation from nearby drones, repulsion from and sliding around
/// obstacles, capped at the speed limit.
inline void advance(const scenario_config &c, const std::vector<circle> &obstacles,
                    std::vector<vec2> &drones) {
  const double dt = c.period_ms / 1000.0;
  const double separation = 5.0;
  const double influence = 8.0;
  std::vector<vec2> next = drones;
  for (std::size_t i = 0; i < drones.size(); ++i) {
    const vec2 p = drones[i];
    vec2 to_goal = c.goal.center - p;
    double dg = norm(to_goal);
    vec2 v;
    if (dg > 0)
      v = (1.0 / dg) * to_goal;
    for (std::size_t j = 0; j < drones.size(); ++j) {
      if (j == i)
        continue;
      vec2 away = p - drones[j];
      double d = norm(away);
      if (d > 0 && d < separation)
        v = v + ((separation - d) / (separation * d)) * away;
    }
    for (const auto &o : obstacles) {
      vec2 away = p - o.center;
      double d = norm(away);
      double clearance = d - o.radius;
      if (d > 0 && clearance < influence) {
        double k = 2.0 * (influence - clearance) / influence;
        vec2 n = (1.0 / d) * away;
        // slide along the side facing the goal
        vec2 tangent{-n.y, n.x};
        if (tangent.x * to_goal.x + tangent.y * to_goal.y < 0)
          tangent = -1.0 * tangent;
        v = v + k * n + (0.5 * k) * tangent;
      }
    }
    double speed = norm(v);
    double cap = c.max_speed;
    // slow down inside the goal region
    if (dg < c.goal.radius)
      cap = c.max_speed * dg / c.goal.radius;
    if (speed > 0)
      v = (cap / speed) * v;
    next[i] = p + dt * v;
  }
  drones = std::move(next);
}

/// Simulates the scenario and returns its trace. Locations are the drones
/// `d0..` followed by the ground stations `s0..`; edges link pairs within
/// the communication radius, weighted by their Euclidean distance.
inline trace_file generate(const scenario_config &c) {
  scenario_layout layout = place(c);
  const std::size_t nd = layout.drones.size();
  const std::size_t ns = layout.stations.size();
  const double diagonal = c.extent * std::sqrt(2.0);

  trace_header h;
  for (std::size_t i = 0; i < nd; ++i)
    h.universe.push_back("d" + std::to_string(i));
  for (std::size_t i = 0; i < ns; ++i)
    h.universe.push_back("s" + std::to_string(i));
  h.period_ms = c.period_ms;
  h.undirected = true;
  h.attributes = {"dist_to_obstacle", "dist_to_goal", "x", "y"};

  trace_file out;
  out.header = h;
  out.header_record = header_record(h);
  out.locations = std::make_shared<const universe>(h.universe);

  std::vector<vec2> drones = layout.drones;
  for (std::size_t t = 0; t < c.steps; ++t) {
    if (t > 0)
      advance(c, layout.obstacles, drones);
    std::vector<vec2> pos = drones;
    pos.insert(pos.end(), layout.stations.begin(), layout.stations.end());

    json rec;
    rec["t"] = t;
    json nodes = json::array();
    for (std::size_t i = 0; i < pos.size(); ++i) {
      double clearance = layout.obstacles.empty() ? diagonal : std::numeric_limits<double>::infinity();
      for (const auto &o : layout.obstacles) {
        double d = norm(pos[i] - o.center) - o.radius;
        if (d < clearance)
          clearance = d;
      }
      json attrs;
      attrs["dist_to_obstacle"] = clearance;
      attrs["dist_to_goal"] = norm(pos[i] - c.goal.center) - c.goal.radius;
      attrs["x"] = pos[i].x;
      attrs["y"] = pos[i].y;
      nodes.push_back({{"id", h.universe[i]},
                       {"kind", i < nd ? "drone" : "groundstation"},
                       {"attrs", std::move(attrs)}});
    }
    json edges = json::array();
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = i + 1; j < pos.size(); ++j) {
        double d = norm(pos[i] - pos[j]);
        double radius = (i >= nd || j >= nd) ? c.radius_station : c.radius_drone;
        if (d <= radius)
          edges.push_back({{"src", h.universe[i]}, {"w", d}, {"dst", h.universe[j]}});
      }
    }
    rec["nodes"] = std::move(nodes);
    rec["edges"] = std::move(edges);
    out.snapshots.push_back(parse_record(rec, h, out.locations, t, t + 2));
    out.records.push_back(std::move(rec));
  }
  return out;
}

} // namespace strel
