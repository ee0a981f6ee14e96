#pragma once

// Text configuration files.
//
// Simulation configs are INI-style files with the sections
//
//   [slider]         shape = square|circle|polygon, side, radius, vertices, edge
//   [limit_surface]  f_max, tau_max (number | uniform | max; default uniform), tau_scale
//   [contact]        mu
//   [gains]          k_f, k_y, speed
//   [path]           origin = "x y", direction = "x y"
//   [sim]            dt, duration, x0, y0, phi0, s0, force_noise, seed
//
// Sweep grids use a single [grid] section with whitespace-separated lists for
// y0, s0, phi0, mu and tau. Lengths are in meters and angles in radians;
// angle values may be written as multiples of pi ("-pi/8", "0.25*pi").

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "pushsim/errors.hpp"
#include "pushsim/geometry.hpp"
#include "pushsim/sim.hpp"
#include "pushsim/sweep.hpp"

namespace pushsim::config {

using boost::property_tree::ptree;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

inline bool parse_plain(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

inline std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Parses a number, optionally a multiple or fraction of pi: "1.5", "-pi/8", "0.25*pi", "2*pi/3".
inline double parse_number(std::string_view text, const std::string& key) {
  std::string s = detail::trim(text);
  auto fail = [&]() -> double { throw ConfigError(key, "invalid number '" + s + "' for key '" + key + "'"); };
  if (s.empty()) return fail();
  double plain = 0.0;
  if (detail::parse_plain(s, plain)) {
    if (!std::isfinite(plain)) return fail();
    return plain;
  }
  std::string_view body = s;
  double sign = 1.0;
  if (body.front() == '-' || body.front() == '+') {
    if (body.front() == '-') sign = -1.0;
    body.remove_prefix(1);
  }
  double denominator = 1.0;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    if (!detail::parse_plain(body.substr(slash + 1), denominator) || denominator == 0.0) return fail();
    body = body.substr(0, slash);
  }
  double factor = 1.0;
  if (body == "pi") {
    factor = 1.0;
  } else if (body.size() > 3 && body.substr(body.size() - 3) == "*pi") {
    if (!detail::parse_plain(body.substr(0, body.size() - 3), factor)) return fail();
  } else {
    return fail();
  }
  return sign * factor * std::numbers::pi / denominator;
}

inline Vec2 parse_vec2(std::string_view text, const std::string& key) {
  const auto toks = detail::split_ws(text);
  if (toks.size() != 2) throw ConfigError(key, "key '" + key + "' needs two numbers");
  return {parse_number(toks[0], key), parse_number(toks[1], key)};
}

/// Vertex list "x y, x y, x y".
inline std::vector<Vec2> parse_vertices(std::string_view text, const std::string& key) {
  std::vector<Vec2> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (detail::trim(item).empty()) continue;
    out.push_back(parse_vec2(item, key));
  }
  return out;
}

inline ptree read_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot read config file '" + path.string() + "'");
  ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("file", std::string("malformed config: ") + e.message() + " (line " +
                                  std::to_string(e.line()) + ")");
  }
  return tree;
}

namespace detail {

inline const std::map<std::string, std::set<std::string>>& sim_schema() {
  static const std::map<std::string, std::set<std::string>> schema{
      {"slider", {"shape", "side", "radius", "vertices", "edge"}},
      {"limit_surface", {"f_max", "tau_max", "tau_scale"}},
      {"contact", {"mu"}},
      {"gains", {"k_f", "k_y", "speed"}},
      {"path", {"origin", "direction"}},
      {"sim", {"dt", "duration", "x0", "y0", "phi0", "s0", "force_noise", "seed"}},
  };
  return schema;
}

inline void check_schema(const ptree& tree, const std::map<std::string, std::set<std::string>>& schema) {
  for (const auto& [section, body] : tree) {
    const auto it = schema.find(section);
    if (it == schema.end()) throw ConfigError(section, "unknown section '" + section + "'");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        throw ConfigError(section + "." + key, "unknown key '" + section + "." + key + "'");
      }
    }
  }
}

inline std::optional<std::string> get(const ptree& tree, const std::string& key) {
  if (auto v = tree.get_optional<std::string>(key)) return detail::trim(*v);
  return std::nullopt;
}

inline std::string require(const ptree& tree, const std::string& key) {
  auto v = get(tree, key);
  if (!v || v->empty()) throw ConfigError(key, "missing key '" + key + "'");
  return *v;
}

inline void read_number(const ptree& tree, const std::string& key, double& out) {
  if (auto v = get(tree, key)) out = parse_number(*v, key);
}

inline SliderShape read_shape(const ptree& tree) {
  const std::string kind = require(tree, "slider.shape");
  try {
    if (kind == "square") return SliderShape::square(parse_number(require(tree, "slider.side"), "slider.side"));
    if (kind == "circle") return SliderShape::circle(parse_number(require(tree, "slider.radius"), "slider.radius"));
    if (kind == "polygon") return SliderShape::polygon(parse_vertices(require(tree, "slider.vertices"), "slider.vertices"));
  } catch (const DegenerateShape& e) {
    throw ConfigError("slider", e.what());
  }
  throw ConfigError("slider.shape", "slider.shape must be square, circle or polygon, got '" + kind + "'");
}

}  // namespace detail

/// Applies a parsed config tree on top of `base`. The slider is replaced only
/// when the tree has a [slider] section.
inline SimConfig apply(const ptree& tree, SimConfig base) {
  detail::check_schema(tree, detail::sim_schema());
  if (tree.get_child_optional("slider")) {
    base.shape = detail::read_shape(tree);
    base.edge.reset();
    if (auto e = detail::get(tree, "slider.edge")) {
      if (*e != "default") {
        const double v = parse_number(*e, "slider.edge");
        if (v < 0.0 || v != std::floor(v)) throw ConfigError("slider.edge", "slider.edge must be a vertex index");
        base.edge = static_cast<EdgeId>(v);
      }
    }
  }
  detail::read_number(tree, "limit_surface.f_max", base.f_max);
  double tau_scale = 1.0;
  detail::read_number(tree, "limit_surface.tau_scale", tau_scale);
  if (auto tau = detail::get(tree, "limit_surface.tau_max")) {
    if (*tau == "uniform") {
      base.tau_max = base.f_max * mean_support_distance(base.shape);
    } else if (*tau == "max" || *tau == "peak") {
      base.tau_max = base.f_max * max_support_distance(base.shape);
    } else {
      base.tau_max = parse_number(*tau, "limit_surface.tau_max");
    }
  } else if (tree.get_child_optional("slider")) {
    base.tau_max = base.f_max * mean_support_distance(base.shape);
  }
  base.tau_max *= tau_scale;
  detail::read_number(tree, "contact.mu", base.mu_c);
  detail::read_number(tree, "gains.k_f", base.gains.k_f);
  detail::read_number(tree, "gains.k_y", base.gains.k_y);
  detail::read_number(tree, "gains.speed", base.gains.speed);
  if (auto v = detail::get(tree, "path.origin")) base.path.origin = parse_vec2(*v, "path.origin");
  if (auto v = detail::get(tree, "path.direction")) {
    base.path = PathFrame::along(base.path.origin, parse_vec2(*v, "path.direction"));
  }
  detail::read_number(tree, "sim.dt", base.dt);
  detail::read_number(tree, "sim.duration", base.duration);
  detail::read_number(tree, "sim.x0", base.x0);
  detail::read_number(tree, "sim.y0", base.y0);
  detail::read_number(tree, "sim.phi0", base.phi0);
  detail::read_number(tree, "sim.s0", base.s0);
  detail::read_number(tree, "sim.force_noise", base.force_noise);
  if (auto v = detail::get(tree, "sim.seed")) {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), seed);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      throw ConfigError("sim.seed", "sim.seed must be a non-negative integer");
    }
    base.seed = seed;
  }
  return base;
}

/// Reads a complete simulation config; the [slider] section is required.
inline SimConfig load_sim_config(const std::filesystem::path& path) {
  const ptree tree = read_ini(path);
  detail::require(tree, "slider.shape");
  SimConfig cfg = apply(tree, SimConfig{});
  cfg.validate();
  return cfg;
}

inline TauSpec parse_tau(std::string_view token, const std::string& key) {
  std::string t = detail::trim(token);
  double factor = 1.0;
  if (const auto star = t.find('*'); star != std::string::npos) {
    const std::string basis = t.substr(star + 1);
    if (basis == "uniform" || basis == "max" || basis == "peak") {
      factor = parse_number(t.substr(0, star), key);
      t = basis;
    }
  }
  if (t == "uniform") return TauSpec::uniform(factor);
  if (t == "max" || t == "peak") return TauSpec::peak(factor);
  return TauSpec::absolute(parse_number(t, key));
}

/// Reads a [grid] section. Axes that are absent keep the default grid's values.
inline SweepGrid load_grid(const std::filesystem::path& path) {
  const ptree tree = read_ini(path);
  detail::check_schema(tree, {{"grid", {"y0", "s0", "phi0", "mu", "tau"}}});
  SweepGrid grid = default_grid();
  auto axis = [&](const std::string& name, std::vector<double>& out) {
    if (auto v = detail::get(tree, "grid." + name)) {
      out.clear();
      for (const auto& tok : detail::split_ws(*v)) out.push_back(parse_number(tok, "grid." + name));
    }
  };
  axis("y0", grid.y0);
  axis("s0", grid.s0);
  axis("phi0", grid.phi0);
  axis("mu", grid.mu_c);
  if (auto v = detail::get(tree, "grid.tau")) {
    grid.tau_max.clear();
    for (const auto& tok : detail::split_ws(*v)) grid.tau_max.push_back(parse_tau(tok, "grid.tau"));
  }
  return grid;
}

/// JSON snapshot of a configuration, for manifests.
inline nlohmann::json to_json(const SimConfig& c) {
  nlohmann::json shape;
  if (c.shape.is_circle()) {
    shape = {{"type", "circle"}, {"radius", c.shape.radius()}};
  } else {
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : c.shape.vertices()) vs.push_back({v.x(), v.y()});
    shape = {{"type", "polygon"}, {"vertices", vs}};
  }
  shape["edge"] = c.shape.is_circle() ? nlohmann::json("boundary") : nlohmann::json(c.contact_edge());
  return {
      {"slider", shape},
      {"limit_surface", {{"f_max", c.f_max}, {"tau_max", c.tau_max}}},
      {"contact", {{"mu", c.mu_c}}},
      {"gains", {{"k_f", c.gains.k_f}, {"k_y", c.gains.k_y}, {"speed", c.gains.speed}}},
      {"path",
       {{"origin", {c.path.origin.x(), c.path.origin.y()}}, {"direction", {c.path.direction.x(), c.path.direction.y()}}}},
      {"sim",
       {{"dt", c.dt},
        {"duration", c.duration},
        {"x0", c.x0},
        {"y0", c.y0},
        {"phi0", c.phi0},
        {"s0", c.s0},
        {"force_noise", c.force_noise},
        {"seed", c.seed}}},
  };
}

}  // namespace pushsim::config
