#pragma once

// Slider shapes, contact parameterization along the slider boundary, and the
// support-distance quantities that set the torsional friction capacity.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "pushsim/errors.hpp"

namespace pushsim {

using Vec2 = Eigen::Vector2d;

/// Counter-clockwise rotation by a quarter turn.
inline Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// Identifies a polygon edge (edge i joins vertex i to vertex i+1) or the circle boundary.
using EdgeId = std::size_t;
inline constexpr EdgeId kCircleBoundary = std::numeric_limits<EdgeId>::max();

struct PolygonGeometry {
  std::vector<Vec2> vertices;  // counter-clockwise, area centroid at the origin
};

struct CircleGeometry {
  double radius = 0.0;
};

/// Convex polygon or circle in its body frame, with the centre of mass at the origin.
class SliderShape {
 public:
  /// Builds a convex polygon. Vertices may be given in either winding; they are
  /// stored counter-clockwise and re-centred on the area centroid.
  static SliderShape polygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3) {
      throw DegenerateShape("polygon needs at least 3 vertices");
    }
    for (const auto& v : vertices) {
      if (!v.allFinite()) throw DegenerateShape("polygon vertex is not finite");
    }
    const std::size_t n = vertices.size();
    double twice_area = 0.0;
    Vec2 moment = Vec2::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = vertices[i];
      const Vec2& b = vertices[(i + 1) % n];
      const double w = cross(a, b);
      twice_area += w;
      moment += w * (a + b);
    }
    if (std::abs(twice_area) <= 1e-300) {
      throw DegenerateShape("polygon has zero area");
    }
    if (twice_area < 0.0) {
      std::reverse(vertices.begin(), vertices.end());
      twice_area = -twice_area;
      moment = -moment;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
      const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
      if (!(cross(e0, e1) > 0.0)) {
        throw DegenerateShape("polygon is not strictly convex at vertex " + std::to_string((i + 1) % n));
      }
    }
    const Vec2 centroid = moment / (3.0 * twice_area);
    for (auto& v : vertices) v -= centroid;
    SliderShape shape;
    shape.geometry_ = PolygonGeometry{std::move(vertices)};
    return shape;
  }

  static SliderShape square(double side) {
    if (!(side > 0.0) || !std::isfinite(side)) throw DegenerateShape("square side must be > 0");
    const double h = 0.5 * side;
    return polygon({{-h, -h}, {h, -h}, {h, h}, {-h, h}});
  }

  static SliderShape circle(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DegenerateShape("circle radius must be > 0");
    SliderShape shape;
    shape.geometry_ = CircleGeometry{radius};
    return shape;
  }

  bool is_circle() const { return std::holds_alternative<CircleGeometry>(geometry_); }
  const std::variant<PolygonGeometry, CircleGeometry>& geometry() const { return geometry_; }

  double radius() const { return std::get<CircleGeometry>(geometry_).radius; }
  const std::vector<Vec2>& vertices() const { return std::get<PolygonGeometry>(geometry_).vertices; }

  std::size_t edge_count() const { return is_circle() ? 1 : vertices().size(); }

  /// The edge facing the -x body axis (outward normal closest to -x); the circle boundary for circles.
  EdgeId default_edge() const {
    if (is_circle()) return kCircleBoundary;
    const auto& vs = vertices();
    EdgeId best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec2 dir = (vs[(i + 1) % vs.size()] - vs[i]).normalized();
      // inward normal is rot90(dir); the outward normal is closest to -x when this is largest
      const double score = rot90(dir).x();
      if (score > best_score + 1e-12) {
        best_score = score;
        best = i;
      }
    }
    return best;
  }

  /// Admissible contact parameters on an edge: [-L/2, L/2] for a polygon edge, unbounded for a circle.
  Interval s_bounds(EdgeId edge) const {
    if (is_circle()) return {};
    const auto& vs = vertices();
    check_edge(edge);
    const double half = 0.5 * (vs[(edge + 1) % vs.size()] - vs[edge]).norm();
    return {-half, half};
  }

  SliderShape scaled(double k) const {
    if (is_circle()) return circle(k * radius());
    std::vector<Vec2> vs = vertices();
    for (auto& v : vs) v *= k;
    return polygon(std::move(vs));
  }

  void check_edge(EdgeId edge) const {
    if (is_circle()) {
      if (edge != kCircleBoundary) throw OutOfEdge("circle slider has a single boundary edge");
      return;
    }
    if (edge >= vertices().size()) {
      throw OutOfEdge("edge " + std::to_string(edge) + " does not exist");
    }
  }

 private:
  SliderShape() = default;
  std::variant<PolygonGeometry, CircleGeometry> geometry_;
};

/// Body-frame description of the pusher contact.
struct ContactFrame {
  Vec2 c = Vec2::Zero();
  Vec2 n_hat = Vec2::UnitX();  // points into the slider
  Vec2 t_hat = Vec2::UnitY();  // rot90(n_hat); the contact parameter s grows along it
  double mu_c = 0.0;
  EdgeId edge_id = 0;
  Interval s_bounds;
};

/// Contact frame at parameter s on the given edge.
///
/// Polygon edges are parameterized from their midpoint; the circle from the
/// body point (-rho, 0). In both cases s increases along t_hat, so that the
/// slip velocity alpha is exactly ds/dt.
inline ContactFrame contact_frame_at(const SliderShape& shape, double s, EdgeId edge, double mu_c = 0.0) {
  shape.check_edge(edge);
  ContactFrame cf;
  cf.mu_c = mu_c;
  cf.edge_id = edge;
  if (shape.is_circle()) {
    const double rho = shape.radius();
    // c = rho * (cos(pi - r), sin(pi - r)), written so that it is exactly odd in s
    const double r = std::remainder(s / rho, 2.0 * std::numbers::pi);
    const double cr = std::cos(r);
    const double sr = std::sin(r);
    cf.c = {-rho * cr, rho * sr};
    cf.n_hat = {cr, -sr};
    cf.t_hat = rot90(cf.n_hat);
    return cf;
  }
  cf.s_bounds = shape.s_bounds(edge);
  if (!cf.s_bounds.contains(s)) {
    throw OutOfEdge("contact parameter " + std::to_string(s) + " outside edge " + std::to_string(edge) + " bounds [" +
                    std::to_string(cf.s_bounds.lo) + ", " + std::to_string(cf.s_bounds.hi) + "]");
  }
  const auto& vs = shape.vertices();
  const Vec2& a = vs[edge];
  const Vec2& b = vs[(edge + 1) % vs.size()];
  const Vec2 dir = (b - a).normalized();
  cf.n_hat = rot90(dir);
  cf.t_hat = rot90(cf.n_hat);
  cf.c = 0.5 * (a + b) + s * cf.t_hat;
  return cf;
}

inline ContactFrame contact_frame_at(const SliderShape& shape, double s) {
  return contact_frame_at(shape, s, shape.default_edge());
}

namespace detail {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<std::pair<double, double>, 8> kGauss8{{
    {-0.9602898564975363, 0.1012285362903763},
    {-0.7966664774136267, 0.2223810344533745},
    {-0.5255324099163290, 0.3137066458778873},
    {-0.1834346424956498, 0.3626837833783620},
    {0.1834346424956498, 0.3626837833783620},
    {0.5255324099163290, 0.3137066458778873},
    {0.7966664774136267, 0.2223810344533745},
    {0.9602898564975363, 0.1012285362903763},
}};

// Integral of |a| over the triangle (0, p, q). With a = r (p + u (q - p)) the
// integrand separates: |p x q| * (int r^2 dr) * (int_0^1 |p + u (q - p)| du).
// The remaining 1-D integrand is smooth because the edge does not pass through
// the origin; it is integrated with composite Gauss-Legendre.
inline double fan_triangle_distance_integral(const Vec2& p, const Vec2& q, int panels = 32) {
  const Vec2 e = q - p;
  double line = 0.0;
  const double h = 1.0 / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * h;
    for (const auto& [x, w] : kGauss8) {
      line += 0.5 * h * w * (p + (mid + 0.5 * h * x) * e).norm();
    }
  }
  return std::abs(cross(p, q)) / 3.0 * line;
}

}  // namespace detail

/// Area-averaged distance of the support region from the centre of mass.
inline double mean_support_distance(const SliderShape& shape) {
  if (shape.is_circle()) {
    return 2.0 * shape.radius() / 3.0;
  }
  const auto& vs = shape.vertices();
  double area = 0.0;
  double moment = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Vec2& p = vs[i];
    const Vec2& q = vs[(i + 1) % vs.size()];
    area += 0.5 * std::abs(cross(p, q));
    moment += detail::fan_triangle_distance_integral(p, q);
  }
  if (!(area > 0.0)) throw DegenerateShape("support area is zero");
  return moment / area;
}

inline double max_support_distance(const SliderShape& shape) {
  if (shape.is_circle()) return shape.radius();
  double best = 0.0;
  for (const auto& v : shape.vertices()) best = std::max(best, v.norm());
  return best;
}

}  // namespace pushsim
