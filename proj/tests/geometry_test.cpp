#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pushsim/geometry.hpp"

using namespace pushsim;

namespace {

// Jittered-grid Monte Carlo estimate of the mean distance from the origin over
// a polygon's bounding box, keeping only samples inside the polygon.
double monte_carlo_mean_distance(const SliderShape& shape, int per_axis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const auto& v : shape.vertices()) {
    lo_x = std::min(lo_x, v.x());
    hi_x = std::max(hi_x, v.x());
    lo_y = std::min(lo_y, v.y());
    hi_y = std::max(hi_y, v.y());
  }
  const auto& vs = shape.vertices();
  auto inside = [&](const Vec2& p) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (cross(vs[(i + 1) % vs.size()] - vs[i], p - vs[i]) < 0.0) return false;
    }
    return true;
  };
  double sum = 0.0;
  std::size_t n = 0;
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      const Vec2 p(lo_x + (hi_x - lo_x) * (i + jitter(rng)) / per_axis,
                   lo_y + (hi_y - lo_y) * (j + jitter(rng)) / per_axis);
      if (!inside(p)) continue;
      sum += p.norm();
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TEST(ContactFrame, SquareDefaultEdgeMidpoint) {
  const auto sq = SliderShape::square(1.0);
  const auto cf = contact_frame_at(sq, 0.0);
  EXPECT_NEAR(cf.c.x(), -0.5, 1e-15);
  EXPECT_NEAR(cf.c.y(), 0.0, 1e-15);
  EXPECT_NEAR(cf.n_hat.x(), 1.0, 1e-15);
  EXPECT_NEAR(cf.n_hat.y(), 0.0, 1e-15);
  EXPECT_NEAR(cf.t_hat.y(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(cf.s_bounds.lo, -0.5);
  EXPECT_DOUBLE_EQ(cf.s_bounds.hi, 0.5);
}

TEST(ContactFrame, SquareOffsetContact) {
  const auto cf = contact_frame_at(SliderShape::square(1.0), 0.4);
  EXPECT_NEAR(cf.c.x(), -0.5, 1e-15);
  EXPECT_NEAR(cf.c.y(), 0.4, 1e-15);
  EXPECT_NEAR(cf.n_hat.x(), 1.0, 1e-15);
}

TEST(ContactFrame, CircleReferencePoint) {
  const auto circle = SliderShape::circle(0.5);
  const auto cf = contact_frame_at(circle, 0.0);
  EXPECT_EQ(cf.edge_id, kCircleBoundary);
  EXPECT_NEAR(cf.c.x(), -0.5, 1e-15);
  EXPECT_NEAR(cf.c.y(), 0.0, 1e-15);
  EXPECT_NEAR(cf.n_hat.x(), 1.0, 1e-15);
  EXPECT_NEAR(cf.n_hat.y(), 0.0, 1e-15);
}

TEST(ContactFrame, OutsideEdgeThrows) {
  const auto sq = SliderShape::square(1.0);
  EXPECT_THROW(contact_frame_at(sq, 0.5000001), OutOfEdge);
  EXPECT_THROW(contact_frame_at(sq, -0.6), OutOfEdge);
  EXPECT_NO_THROW(contact_frame_at(sq, 0.5));
  EXPECT_THROW(contact_frame_at(sq, 0.0, 7), OutOfEdge);
}

TEST(ContactFrame, ContactParameterAdvancesAlongTangent) {
  // ds/dt = alpha only holds if dc/ds = t_hat on every edge and on the circle
  const double h = 1e-6;
  for (const auto& shape : {SliderShape::square(1.0), SliderShape::circle(0.5),
                            SliderShape::polygon({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}})}) {
    for (EdgeId e = 0; e < shape.edge_count(); ++e) {
      const EdgeId edge = shape.is_circle() ? kCircleBoundary : e;
      for (double s : {-0.2, 0.0, 0.3}) {
        const auto cf = contact_frame_at(shape, s, edge);
        const Vec2 dc = (contact_frame_at(shape, s + h, edge).c - contact_frame_at(shape, s - h, edge).c) / (2 * h);
        EXPECT_NEAR(dc.x(), cf.t_hat.x(), 1e-8);
        EXPECT_NEAR(dc.y(), cf.t_hat.y(), 1e-8);
      }
    }
  }
}

TEST(ContactFrame, FrameIsOrthonormalAndOnBoundary) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto poly = SliderShape::polygon({{0, 0}, {3, 0}, {3.5, 1}, {2, 2.5}, {-0.2, 1.5}});
  for (EdgeId e = 0; e < poly.edge_count(); ++e) {
    const auto bounds = poly.s_bounds(e);
    const Vec2 a = poly.vertices()[e];
    const Vec2 b = poly.vertices()[(e + 1) % poly.edge_count()];
    for (int k = 0; k < 50; ++k) {
      const double s = bounds.hi * u(rng);
      const auto cf = contact_frame_at(poly, s, e);
      EXPECT_NEAR(cf.n_hat.norm(), 1.0, 1e-12);
      EXPECT_NEAR(cf.t_hat.norm(), 1.0, 1e-12);
      EXPECT_NEAR(cf.n_hat.dot(cf.t_hat), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(cross(b - a, cf.c - a)), 0.0, 1e-12);
      EXPECT_NEAR(cf.n_hat.dot(b - a), 0.0, 1e-12);
      // inward: the centroid (origin) is on the n_hat side of the edge
      EXPECT_GT(cf.n_hat.dot(-cf.c), 0.0);
    }
  }
  const auto circle = SliderShape::circle(0.7);
  for (int k = 0; k < 200; ++k) {
    const double s = 20.0 * u(rng);
    const auto cf = contact_frame_at(circle, s);
    EXPECT_NEAR(cf.c.norm(), 0.7, 1e-12);
    EXPECT_NEAR((cf.n_hat + cf.c / 0.7).norm(), 0.0, 1e-12);
    EXPECT_NEAR(cf.n_hat.dot(cf.t_hat), 0.0, 1e-12);
  }
}

TEST(SliderShape, PolygonIsRecenteredAndReordered) {
  // clockwise triangle far from the origin
  const auto tri = SliderShape::polygon({{10, 10}, {10, 13}, {13, 10}});
  Vec2 centroid = Vec2::Zero();
  for (const auto& v : tri.vertices()) centroid += v;
  EXPECT_NEAR(centroid.norm() / 3.0, 0.0, 1e-12);
  const auto& vs = tri.vertices();
  EXPECT_GT(cross(vs[1] - vs[0], vs[2] - vs[1]), 0.0);
}

TEST(SliderShape, RejectsDegenerateInput) {
  EXPECT_THROW(SliderShape::polygon({{0, 0}, {1, 0}}), DegenerateShape);
  EXPECT_THROW(SliderShape::polygon({{0, 0}, {1, 0}, {2, 0}}), DegenerateShape);
  EXPECT_THROW(SliderShape::polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}), DegenerateShape);
  EXPECT_THROW(SliderShape::circle(0.0), DegenerateShape);
  EXPECT_THROW(SliderShape::circle(-1.0), DegenerateShape);
  EXPECT_THROW(SliderShape::square(0.0), DegenerateShape);
}

TEST(SliderShape, DefaultEdgeFacesNegativeX) {
  const auto sq = SliderShape::square(2.0);
  const auto cf = contact_frame_at(sq, 0.0);
  EXPECT_NEAR(cf.c.x(), -1.0, 1e-15);
  const auto hex = SliderShape::polygon({{1, 0}, {0.5, 0.9}, {-0.5, 0.9}, {-1, 0}, {-0.5, -0.9}, {0.5, -0.9}});
  // two edges tie at 30 degrees from -x; the first in vertex order is chosen
  EXPECT_EQ(hex.default_edge(), 2u);
}

TEST(SupportDistance, CircleClosedForm) {
  EXPECT_NEAR(mean_support_distance(SliderShape::circle(0.5)), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mean_support_distance(SliderShape::circle(1e-9)), 0.0, 1e-9);
}

TEST(SupportDistance, CircleAgreesWithPolygonQuadrature) {
  // the same fan quadrature applied to a fine inscribed polygon
  constexpr int n = 4096;
  std::vector<Vec2> vs;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    vs.emplace_back(0.5 * std::cos(a), 0.5 * std::sin(a));
  }
  const double polygon_d = mean_support_distance(SliderShape::polygon(vs));
  EXPECT_NEAR(polygon_d, 1.0 / 3.0, 1e-6);
}

TEST(SupportDistance, UnitSquareMatchesOracles) {
  const double d = mean_support_distance(SliderShape::square(1.0));
  // closed form of the mean distance from the centre of a unit square
  EXPECT_NEAR(d, (std::sqrt(2.0) + std::asinh(1.0)) / 6.0, 1e-12);
  EXPECT_NEAR(d, 0.382598, 1e-6);
  EXPECT_NEAR(d, monte_carlo_mean_distance(SliderShape::square(1.0), 1000, 7), 1e-4);
}

TEST(SupportDistance, IrregularPolygonMatchesMonteCarlo) {
  const auto poly = SliderShape::polygon({{0, 0}, {3, 0}, {3.5, 1}, {2, 2.5}, {-0.2, 1.5}});
  EXPECT_NEAR(mean_support_distance(poly), monte_carlo_mean_distance(poly, 1500, 11), 2e-4);
}

TEST(SupportDistance, ScalesLinearlyAndIsBoundedByMax) {
  const std::vector<SliderShape> shapes{SliderShape::square(1.0), SliderShape::circle(0.5),
                                        SliderShape::polygon({{0, 0}, {3, 0}, {3.5, 1}, {2, 2.5}, {-0.2, 1.5}}),
                                        SliderShape::polygon({{0, 0}, {1, 0}, {0, 0.05}})};
  for (const auto& shape : shapes) {
    const double d = mean_support_distance(shape);
    for (double k : {0.01, 0.5, 3.0, 250.0}) {
      EXPECT_NEAR(mean_support_distance(shape.scaled(k)) / (k * d), 1.0, 1e-9);
    }
    EXPECT_LE(d, max_support_distance(shape));
  }
}

TEST(SupportDistance, MaxDistance) {
  EXPECT_NEAR(max_support_distance(SliderShape::square(1.0)), std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(max_support_distance(SliderShape::square(2.0)), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(max_support_distance(SliderShape::circle(0.5)), 0.5);
}
