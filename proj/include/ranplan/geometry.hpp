// Copyright 2026 The ranplan Authors
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

// Planar geometry used by the link tables, the plan validator and the
// blockage simulator. All angles are radians; azimuths are measured
// counter-clockwise from the +x axis and normalized to [0, 2*pi).

#ifndef RANPLAN_GEOMETRY_HPP
#define RANPLAN_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ranplan {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Slack applied to inclusive angular comparisons so that a target lying
// exactly on a sector/FOV edge is not lost to atan2 rounding.
inline constexpr double kAngleEps = 1e-12;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2D&, const Point2D&) = default;
};

inline double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

/// Closed line segment with distinct endpoints.
class Segment2D {
 public:
  Segment2D(Point2D a, Point2D b) : a_(a), b_(b) {
    if (a == b) throw GeometryError("zero-length segment");
    if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(b.x) ||
        !std::isfinite(b.y))
      throw GeometryError("non-finite segment endpoint");
  }

  const Point2D& a() const { return a_; }
  const Point2D& b() const { return b_; }
  double length() const { return distance(a_, b_); }

  friend bool operator==(const Segment2D&, const Segment2D&) = default;

 private:
  Point2D a_;
  Point2D b_;
};

/// Angular sector anchored at `origin`, centered on `center_azimuth`.
struct Sector {
  Point2D origin;
  double center_azimuth = 0.0;
  double span = 0.0;

  friend bool operator==(const Sector&, const Sector&) = default;
};

/// Maps any finite angle into [0, 2*pi).
inline double normalize_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Shortest distance between two directions on the circle, in [0, pi].
inline double circular_distance(double a, double b) {
  const double d = std::fabs(normalize_angle(a) - normalize_angle(b));
  return std::min(d, kTwoPi - d);
}

inline double azimuth(const Point2D& from, const Point2D& to) {
  if (from == to) throw GeometryError("degenerate direction");
  return normalize_angle(std::atan2(to.y - from.y, to.x - from.x));
}

/// Smallest angle between the rays vertex->p1 and vertex->p2.
inline double angular_separation(const Point2D& vertex, const Point2D& p1,
                                 const Point2D& p2) {
  return circular_distance(azimuth(vertex, p1), azimuth(vertex, p2));
}

namespace detail {

// Sign of the cross product (b - a) x (c - a).
inline int orientation(const Point2D& a, const Point2D& b, const Point2D& c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

// Assumes p is collinear with [a, b].
inline bool on_segment(const Point2D& a, const Point2D& b, const Point2D& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// True iff the closed segments share a point. Touching endpoints and
/// collinear overlaps count.
inline bool segments_intersect(const Segment2D& s1, const Segment2D& s2) {
  using detail::on_segment;
  using detail::orientation;
  const Point2D &p1 = s1.a(), &q1 = s1.b(), &p2 = s2.a(), &q2 = s2.b();
  const int o1 = orientation(p1, q1, p2);
  const int o2 = orientation(p1, q1, q2);
  const int o3 = orientation(p2, q2, p1);
  const int o4 = orientation(p2, q2, q1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, q1, p2)) return true;
  if (o2 == 0 && on_segment(p1, q1, q2)) return true;
  if (o3 == 0 && on_segment(p2, q2, p1)) return true;
  if (o4 == 0 && on_segment(p2, q2, q1)) return true;
  return false;
}

inline bool within_fov(double orientation, double ray_azimuth, double fov) {
  return circular_distance(orientation, ray_azimuth) <= fov / 2.0 + kAngleEps;
}

inline bool sector_contains(const Sector& sector, const Point2D& target) {
  if (target == sector.origin)
    throw GeometryError("sector target coincides with its origin");
  return within_fov(sector.center_azimuth, azimuth(sector.origin, target),
                    sector.span);
}

}  // namespace ranplan

#endif  // RANPLAN_GEOMETRY_HPP
