#pragma once

// Planar primitives on (lon, lat) degree coordinates used for point
// location and boundary contact tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace entsim::planar {

struct Point {
  double x = 0.0;  // lon
  double y = 0.0;  // lat

  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed ring: front() == back().
using Ring = std::vector<Point>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void expand(const Point& p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  void expand(const Box& b) {
    min_x = std::min(min_x, b.min_x);
    min_y = std::min(min_y, b.min_y);
    max_x = std::max(max_x, b.max_x);
    max_y = std::max(max_y, b.max_y);
  }
  Box inflated(double by) const {
    return {min_x - by, min_y - by, max_x + by, max_y + by};
  }
  bool intersects(const Box& o) const {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y &&
           o.min_y <= max_y;
  }
};

inline double dist(const Point& a, const Point& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double point_segment_distance(const Point& p, const Point& a,
                                     const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return dist(p, a);
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

/// True when segments ab and cd cross at a single point interior to both
/// (a transversal crossing, not a touch or a collinear overlap).
inline bool segments_cross_properly(const Point& a, const Point& b,
                                    const Point& c, const Point& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline double segment_distance(const Point& a, const Point& b, const Point& c,
                               const Point& d) {
  if (segments_cross_properly(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

enum class Contact { none, point, line };

/// How two boundary segments meet within tolerance `eps`: not at all, in a
/// single point, or along a stretch longer than `eps`.
inline Contact segment_contact(const Point& a, const Point& b, const Point& c,
                               const Point& d, double eps) {
  if (segment_distance(a, b, c, d) > eps) return Contact::none;
  Point near[4];
  int n = 0;
  if (point_segment_distance(a, c, d) <= eps) near[n++] = a;
  if (point_segment_distance(b, c, d) <= eps) near[n++] = b;
  if (point_segment_distance(c, a, b) <= eps) near[n++] = c;
  if (point_segment_distance(d, a, b) <= eps) near[n++] = d;
  double extent = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) extent = std::max(extent, dist(near[i], near[j]));
  return extent > eps ? Contact::line : Contact::point;
}

/// Even-odd ray casting; the result is unspecified for points on the ring.
inline bool ring_contains(const Ring& ring, const Point& p) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

inline double ring_boundary_distance(const Ring& ring, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ring.size(); ++i)
    best = std::min(best, point_segment_distance(p, ring[i - 1], ring[i]));
  return best;
}

enum class Location { outside, boundary, inside };

/// Classifies `p` against a polygon with holes; points within `eps` of any
/// ring count as boundary.
inline Location locate_in_polygon(const Polygon& poly, const Point& p, double eps) {
  double d = ring_boundary_distance(poly.outer, p);
  for (const Ring& h : poly.holes) d = std::min(d, ring_boundary_distance(h, p));
  if (d <= eps) return Location::boundary;
  if (!ring_contains(poly.outer, p)) return Location::outside;
  for (const Ring& h : poly.holes)
    if (ring_contains(h, p)) return Location::outside;
  return Location::inside;
}

inline double ring_perimeter(const Ring& ring) {
  double total = 0.0;
  for (std::size_t i = 1; i < ring.size(); ++i) total += dist(ring[i - 1], ring[i]);
  return total;
}

}  // namespace entsim::planar
