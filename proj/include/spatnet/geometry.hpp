#pragma once

#include <algorithm>
#include <cmath>

// Planar geometry primitives for the spatial index and the radio layer.
// All coordinates are meters, all angles radians. Shapes are closed:
// boundary contact counts as containment/intersection throughout.

namespace spatnet {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Axis-aligned, min <= max on both axes. Degenerate (zero extent) is valid.
struct Rect {
  Point min;
  Point max;
  friend bool operator==(const Rect&, const Rect&) = default;
};

// May be degenerate (collinear or coincident vertices).
struct Triangle {
  Point a;
  Point b;
  Point c;
};

struct Segment {
  Point p;
  Point q;
};

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double dist(Point p, Point q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline Rect point_rect(Point p) { return {p, p}; }

inline double area(const Rect& r) {
  return (r.max.x - r.min.x) * (r.max.y - r.min.y);
}

inline Rect rect_union(const Rect& a, const Rect& b) {
  return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y)},
          {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y)}};
}

// Area growth of a when extended to cover b; 0 when a already covers b.
inline double rect_enlargement(const Rect& a, const Rect& b) {
  return area(rect_union(a, b)) - area(a);
}

inline bool rect_intersects(const Rect& a, const Rect& b) {
  return a.min.x <= b.max.x && b.min.x <= a.max.x &&
         a.min.y <= b.max.y && b.min.y <= a.max.y;
}

inline bool rect_contains(const Rect& r, Point p) {
  return p.x >= r.min.x && p.x <= r.max.x && p.y >= r.min.y && p.y <= r.max.y;
}

inline Rect rect_expand(const Rect& r, double mx, double my) {
  return {{r.min.x - mx, r.min.y - my}, {r.max.x + mx, r.max.y + my}};
}

// Distance from p to the nearest point of r; 0 when p lies inside or on r.
inline double rect_min_dist(const Rect& r, Point p) {
  double dx = 0.0;
  double dy = 0.0;
  if (p.x < r.min.x) dx = r.min.x - p.x;
  else if (p.x > r.max.x) dx = p.x - r.max.x;
  if (p.y < r.min.y) dy = r.min.y - p.y;
  else if (p.y > r.max.y) dy = p.y - r.max.y;
  return std::sqrt(dx * dx + dy * dy);
}

double tri_area(const Triangle& t);
Rect tri_bbox(const Triangle& t);

// Closed containment; a degenerate triangle accepts exactly the points on
// its hull segment.
bool tri_contains(const Triangle& t, Point p);

// Exact separating-axis test between a triangle and a rect (closed shapes).
bool tri_intersects_rect(const Triangle& t, const Rect& r);

// Closed segment against closed rect (Liang-Barsky clip).
bool seg_intersects_rect(const Segment& s, const Rect& r);

// Angle of the origin->target ray in (-pi, pi]. Throws std::invalid_argument
// when target coincides with origin.
double azimuth(Point origin, Point target);

// Absolute angular offset of target from the boresight direction as seen from
// origin, wrapped into [0, pi]. Invariant under boresight += 2*k*pi. Throws
// when target coincides with origin.
double angle_offset(Point origin, double boresight, Point target);

}  // namespace spatnet
