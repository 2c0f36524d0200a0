#include "spatnet/geometry.hpp"

#include <limits>
#include <stdexcept>

namespace spatnet {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

struct Interval {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void extend(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

double tri_area(const Triangle& t) {
  return 0.5 * std::abs(cross(t.a, t.b, t.c));
}

Rect tri_bbox(const Triangle& t) {
  return {{std::min({t.a.x, t.b.x, t.c.x}), std::min({t.a.y, t.b.y, t.c.y})},
          {std::max({t.a.x, t.b.x, t.c.x}), std::max({t.a.y, t.b.y, t.c.y})}};
}

bool tri_contains(const Triangle& t, Point p) {
  const double s1 = cross(t.a, t.b, p);
  const double s2 = cross(t.b, t.c, p);
  const double s3 = cross(t.c, t.a, p);
  if (s1 == 0.0 && s2 == 0.0 && s3 == 0.0) {
    // Degenerate triangle and p on its carrier line: the hull is a segment,
    // so the bounding box decides.
    return rect_contains(tri_bbox(t), p);
  }
  const bool has_pos = s1 > 0.0 || s2 > 0.0 || s3 > 0.0;
  const bool has_neg = s1 < 0.0 || s2 < 0.0 || s3 < 0.0;
  return !(has_pos && has_neg);
}

bool tri_intersects_rect(const Triangle& t, const Rect& r) {
  // The rect's own axes reduce to a bounding-box overlap test.
  if (!rect_intersects(tri_bbox(t), r)) return false;

  const Point tv[3] = {t.a, t.b, t.c};
  const Point rv[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  for (int i = 0; i < 3; ++i) {
    const Point e0 = tv[i];
    const Point e1 = tv[(i + 1) % 3];
    const double ax = e0.y - e1.y;  // edge normal
    const double ay = e1.x - e0.x;
    if (ax == 0.0 && ay == 0.0) continue;  // zero-length edge, no axis
    Interval ti;
    Interval ri;
    for (const Point& v : tv) ti.extend(ax * v.x + ay * v.y);
    for (const Point& v : rv) ri.extend(ax * v.x + ay * v.y);
    if (ti.hi < ri.lo || ri.hi < ti.lo) return false;
  }
  return true;
}

bool seg_intersects_rect(const Segment& s, const Rect& r) {
  const double dx = s.q.x - s.p.x;
  const double dy = s.q.y - s.p.y;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {s.p.x - r.min.x, r.max.x - s.p.x, s.p.y - r.min.y,
                       r.max.y - s.p.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;  // parallel and outside this slab
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      if (t > t1) return false;
      t0 = std::max(t0, t);
    } else {
      if (t < t0) return false;
      t1 = std::min(t1, t);
    }
  }
  return t0 <= t1;
}

double azimuth(Point origin, Point target) {
  if (origin == target)
    throw std::invalid_argument("azimuth: target coincides with origin");
  return std::atan2(target.y - origin.y, target.x - origin.x);
}

double angle_offset(Point origin, double boresight, Point target) {
  return std::abs(std::remainder(azimuth(origin, target) - boresight, kTwoPi));
}

}  // namespace spatnet
