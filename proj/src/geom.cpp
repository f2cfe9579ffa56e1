#include "planetopo/geom.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <random>

#include "planetopo/error.hpp"

namespace planetopo::geom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_positive(double angle) {
  angle = std::fmod(angle, kTwoPi);
  return angle < 0 ? angle + kTwoPi : angle;
}

Ball disk_from_two(Point a, Point b) { return Ball::disk((a + b) / 2.0, dist(a, b) / 2.0); }

Ball disk_from_three(Point a, Point b, Point c) {
  Point center;
  double radius = 0;
  if (circumcircle(a, b, c, center, radius)) return Ball::disk(center, radius);
  // Collinear: the two extreme points span the disk.
  Ball best = disk_from_two(a, b);
  for (const Ball& cand : {disk_from_two(a, c), disk_from_two(b, c)})
    if (cand.radius > best.radius) best = cand;
  return best;
}

bool inside(const Ball& d, Point p) {
  return dist(d.center, p) <= d.radius * (1.0 + 1e-12) + 1e-15;
}

}  // namespace

int orient(Point p, Point q, Point r) {
  const double det = cross(q - p, r - p);
  if (std::abs(det) <= kOrientEps) return 0;
  return det > 0 ? 1 : -1;
}

Point closest_on_segment(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + t * d;
}

double dist_point_segment(Point p, Point a, Point b) { return dist(p, closest_on_segment(p, a, b)); }

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  auto on = [](Point p, Point q, Point r) {
    return std::min(p.x, q.x) - kOrientEps <= r.x && r.x <= std::max(p.x, q.x) + kOrientEps &&
           std::min(p.y, q.y) - kOrientEps <= r.y && r.y <= std::max(p.y, q.y) + kOrientEps;
  };
  return (o1 == 0 && on(a, b, c)) || (o2 == 0 && on(a, b, d)) || (o3 == 0 && on(c, d, a)) ||
         (o4 == 0 && on(c, d, b));
}

SegmentHit intersect_segments(Point a, Point b, Point c, Point d) {
  const Point r = b - a, s = d - c;
  const double denom = cross(r, s);
  SegmentHit out;
  if (std::abs(denom) < 1e-300) return out;
  const Point ac = c - a;
  out.s = cross(ac, s) / denom;
  out.t = cross(ac, r) / denom;
  out.hit = out.s >= 0.0 && out.s <= 1.0 && out.t >= 0.0 && out.t <= 1.0;
  return out;
}

bool circumcircle(Point a, Point b, Point c, Point& center, double& radius) {
  const Point ab = b - a, ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  const double scale = std::max({dot(ab, ab), dot(ac, ac), 1e-300});
  if (std::abs(d) <= 1e-14 * scale) return false;
  const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  const Point off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  center = a + off;
  radius = norm(off);
  return true;
}

Ball Ball::disk(Point c, double r) {
  Ball b;
  b.kind = Kind::Disk;
  b.center = c;
  b.radius = r;
  return b;
}

Ball Ball::exterior(Point c, double r) {
  Ball b;
  b.kind = Kind::ExteriorDisk;
  b.center = c;
  b.radius = r;
  return b;
}

Ball Ball::half_plane(Point anchor, Point inward_normal) {
  Ball b;
  b.kind = Kind::HalfPlane;
  b.anchor = anchor;
  b.normal = unit(inward_normal);
  return b;
}

double Ball::signed_distance(Point p) const {
  switch (kind) {
    case Kind::Disk: return dist(p, center) - radius;
    case Kind::ExteriorDisk: return radius - dist(p, center);
    case Kind::HalfPlane: return -dot(p - anchor, normal);
  }
  return 0.0;
}

double Ball::boundary_coordinate(Point p) const {
  if (kind == Kind::HalfPlane) return dot(p - anchor, line_direction());
  return wrap_positive(std::atan2(p.y - center.y, p.x - center.x));
}

Point Ball::boundary_point(double coordinate) const {
  if (kind == Kind::HalfPlane) return anchor + coordinate * line_direction();
  return center + radius * Point{std::cos(coordinate), std::sin(coordinate)};
}

std::vector<Point> CircularArc::sample(int n, double far) const {
  n = std::max(n, 1);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  switch (kind) {
    case Kind::Segment:
      for (int k = 0; k <= n; ++k) out.push_back(a + (static_cast<double>(k) / n) * (b - a));
      break;
    case Kind::Circle: {
      const double start = std::atan2(a.y - center.y, a.x - center.x);
      for (int k = 0; k <= n; ++k) {
        const double th = start + sweep * k / n;
        out.push_back(center + radius * Point{std::cos(th), std::sin(th)});
      }
      out.front() = a;
      out.back() = b;
      break;
    }
    case Kind::OuterRays: {
      const Point da = unit(a - b);
      const int half = std::max(n / 2, 1);
      for (int k = 0; k <= half; ++k) out.push_back(a + (far * k / half) * da);
      for (int k = half; k >= 0; --k) out.push_back(b - (far * k / half) * da);
      break;
    }
  }
  return out;
}

double CircularArc::diameter() const {
  switch (kind) {
    case Kind::Segment: return dist(a, b);
    case Kind::Circle: return std::abs(sweep) >= std::numbers::pi ? 2.0 * radius : dist(a, b);
    case Kind::OuterRays: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double CircularArc::distance(Point p) const {
  switch (kind) {
    case Kind::Segment: return dist_point_segment(p, a, b);
    case Kind::Circle: {
      const double start = std::atan2(a.y - center.y, a.x - center.x);
      double rel = std::atan2(p.y - center.y, p.x - center.x) - start;
      rel = sweep >= 0 ? wrap_positive(rel) : -wrap_positive(-rel);
      if (std::abs(rel) <= std::abs(sweep)) return std::abs(dist(p, center) - radius);
      return std::min(dist(p, a), dist(p, b));
    }
    case Kind::OuterRays: {
      const Point da = unit(a - b);
      auto ray = [&](Point o, Point d) {
        const double t = std::max(0.0, dot(p - o, d));
        return dist(p, o + t * d);
      };
      return std::min(ray(a, da), ray(b, -da));
    }
  }
  return 0.0;
}

int CircularArc::side(Point p, double tol) const {
  double v = 0;
  if (kind == Kind::Circle) {
    v = dist(p, center) - radius;
  } else {
    v = cross(unit(b - a), p - a);
  }
  if (std::abs(v) <= tol) return 0;
  return v > 0 ? 1 : -1;
}

Ball min_enclosing_ball(std::span<const Point> points, std::uint64_t seed) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "min_enclosing_ball of an empty set");
  std::vector<Point> pts(points.begin(), points.end());
  std::mt19937_64 rng(seed);
  std::shuffle(pts.begin(), pts.end(), rng);

  Ball d = Ball::disk(pts[0], 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(d, pts[i])) continue;
    d = Ball::disk(pts[i], 0.0);
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(d, pts[j])) continue;
      d = disk_from_two(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (inside(d, pts[k])) continue;
        d = disk_from_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return d;
}

Point invert(Point p, Point pole) {
  const Point d = p - pole;
  const double r2 = dot(d, d);
  if (r2 == 0.0) throw Error(ErrorKind::PoleInput, "inversion of the pole itself");
  // 1 / conj(d) = d / |d|^2
  return pole + d / r2;
}

CircularArc perpendicular_arc(const Ball& ball, Point a, Point b) {
  if (dist(a, b) <= kTolerance) throw Error(ErrorKind::DegenerateChord, "chord endpoints coincide");
  const double on = kTolerance * (ball.kind == Ball::Kind::HalfPlane ? 1.0 : std::max(1.0, ball.radius));
  if (ball.boundary_distance(a) > on || ball.boundary_distance(b) > on)
    throw Error(ErrorKind::NotOnBoundary, "chord endpoints must lie on the ball boundary");

  CircularArc arc;
  arc.a = a;
  arc.b = b;

  auto finish_circle = [&](Point o, double rho, Point mid) {
    arc.kind = CircularArc::Kind::Circle;
    arc.center = o;
    arc.radius = rho;
    arc.mid = mid;
    const double ta = std::atan2(a.y - o.y, a.x - o.x);
    const double ccw = wrap_positive(std::atan2(b.y - o.y, b.x - o.x) - ta);
    const double to_mid = wrap_positive(std::atan2(mid.y - o.y, mid.x - o.x) - ta);
    arc.sweep = to_mid < ccw ? ccw : ccw - kTwoPi;
  };

  if (ball.kind == Ball::Kind::HalfPlane) {
    const Point o = (a + b) / 2.0;
    const double rho = dist(a, b) / 2.0;
    finish_circle(o, rho, o + rho * ball.normal);
    return arc;
  }

  const Point ua = unit(a - ball.center), ub = unit(b - ball.center);
  const double c = dot(ua, ub);
  if (1.0 + c <= 1e-12) {
    if (ball.kind == Ball::Kind::Disk) {
      arc.kind = CircularArc::Kind::Segment;
      arc.mid = (a + b) / 2.0;
    } else {
      arc.kind = CircularArc::Kind::OuterRays;
      arc.mid = a + ball.radius * unit(a - b);
    }
    return arc;
  }
  // Tangent lines at a and b meet at the center of the orthogonal circle.
  const Point o = ball.center + (ball.radius / (1.0 + c)) * (ua + ub);
  const double rho = dist(o, a);
  const Point toward_center = unit(ball.center - o);
  const Point mid = ball.kind == Ball::Kind::Disk ? o + rho * toward_center : o - rho * toward_center;
  finish_circle(o, rho, mid);
  return arc;
}

}  // namespace planetopo::geom
