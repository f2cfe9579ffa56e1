#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace planetopo::geom {

/// Geometric coincidence tolerance in window units.
inline constexpr double kTolerance = 1e-9;
/// Values of the orientation determinant inside this band are reported as 0.
inline constexpr double kOrientEps = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point() = default;
  constexpr Point(double x_, double y_) : x(x_), y(y_) {}
  Point(std::complex<double> z) : x(z.real()), y(z.imag()) {}

  std::complex<double> complex() const { return {x, y}; }

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator-(Point a) { return {-a.x, -a.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
  Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point unit(Point a) { return a / norm(a); }
/// Rotate by +90 degrees.
inline constexpr Point perp(Point a) { return {-a.y, a.x}; }
inline Point rotate(Point a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline bool finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Axis-aligned rectangle standing in for the plane; its boundary stands in
/// for infinity.
struct Window {
  double xmin = -2, xmax = 2, ymin = -2, ymax = 2;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }
  Point center() const { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }
  bool contains(Point p, double margin = 0.0) const {
    return p.x >= xmin + margin && p.x <= xmax - margin && p.y >= ymin + margin && p.y <= ymax - margin;
  }
  Window expanded(double by) const { return {xmin - by, xmax + by, ymin - by, ymax + by}; }
};

/// Sign of twice the signed area of (p, q, r); |det| <= 1e-12 counts as 0.
int orient(Point p, Point q, Point r);

double dist_point_segment(Point p, Point a, Point b);
Point closest_on_segment(Point p, Point a, Point b);

/// Proper or touching intersection of closed segments [a,b] and [c,d].
bool segments_intersect(Point a, Point b, Point c, Point d);

struct SegmentHit {
  bool hit = false;
  double s = 0.0;  // parameter along [a,b]
  double t = 0.0;  // parameter along [c,d]
};
/// Intersection parameters of two non-parallel segments; hit=false when
/// parallel or disjoint.
SegmentHit intersect_segments(Point a, Point b, Point c, Point d);

/// A closed round ball of the Riemann sphere restricted to the plane.
struct Ball {
  enum class Kind { Disk, HalfPlane, ExteriorDisk };

  Kind kind = Kind::Disk;
  Point center;       // Disk / ExteriorDisk
  double radius = 0;  // Disk / ExteriorDisk
  Point anchor;       // HalfPlane: a point on the boundary line
  Point normal;       // HalfPlane: unit normal pointing into the ball

  static Ball disk(Point c, double r);
  static Ball exterior(Point c, double r);
  static Ball half_plane(Point anchor, Point inward_normal);

  /// Signed distance to the boundary; negative in the interior of the ball.
  double signed_distance(Point p) const;
  bool contains(Point p, double tol = kTolerance) const { return signed_distance(p) <= tol; }
  double boundary_distance(Point p) const { return std::abs(signed_distance(p)); }

  /// Circular coordinate on the boundary: an angle for disks, the position
  /// along the line for half-planes.
  double boundary_coordinate(Point p) const;
  Point boundary_point(double coordinate) const;
  /// Unit direction of the boundary line (HalfPlane only).
  Point line_direction() const { return {normal.y, -normal.x}; }
};

/// Arc of a circle, a straight segment, or the two rays of a line outside a
/// segment (the geodesic through infinity of an exterior disk).
struct CircularArc {
  enum class Kind { Segment, Circle, OuterRays };

  Kind kind = Kind::Segment;
  Point a, b;
  Point center;       // Circle
  double radius = 0;  // Circle
  Point mid;          // a point on the arc strictly between a and b
  /// Sweep from a to b on the supporting circle: positive is counterclockwise.
  double sweep = 0;

  /// Points along the arc from a to b inclusive. OuterRays are clipped at
  /// distance `far` from the segment midpoint and returned as two pieces
  /// joined through the far ends.
  std::vector<Point> sample(int n, double far = 1e3) const;
  /// Euclidean diameter of the closed arc (infinite for OuterRays).
  double diameter() const;
  double distance(Point p) const;
  /// +1 / -1 for the two sides of the supporting circle or line, 0 on it.
  int side(Point p, double tol = 0.0) const;
};

/// Smallest closed disk containing all points, by the randomized incremental
/// minidisk procedure with a seeded shuffle.
Ball min_enclosing_ball(std::span<const Point> points, std::uint64_t seed = 0x5eed);

/// Inversion z -> pole + 1 / conj(z - pole).
Point invert(Point p, Point pole);

/// Geodesic of the ball interior joining two boundary points: the arc of the
/// circle through a and b that meets the boundary at right angles.
CircularArc perpendicular_arc(const Ball& ball, Point a, Point b);

/// Circle through three points; returns false when they are collinear.
bool circumcircle(Point a, Point b, Point c, Point& center, double& radius);

}  // namespace planetopo::geom
