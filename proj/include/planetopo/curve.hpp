#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "planetopo/geom.hpp"

namespace planetopo::maps {
class PlaneMap;
}

namespace planetopo::curve {

using geom::Point;

/// Positively oriented simple closed polyline, parameterized by normalized arc
/// length t in [0,1).
class OrientedClosedCurve {
public:
  /// Throws InvalidCurve unless the polygon is simple and counterclockwise.
  explicit OrientedClosedCurve(std::vector<Point> vertices);

  /// Reverses clockwise input before validating.
  static OrientedClosedCurve from_polygon(std::vector<Point> vertices);
  static OrientedClosedCurve circle(Point center, double radius, int n = 64);
  static OrientedClosedCurve square(Point center, double half_side);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double length() const { return length_; }
  double signed_area() const;

  Point at(double t) const;
  /// Unit tangent of the edge containing t.
  Point tangent(double t) const;
  Point outward_normal(double t) const;
  double vertex_parameter(std::size_t i) const { return params_[i]; }
  const std::vector<double>& vertex_parameters() const { return params_; }
  /// Parameter of the nearest point of the curve.
  double project(Point p) const;
  double distance(Point p) const;

  /// Points at `n` equally spaced parameters starting at t = 0.
  std::vector<Point> sample(int n) const;
  /// Splits every edge into `factor` pieces; the point set is unchanged.
  OrientedClosedCurve refined(int factor) const;

private:
  std::vector<Point> vertices_;
  std::vector<double> params_;  // params_[i] = t of vertex i
  double length_ = 0.0;
};

/// Even-odd membership in T(S). Throws OnCurve within `tol` of S.
bool contains(const OrientedClosedCurve& s, Point p, double tol = geom::kTolerance);

/// Counterclockwise subarc [a,b] of a curve. The parent must outlive the arc.
struct CurveArc {
  const OrientedClosedCurve* parent = nullptr;
  double a = 0.0;
  double b = 0.0;
  bool full = false;

  CurveArc() = default;
  /// Throws InvalidPartition when a == b (use whole()).
  CurveArc(const OrientedClosedCurve& s, double a, double b);
  static CurveArc whole(const OrientedClosedCurve& s, double start = 0.0);

  /// Parameter length in (0, 1].
  double span() const;
  /// Wrapped curve parameter at fraction u in [0,1] of the arc.
  double param(double u) const;
  Point at(double u) const { return parent->at(param(u)); }
  Point start() const { return parent->at(a); }
  Point end() const { return parent->at(b); }
  /// [b,a]; the two arcs cover the circle exactly once.
  CurveArc complement() const;
  /// Arc fractions of the parent's vertices strictly inside the arc.
  std::vector<double> interior_breaks() const;
  /// Polyline through the arc with at least `n` pieces and every vertex.
  std::vector<Point> polyline(int n) const;
};

/// Wrap a parameter into [0,1).
double wrap01(double t);

/// Compact set made of isolated points, polylines and filled polygons.
class Compactum {
public:
  static Compactum unit_square();
  static Compactum segment(Point a, Point b);
  static Compactum points(std::vector<Point> pts);
  static Compactum polygon(std::vector<Point> vertices);
  static Compactum polyline(std::vector<Point> vertices);

  void add_point(Point p);
  void add_polyline(std::vector<Point> vertices);
  /// Closed polygon together with its interior.
  void add_polygon(std::vector<Point> vertices);
  Compactum& merge(const Compactum& other);

  bool empty() const;
  const std::vector<Point>& isolated() const { return points_; }
  const std::vector<std::vector<Point>>& polylines() const { return polylines_; }
  const std::vector<std::vector<Point>>& polygons() const { return polygons_; }

  /// Distance to the set (zero inside filled polygons).
  double distance(Point p) const;
  Point nearest(Point p) const;
  /// Farthest point of the set from p.
  Point farthest(Point p) const;
  bool contains(Point p, double tol = geom::kTolerance) const;
  /// Boundary segments; isolated points appear as degenerate segments.
  std::vector<std::pair<Point, Point>> segments() const;
  /// Points along the boundary at spacing at most h, including all vertices.
  std::vector<Point> boundary_samples(double h) const;
  /// All vertices and isolated points.
  std::vector<Point> vertices() const;
  geom::Window bounds() const;

private:
  std::vector<Point> points_;
  std::vector<std::vector<Point>> polylines_;
  std::vector<std::vector<Point>> polygons_;
};

/// Occupancy grid over a window.
class Region {
public:
  Region() = default;
  /// `resolution` is cells per unit length; throws BadResolution when <= 0.
  Region(const geom::Window& window, double resolution);

  const geom::Window& window() const { return window_; }
  double resolution() const { return resolution_; }
  double cell() const { return cell_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  bool at(int i, int j) const { return cells_[index(i, j)] != 0; }
  void set(int i, int j, bool v = true) { cells_[index(i, j)] = v ? 1 : 0; }
  bool valid(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  Point center(int i, int j) const;
  std::pair<int, int> cell_of(Point p) const;
  /// Membership of the cell containing p; false outside the window.
  bool contains(Point p) const;

  /// Marks every cell meeting the compactum (within half a cell diagonal)
  /// and every cell whose center lies in a filled polygon.
  void paint(const Compactum& k);
  void paint_polyline(std::span<const Point> pts, bool closed = false);
  void paint_disk(Point c, double r);

  std::size_t count() const;
  double area() const { return static_cast<double>(count()) * cell_ * cell_; }
  Region& operator|=(const Region& o);
  /// Cells set here but not in o.
  Region minus(const Region& o) const;
  bool operator==(const Region& o) const { return cells_ == o.cells_; }

  /// 4-connected components of set cells, as lists of linear indices.
  std::vector<std::vector<int>> components() const;
  /// Set cells with a 4-neighbour outside the set or on the window edge.
  std::vector<std::pair<int, int>> boundary_cells() const;

  const std::vector<std::uint8_t>& raw() const { return cells_; }
  int index(int i, int j) const { return j * nx_ + i; }

private:
  geom::Window window_;
  double resolution_ = 1.0;
  double cell_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> cells_;
};

Region rasterize(const Compactum& x, const geom::Window& window, double resolution);

/// Set plus every complementary component that does not reach the window edge.
/// The complement is taken 4-connected so diagonal gaps do not leak.
Region topological_hull(const Region& x);
Region topological_hull(const Compactum& x, const geom::Window& window, double resolution);

/// Component of S minus X: an open subarc of S with both endpoints on X.
struct Crosscut {
  CurveArc arc;
  std::vector<Point> path;
  Region shadow;
};

/// Crosscuts of S relative to X with their shadows. Throws NoContact when the
/// contact S ∩ X spans less than two grid cells.
std::vector<Crosscut> crosscut_components(const OrientedClosedCurve& s, const Compactum& x,
                                          const geom::Window& window, double resolution);

/// Shadow of an open arc Q with endpoints on X: the bounded complementary
/// components of T(X) ∪ Q that are not already in T(X).
Region shadow_of(const Region& hull_x, std::span<const Point> q);

struct BumpingCurve {
  OrientedClosedCurve curve;
  /// Parameters a_0 < ... < a_n of the contact points on X.
  std::vector<double> partition;
  std::vector<Point> contacts;
};

/// Offset contour of T(X) at distance `mesh`, pinched onto X at evenly spaced
/// vertices so that each arc between contacts is disjoint from its image.
BumpingCurve bumping_curve(const Compactum& x, const maps::PlaneMap& f, double mesh,
                           const geom::Window& window, double resolution, double tolerance = geom::kTolerance);

}  // namespace planetopo::curve
