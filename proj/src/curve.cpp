#include "planetopo/curve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "planetopo/error.hpp"
#include "planetopo/maps.hpp"

namespace planetopo::curve {

using geom::cross;
using geom::dist;
using geom::dot;

double wrap01(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

namespace {

double polygon_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 1, n = v.size(); i + 1 < n; ++i) a += cross(v[i] - v[0], v[i + 1] - v[0]);
  return a / 2.0;
}

bool even_odd(const std::vector<Point>& v, Point p) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const Point a = v[i], b = v[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

void check_simple(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
    if (std::abs(cross(b - a, c - b)) <= 1e-14 * dist(a, b) * dist(b, c) && dot(b - a, c - b) < 0)
      throw Error(ErrorKind::InvalidCurve, "polygon folds back at vertex " + std::to_string((i + 1) % n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i], b = v[(i + 1) % n];
    const double xlo = std::min(a.x, b.x), xhi = std::max(a.x, b.x);
    const double ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Point c = v[j], d = v[(j + 1) % n];
      if (std::max(c.x, d.x) < xlo || std::min(c.x, d.x) > xhi || std::max(c.y, d.y) < ylo ||
          std::min(c.y, d.y) > yhi)
        continue;
      if (geom::segments_intersect(a, b, c, d))
        throw Error(ErrorKind::InvalidCurve,
                    "polygon is not simple: edges " + std::to_string(i) + " and " + std::to_string(j) + " meet");
    }
  }
}

}  // namespace

OrientedClosedCurve::OrientedClosedCurve(std::vector<Point> vertices) {
  for (const Point& p : vertices) {
    if (!geom::finite(p)) throw Error(ErrorKind::InvalidCurve, "non-finite vertex");
    if (vertices_.empty() || dist(vertices_.back(), p) > 1e-12) vertices_.push_back(p);
  }
  while (vertices_.size() > 1 && dist(vertices_.front(), vertices_.back()) <= 1e-12) vertices_.pop_back();
  if (vertices_.size() < 3) throw Error(ErrorKind::InvalidCurve, "a closed curve needs at least 3 vertices");
  check_simple(vertices_);
  if (polygon_area(vertices_) <= 0.0) throw Error(ErrorKind::InvalidCurve, "curve is not counterclockwise");

  const std::size_t n = vertices_.size();
  params_.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    params_[i] = acc;
    acc += dist(vertices_[i], vertices_[(i + 1) % n]);
  }
  length_ = acc;
  for (double& p : params_) p /= length_;
}

OrientedClosedCurve OrientedClosedCurve::from_polygon(std::vector<Point> vertices) {
  if (vertices.size() >= 3 && polygon_area(vertices) < 0) std::reverse(vertices.begin(), vertices.end());
  return OrientedClosedCurve(std::move(vertices));
}

OrientedClosedCurve OrientedClosedCurve::circle(Point center, double radius, int n) {
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    v.push_back(center + radius * Point{std::cos(th), std::sin(th)});
  }
  return OrientedClosedCurve(std::move(v));
}

OrientedClosedCurve OrientedClosedCurve::square(Point c, double h) {
  return OrientedClosedCurve({c + Point{-h, -h}, c + Point{h, -h}, c + Point{h, h}, c + Point{-h, h}});
}

double OrientedClosedCurve::signed_area() const { return polygon_area(vertices_); }

namespace {

std::size_t edge_of(const std::vector<double>& params, double t) {
  auto it = std::upper_bound(params.begin(), params.end(), t);
  return static_cast<std::size_t>(std::distance(params.begin(), it)) - 1;
}

}  // namespace

Point OrientedClosedCurve::at(double t) const {
  t = wrap01(t);
  const std::size_t i = edge_of(params_, t);
  const std::size_t n = vertices_.size();
  const double t1 = i + 1 < n ? params_[i + 1] : 1.0;
  const double u = t1 > params_[i] ? (t - params_[i]) / (t1 - params_[i]) : 0.0;
  return vertices_[i] + u * (vertices_[(i + 1) % n] - vertices_[i]);
}

Point OrientedClosedCurve::tangent(double t) const {
  const std::size_t i = edge_of(params_, wrap01(t));
  return geom::unit(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
}

Point OrientedClosedCurve::outward_normal(double t) const {
  const Point d = tangent(t);
  return {d.y, -d.x};
}

double OrientedClosedCurve::project(Point p) const {
  const std::size_t n = vertices_.size();
  double best = std::numeric_limits<double>::infinity(), best_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i], b = vertices_[(i + 1) % n];
    const Point q = geom::closest_on_segment(p, a, b);
    const double d = dist(p, q);
    if (d < best) {
      best = d;
      const double t1 = i + 1 < n ? params_[i + 1] : 1.0;
      const double len = dist(a, b);
      best_t = params_[i] + (len > 0 ? dist(a, q) / len : 0.0) * (t1 - params_[i]);
    }
  }
  return wrap01(best_t);
}

double OrientedClosedCurve::distance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = vertices_.size(); i < n; ++i)
    best = std::min(best, geom::dist_point_segment(p, vertices_[i], vertices_[(i + 1) % n]));
  return best;
}

std::vector<Point> OrientedClosedCurve::sample(int n) const {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(at(static_cast<double>(k) / n));
  return out;
}

OrientedClosedCurve OrientedClosedCurve::refined(int factor) const {
  std::vector<Point> v;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < factor; ++k)
      v.push_back(vertices_[i] + (static_cast<double>(k) / factor) * (vertices_[(i + 1) % n] - vertices_[i]));
  return OrientedClosedCurve(std::move(v));
}

bool contains(const OrientedClosedCurve& s, Point p, double tol) {
  if (s.distance(p) <= tol) throw Error(ErrorKind::OnCurve, "point lies on the curve");
  return even_odd(s.vertices(), p);
}

CurveArc::CurveArc(const OrientedClosedCurve& s, double a_, double b_) : parent(&s), a(wrap01(a_)), b(wrap01(b_)) {
  if (std::abs(a - b) <= 1e-15) throw Error(ErrorKind::InvalidPartition, "arc endpoints coincide");
}

CurveArc CurveArc::whole(const OrientedClosedCurve& s, double start) {
  CurveArc arc;
  arc.parent = &s;
  arc.a = arc.b = wrap01(start);
  arc.full = true;
  return arc;
}

double CurveArc::span() const {
  if (full) return 1.0;
  const double s = wrap01(b - a);
  return s == 0.0 ? 1.0 : s;
}

double CurveArc::param(double u) const { return wrap01(a + u * span()); }

CurveArc CurveArc::complement() const {
  if (full) return *this;
  return CurveArc(*parent, b, a);
}

std::vector<double> CurveArc::interior_breaks() const {
  std::vector<double> out;
  const double sp = span();
  for (double p : parent->vertex_parameters()) {
    const double u = wrap01(p - a) / sp;
    if (u > 0.0 && u < 1.0) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> CurveArc::polyline(int n) const {
  std::vector<double> us = interior_breaks();
  for (int k = 0; k <= n; ++k) us.push_back(static_cast<double>(k) / n);
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end(), [](double x, double y) { return y - x < 1e-15; }), us.end());
  std::vector<Point> out;
  out.reserve(us.size());
  for (double u : us) out.push_back(at(u));
  out.front() = start();
  out.back() = end();
  return out;
}

Compactum Compactum::unit_square() { return polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

Compactum Compactum::segment(Point a, Point b) { return polyline({a, b}); }

Compactum Compactum::points(std::vector<Point> pts) {
  Compactum k;
  k.points_ = std::move(pts);
  return k;
}

Compactum Compactum::polygon(std::vector<Point> vertices) {
  Compactum k;
  k.add_polygon(std::move(vertices));
  return k;
}

Compactum Compactum::polyline(std::vector<Point> vertices) {
  Compactum k;
  k.add_polyline(std::move(vertices));
  return k;
}

void Compactum::add_point(Point p) { points_.push_back(p); }

void Compactum::add_polyline(std::vector<Point> vertices) {
  if (vertices.size() == 1) {
    points_.push_back(vertices[0]);
    return;
  }
  if (!vertices.empty()) polylines_.push_back(std::move(vertices));
}

void Compactum::add_polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) {
    add_polyline(std::move(vertices));
    return;
  }
  if (polygon_area(vertices) < 0) std::reverse(vertices.begin(), vertices.end());
  polygons_.push_back(std::move(vertices));
}

Compactum& Compactum::merge(const Compactum& o) {
  points_.insert(points_.end(), o.points_.begin(), o.points_.end());
  polylines_.insert(polylines_.end(), o.polylines_.begin(), o.polylines_.end());
  polygons_.insert(polygons_.end(), o.polygons_.begin(), o.polygons_.end());
  return *this;
}

bool Compactum::empty() const { return points_.empty() && polylines_.empty() && polygons_.empty(); }

std::vector<std::pair<Point, Point>> Compactum::segments() const {
  std::vector<std::pair<Point, Point>> out;
  for (const Point& p : points_) out.emplace_back(p, p);
  for (const auto& l : polylines_)
    for (std::size_t i = 0; i + 1 < l.size(); ++i) out.emplace_back(l[i], l[i + 1]);
  for (const auto& g : polygons_)
    for (std::size_t i = 0; i < g.size(); ++i) out.emplace_back(g[i], g[(i + 1) % g.size()]);
  return out;
}

double Compactum::distance(Point p) const {
  for (const auto& g : polygons_)
    if (even_odd(g, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : segments()) best = std::min(best, geom::dist_point_segment(p, a, b));
  return best;
}

Point Compactum::nearest(Point p) const {
  if (empty()) throw Error(ErrorKind::EmptyInput, "nearest point of an empty set");
  for (const auto& g : polygons_)
    if (even_odd(g, p)) return p;
  double best = std::numeric_limits<double>::infinity();
  Point out;
  for (const auto& [a, b] : segments()) {
    const Point q = geom::closest_on_segment(p, a, b);
    const double d = dist(p, q);
    if (d < best) {
      best = d;
      out = q;
    }
  }
  return out;
}

Point Compactum::farthest(Point p) const {
  if (empty()) throw Error(ErrorKind::EmptyInput, "farthest point of an empty set");
  double best = -1.0;
  Point out;
  for (const Point& q : vertices()) {
    const double d = dist(p, q);
    if (d > best) {
      best = d;
      out = q;
    }
  }
  return out;
}

bool Compactum::contains(Point p, double tol) const { return distance(p) <= tol; }

std::vector<Point> Compactum::boundary_samples(double h) const {
  std::vector<Point> out(points_.begin(), points_.end());
  auto edge = [&](Point a, Point b) {
    const int m = std::max(1, static_cast<int>(std::ceil(dist(a, b) / h)));
    for (int k = 0; k < m; ++k) out.push_back(a + (static_cast<double>(k) / m) * (b - a));
  };
  for (const auto& l : polylines_) {
    for (std::size_t i = 0; i + 1 < l.size(); ++i) edge(l[i], l[i + 1]);
    out.push_back(l.back());
  }
  for (const auto& g : polygons_)
    for (std::size_t i = 0; i < g.size(); ++i) edge(g[i], g[(i + 1) % g.size()]);
  return out;
}

std::vector<Point> Compactum::vertices() const {
  std::vector<Point> out(points_.begin(), points_.end());
  for (const auto& l : polylines_) out.insert(out.end(), l.begin(), l.end());
  for (const auto& g : polygons_) out.insert(out.end(), g.begin(), g.end());
  return out;
}

geom::Window Compactum::bounds() const {
  geom::Window w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : vertices()) {
    w.xmin = std::min(w.xmin, p.x);
    w.xmax = std::max(w.xmax, p.x);
    w.ymin = std::min(w.ymin, p.y);
    w.ymax = std::max(w.ymax, p.y);
  }
  return w;
}

Region::Region(const geom::Window& window, double resolution) : window_(window), resolution_(resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw Error(ErrorKind::BadResolution, "resolution must be positive");
  cell_ = 1.0 / resolution;
  nx_ = std::max(1, static_cast<int>(std::ceil(window.width() / cell_ - 1e-9)));
  ny_ = std::max(1, static_cast<int>(std::ceil(window.height() / cell_ - 1e-9)));
  if (static_cast<double>(nx_) * ny_ > 1.2e8) throw Error(ErrorKind::BadResolution, "grid too large");
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
}

Point Region::center(int i, int j) const {
  return {window_.xmin + (i + 0.5) * cell_, window_.ymin + (j + 0.5) * cell_};
}

std::pair<int, int> Region::cell_of(Point p) const {
  return {static_cast<int>(std::floor((p.x - window_.xmin) / cell_)),
          static_cast<int>(std::floor((p.y - window_.ymin) / cell_))};
}

bool Region::contains(Point p) const {
  const auto [i, j] = cell_of(p);
  return valid(i, j) && at(i, j);
}

void Region::paint_polyline(std::span<const Point> pts, bool closed) {
  auto mark = [&](Point p) {
    const auto [i, j] = cell_of(p);
    if (valid(i, j)) set(i, j);
  };
  if (pts.size() == 1) mark(pts[0]);
  const std::size_t m = closed ? pts.size() : pts.size() - 1;
  for (std::size_t k = 0; k < m && pts.size() > 1; ++k) {
    const Point a = pts[k], b = pts[(k + 1) % pts.size()];
    const int steps = std::max(1, static_cast<int>(std::ceil(4.0 * dist(a, b) / cell_)));
    for (int s = 0; s <= steps; ++s) mark(a + (static_cast<double>(s) / steps) * (b - a));
  }
}

void Region::paint_disk(Point c, double r) {
  const auto [i0, j0] = cell_of(c - Point{r, r});
  const auto [i1, j1] = cell_of(c + Point{r, r});
  for (int j = std::max(0, j0); j <= std::min(ny_ - 1, j1); ++j)
    for (int i = std::max(0, i0); i <= std::min(nx_ - 1, i1); ++i)
      if (dist(center(i, j), c) <= r) set(i, j);
  const auto [ci, cj] = cell_of(c);
  if (valid(ci, cj)) set(ci, cj);
}

void Region::paint(const Compactum& k) {
  for (const Point& p : k.isolated()) paint_polyline(std::span<const Point>(&p, 1));
  for (const auto& l : k.polylines()) paint_polyline(l, false);
  for (const auto& g : k.polygons()) {
    paint_polyline(g, true);
    geom::Window b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Point& p : g) {
      b.xmin = std::min(b.xmin, p.x);
      b.xmax = std::max(b.xmax, p.x);
      b.ymin = std::min(b.ymin, p.y);
      b.ymax = std::max(b.ymax, p.y);
    }
    const auto [i0, j0] = cell_of({b.xmin, b.ymin});
    const auto [i1, j1] = cell_of({b.xmax, b.ymax});
    for (int j = std::max(0, j0); j <= std::min(ny_ - 1, j1); ++j)
      for (int i = std::max(0, i0); i <= std::min(nx_ - 1, i1); ++i)
        if (even_odd(g, center(i, j))) set(i, j);
  }
}

std::size_t Region::count() const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1)); }

Region& Region::operator|=(const Region& o) {
  for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k] |= o.cells_[k];
  return *this;
}

Region Region::minus(const Region& o) const {
  Region out = *this;
  for (std::size_t k = 0; k < cells_.size(); ++k) out.cells_[k] = cells_[k] && !o.cells_[k];
  return out;
}

std::vector<std::vector<int>> Region::components() const {
  std::vector<int> label(cells_.size(), -1);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(cells_.size()); ++start) {
    if (!cells_[start] || label[start] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    label[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      out[id].push_back(c);
      const int i = c % nx_, j = c / nx_;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& q : nb) {
        if (!valid(q[0], q[1])) continue;
        const int k = index(q[0], q[1]);
        if (cells_[k] && label[k] < 0) {
          label[k] = id;
          stack.push_back(k);
        }
      }
    }
  }
  return out;
}

std::vector<std::pair<int, int>> Region::boundary_cells() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      if (!at(i, j)) continue;
      const bool edge = i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1 || !at(i + 1, j) || !at(i - 1, j) ||
                        !at(i, j + 1) || !at(i, j - 1);
      if (edge) out.emplace_back(i, j);
    }
  return out;
}

Region rasterize(const Compactum& x, const geom::Window& window, double resolution) {
  Region r(window, resolution);
  r.paint(x);
  return r;
}

Region topological_hull(const Region& x) {
  const int nx = x.nx(), ny = x.ny();
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(nx) * ny, 0);
  std::vector<int> stack;
  auto seed = [&](int i, int j) {
    const int k = x.index(i, j);
    if (!x.at(i, j) && !outside[k]) {
      outside[k] = 1;
      stack.push_back(k);
    }
  };
  for (int i = 0; i < nx; ++i) {
    seed(i, 0);
    seed(i, ny - 1);
  }
  for (int j = 0; j < ny; ++j) {
    seed(0, j);
    seed(nx - 1, j);
  }
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    const int i = c % nx, j = c / nx;
    if (i + 1 < nx) seed(i + 1, j);
    if (i > 0) seed(i - 1, j);
    if (j + 1 < ny) seed(i, j + 1);
    if (j > 0) seed(i, j - 1);
  }
  Region out = x;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (!outside[x.index(i, j)]) out.set(i, j);
  return out;
}

Region topological_hull(const Compactum& x, const geom::Window& window, double resolution) {
  return topological_hull(rasterize(x, window, resolution));
}

Region shadow_of(const Region& hull_x, std::span<const Point> q) {
  Region with_q = hull_x;
  with_q.paint_polyline(q, false);
  return topological_hull(with_q).minus(with_q);
}

std::vector<Crosscut> crosscut_components(const OrientedClosedCurve& s, const Compactum& x,
                                          const geom::Window& window, double resolution) {
  const Region hull_x = topological_hull(x, window, resolution);
  const double cell = hull_x.cell();
  const double tol = std::max(geom::kTolerance, 0.5 * cell);

  std::vector<double> ts = s.vertex_parameters();
  const int n = std::max(64, static_cast<int>(std::ceil(4.0 * s.length() / cell)));
  for (int k = 0; k < n; ++k) ts.push_back(static_cast<double>(k) / n);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  const std::size_t m = ts.size();
  std::vector<char> on(m);
  geom::Window extent{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  bool any = false;
  for (std::size_t k = 0; k < m; ++k) {
    const Point p = s.at(ts[k]);
    on[k] = x.distance(p) <= tol;
    if (!on[k]) continue;
    any = true;
    extent = {std::min(extent.xmin, p.x), std::max(extent.xmax, p.x), std::min(extent.ymin, p.y),
              std::max(extent.ymax, p.y)};
  }
  if (!any || extent.diagonal() < 2.0 * cell)
    throw Error(ErrorKind::NoContact, "contact of the curve with the set spans fewer than two grid cells");

  std::vector<Crosscut> out;
  const auto first_on = static_cast<std::size_t>(std::find(on.begin(), on.end(), 1) - on.begin());
  // Walk once around the circle starting from a contact sample.
  std::size_t k = 0;
  while (k < m) {
    const std::size_t idx = (first_on + k) % m;
    if (on[idx]) {
      ++k;
      continue;
    }
    const std::size_t begin = (first_on + k - 1) % m;
    std::size_t len = 0;
    while (k < m && !on[(first_on + k) % m]) {
      ++k;
      ++len;
    }
    const std::size_t end = (first_on + k) % m;
    Crosscut cc;
    cc.arc = CurveArc(s, ts[begin], ts[end]);
    cc.path = cc.arc.polyline(std::max<int>(8, static_cast<int>(len)));
    cc.shadow = shadow_of(hull_x, cc.path);
    out.push_back(std::move(cc));
  }
  return out;
}

namespace {

// Marching squares on a node grid; returns closed loops.
std::vector<std::vector<Point>> contour_loops(const std::vector<double>& phi, int nx, int ny, Point origin,
                                              double g) {
  auto node = [&](int i, int j) { return phi[static_cast<std::size_t>(j) * nx + i]; };
  auto pos = [&](int i, int j) { return origin + Point{i * g, j * g}; };
  // Edge keys: horizontal edges (i,j)-(i+1,j) and vertical edges (i,j)-(i,j+1).
  auto hkey = [&](int i, int j) { return 2L * (static_cast<long>(j) * nx + i); };
  auto vkey = [&](int i, int j) { return 2L * (static_cast<long>(j) * nx + i) + 1; };
  std::map<long, Point> where;
  std::map<long, std::vector<long>> adj;
  auto crossing = [&](long key, Point a, Point b, double fa, double fb) {
    if (!where.count(key)) where[key] = a + (fa / (fa - fb)) * (b - a);
  };
  auto link = [&](long k1, long k2) {
    adj[k1].push_back(k2);
    adj[k2].push_back(k1);
  };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const double f00 = node(i, j), f10 = node(i + 1, j), f11 = node(i + 1, j + 1), f01 = node(i, j + 1);
      const int mask = (f00 < 0) | ((f10 < 0) << 1) | ((f11 < 0) << 2) | ((f01 < 0) << 3);
      if (mask == 0 || mask == 15) continue;
      const long bottom = hkey(i, j), top = hkey(i, j + 1), left = vkey(i, j), right = vkey(i + 1, j);
      if ((f00 < 0) != (f10 < 0)) crossing(bottom, pos(i, j), pos(i + 1, j), f00, f10);
      if ((f01 < 0) != (f11 < 0)) crossing(top, pos(i, j + 1), pos(i + 1, j + 1), f01, f11);
      if ((f00 < 0) != (f01 < 0)) crossing(left, pos(i, j), pos(i, j + 1), f00, f01);
      if ((f10 < 0) != (f11 < 0)) crossing(right, pos(i + 1, j), pos(i + 1, j + 1), f10, f11);
      switch (mask) {
        case 1: case 14: link(left, bottom); break;
        case 2: case 13: link(bottom, right); break;
        case 3: case 12: link(left, right); break;
        case 4: case 11: link(right, top); break;
        case 6: case 9: link(bottom, top); break;
        case 7: case 8: link(left, top); break;
        case 5: case 10: {
          const bool center_in = (f00 + f10 + f11 + f01) / 4.0 < 0;
          // Inside corners joined through the center when it is inside.
          if ((mask == 5) == center_in) {
            link(left, top);
            link(bottom, right);
          } else {
            link(left, bottom);
            link(right, top);
          }
          break;
        }
        default: break;
      }
    }
  std::vector<std::vector<Point>> loops;
  std::map<long, bool> used;
  for (const auto& [start, nbrs] : adj) {
    if (used[start]) continue;
    std::vector<Point> loop;
    long prev = -1, cur = start;
    while (!used[cur]) {
      used[cur] = true;
      loop.push_back(where[cur]);
      const auto& nb = adj[cur];
      long next = -1;
      for (long c : nb)
        if (c != prev && !used[c]) {
          next = c;
          break;
        }
      if (next < 0) break;
      prev = cur;
      cur = next;
    }
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  return loops;
}

bool arcs_separated(const maps::PlaneMap& f, const std::vector<Point>& arc, double tol) {
  std::vector<Point> img;
  img.reserve(arc.size());
  for (const Point& p : arc) img.push_back(f(p));
  for (std::size_t i = 0; i + 1 < img.size(); ++i)
    for (std::size_t j = 0; j + 1 < arc.size(); ++j) {
      if (geom::segments_intersect(img[i], img[i + 1], arc[j], arc[j + 1])) return false;
    }
  for (const Point& q : img)
    for (std::size_t j = 0; j + 1 < arc.size(); ++j)
      if (geom::dist_point_segment(q, arc[j], arc[j + 1]) <= tol) return false;
  return true;
}

}  // namespace

BumpingCurve bumping_curve(const Compactum& x, const maps::PlaneMap& f, double mesh, const geom::Window& window,
                           double resolution, double tolerance) {
  if (x.empty()) throw Error(ErrorKind::EmptyInput, "bumping curve of an empty set");
  const Region hull = topological_hull(x, window, resolution);

  for (const Point& p : x.boundary_samples(hull.cell()))
    if (dist(f(p), p) < 10.0 * tolerance) throw Error(ErrorKind::FixedPointNearX, "f has a fixed point near X");
  {
    const std::size_t cells = hull.count();
    const std::size_t stride = std::max<std::size_t>(1, cells / 20000);
    std::size_t seen = 0;
    for (int j = 0; j < hull.ny(); ++j)
      for (int i = 0; i < hull.nx(); ++i)
        if (hull.at(i, j) && (seen++ % stride) == 0) {
          const Point p = hull.center(i, j);
          if (dist(f(p), p) < 10.0 * tolerance)
            throw Error(ErrorKind::FixedPointNearX, "f has a fixed point in T(X)");
        }
  }

  const double g = mesh / 8.0;
  const int nx = static_cast<int>(std::ceil(window.width() / g)) + 1;
  const int ny = static_cast<int>(std::ceil(window.height() / g)) + 1;
  const Point origin{window.xmin, window.ymin};
  std::vector<double> phi(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Point p = origin + Point{i * g, j * g};
      double v = hull.contains(p) ? -mesh : x.distance(p) - mesh;
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) {
        if (v <= 0) throw Error(ErrorKind::OutsideWindow, "offset contour leaves the window");
      }
      if (v == 0.0) v = 1e-300;
      phi[static_cast<std::size_t>(j) * nx + i] = v;
    }
  auto loops = contour_loops(phi, nx, ny, origin, g);
  if (loops.empty()) throw Error(ErrorKind::MeshTooCoarse, "no offset contour found");
  auto best = std::max_element(loops.begin(), loops.end(), [](const auto& a, const auto& b) {
    return std::abs(polygon_area(a)) < std::abs(polygon_area(b));
  });
  std::vector<Point> base = *best;
  if (polygon_area(base) < 0) std::reverse(base.begin(), base.end());

  const std::size_t n = base.size();
  const auto samples = x.boundary_samples(std::max(hull.cell(), mesh / 4.0));
  for (std::size_t k = n / 4; k >= 3; k = std::min(k - 1, k * 2 / 3)) {
    std::vector<std::size_t> snap;
    for (std::size_t j = 0; j + k / 2 < n || snap.empty(); j += k) snap.push_back(j);
    if (snap.size() < 2) continue;
    std::vector<Point> verts = base;
    std::vector<Point> contacts;
    for (std::size_t j : snap) {
      verts[j] = x.nearest(base[j]);
      contacts.push_back(verts[j]);
    }
    std::optional<OrientedClosedCurve> s;
    try {
      s.emplace(verts);
    } catch (const Error&) {
      continue;
    }
    bool encloses = true;
    for (const Point& p : samples) {
      if (s->distance(p) <= 1e-7) continue;
      if (!even_odd(s->vertices(), p)) {
        encloses = false;
        break;
      }
    }
    if (!encloses) continue;

    std::vector<double> params;
    for (const Point& c : contacts) params.push_back(s->project(c));
    std::vector<std::size_t> order(params.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return params[a] < params[b]; });
    std::vector<double> sorted_params;
    std::vector<Point> sorted_contacts;
    for (std::size_t i : order) {
      sorted_params.push_back(params[i]);
      sorted_contacts.push_back(contacts[i]);
    }

    bool ok = true;
    for (std::size_t i = 0; i < sorted_params.size() && ok; ++i) {
      const CurveArc arc(*s, sorted_params[i], sorted_params[(i + 1) % sorted_params.size()]);
      ok = arcs_separated(f, arc.polyline(64), tolerance);
    }
    if (!ok) continue;
    return BumpingCurve{*s, sorted_params, sorted_contacts};
  }
  throw Error(ErrorKind::MeshTooCoarse, "no pinching of the offset contour separates every arc from its image");
}

}  // namespace planetopo::curve
