#include "planetopo/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>

#include "planetopo/error.hpp"
#include "planetopo/maps.hpp"

namespace planetopo::variation {

using curve::CurveArc;
using curve::OrientedClosedCurve;
using geom::cross;
using geom::dist;
using geom::dot;
using geom::unit;

char label(Ray r) {
  switch (r) {
    case Ray::Plus: return '+';
    case Ray::In: return 'i';
    case Ray::Minus: return '-';
  }
  return '?';
}

namespace {

constexpr double kPi = std::numbers::pi;

double ccw_angle(Point from, Point to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a <= 0) a += 2 * kPi;
  return a;
}

Point exit_point(const geom::Window& w, Point v, Point d) {
  double t = std::numeric_limits<double>::infinity();
  if (d.x > 0) t = std::min(t, (w.xmax - v.x) / d.x);
  if (d.x < 0) t = std::min(t, (w.xmin - v.x) / d.x);
  if (d.y > 0) t = std::min(t, (w.ymax - v.y) / d.y);
  if (d.y < 0) t = std::min(t, (w.ymin - v.y) / d.y);
  return v + t * d;
}

bool on_window_edge(const geom::Window& w, Point p) {
  const double eps = 1e-9 * w.diagonal();
  return std::abs(p.x - w.xmin) <= eps || std::abs(p.x - w.xmax) <= eps || std::abs(p.y - w.ymin) <= eps ||
         std::abs(p.y - w.ymax) <= eps;
}

// Segment [p,q] misses every obstacle segment; `skip` is a radius around v
// inside which contacts are ignored.
bool segment_clear(const Obstacle& ob, Point p, Point q, Point v, double skip) {
  Point a = p, b = q;
  const double len = dist(p, q);
  if (len == 0.0) return true;
  const Point d = (q - p) / len;
  // Trim the part of the segment inside the skip disk around v.
  if (dist(a, v) < skip) {
    const double t = dot(v - a, d) + std::sqrt(std::max(0.0, skip * skip - geom::norm(v - a - dot(v - a, d) * d) *
                                                                           geom::norm(v - a - dot(v - a, d) * d)));
    if (t >= len) return true;
    a = a + t * d;
  }
  const double xlo = std::min(a.x, b.x), xhi = std::max(a.x, b.x);
  const double ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
  for (const auto& [c, e] : ob.segments) {
    if (std::max(c.x, e.x) < xlo || std::min(c.x, e.x) > xhi || std::max(c.y, e.y) < ylo ||
        std::min(c.y, e.y) > yhi)
      continue;
    if (c == e) {
      if (geom::dist_point_segment(c, a, b) <= 1e-12) return false;
      continue;
    }
    if (geom::segments_intersect(a, b, c, e)) return false;
  }
  if (ob.blocked) {
    const double step = ob.blocked->cell() / 2;
    const int n = std::max(1, static_cast<int>(std::ceil(dist(a, b) / step)));
    const double guard = std::max(skip, 3.0 * ob.blocked->cell());
    for (int k = 0; k <= n; ++k) {
      const Point s = a + (static_cast<double>(k) / n) * (b - a);
      if (dist(s, v) < guard) continue;
      if (ob.blocked->contains(s)) return false;
    }
  }
  return true;
}

bool polyline_clear(const Obstacle& ob, const std::vector<Point>& ray, Point v, double skip) {
  for (std::size_t k = 0; k + 1 < ray.size(); ++k)
    if (!segment_clear(ob, ray[k], ray[k + 1], v, skip)) return false;
  return true;
}

std::optional<Junction> straight_fan(const Obstacle& ob, Point v, Point dir, double spread,
                                     const geom::Window& w) {
  Junction j;
  j.v = v;
  j.window = w;
  j.construction = "straight";
  const double skip = 1e-7 * w.diagonal();
  const double angles[3] = {-spread, 0.0, spread};
  for (int r = 0; r < 3; ++r) {
    const Point d = geom::rotate(dir, angles[r]);
    j.rays[r] = {v, exit_point(w, v, d)};
    if (!polyline_clear(ob, j.rays[r], v, skip)) return std::nullopt;
  }
  return j;
}

std::vector<Point> offset_polyline(const std::vector<Point>& p, double e) {
  // Offsets every vertex after the first to the right of travel by e (miter
  // joins, clamped at sharp turns); the first vertex stays put.
  std::vector<Point> out{p[0]};
  for (std::size_t k = 1; k < p.size(); ++k) {
    const Point din = unit(p[k] - p[k - 1]);
    const Point dout = k + 1 < p.size() ? unit(p[k + 1] - p[k]) : din;
    const Point nin{din.y, -din.x}, nout{dout.y, -dout.x};
    Point n = nin + nout;
    const double len = geom::norm(n);
    if (len < 1e-9) {
      n = nin;
    } else {
      n = n / len;
      const double c = dot(n, nin);
      n = c > 0.6 ? n / c : n;
    }
    out.push_back(p[k] + e * n);
  }
  return out;
}

Junction traced_junction(const Obstacle& ob, Point v, Point dir, const geom::Window& w, double resolution) {
  curve::Region grid(w, resolution);
  for (const auto& [a, b] : ob.segments) {
    const Point seg[2] = {a, b};
    grid.paint_polyline(std::span<const Point>(seg, a == b ? 1 : 2));
  }
  const int nx = grid.nx(), ny = grid.ny();
  if (ob.blocked)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (ob.blocked->contains(grid.center(i, j))) grid.set(i, j);

  const double cell = grid.cell();
  // Start cells: free, near v, on the outward side, reachable by a clear segment.
  std::vector<std::pair<double, int>> starts;
  const auto [vi, vj] = grid.cell_of(v);
  const int reach = 4;
  for (int j = vj - reach; j <= vj + reach; ++j)
    for (int i = vi - reach; i <= vi + reach; ++i) {
      if (!grid.valid(i, j) || grid.at(i, j)) continue;
      const Point c = grid.center(i, j);
      if (dot(c - v, dir) <= 0) continue;
      if (!segment_clear(Obstacle{ob.segments, std::nullopt, w}, v, c, v, 1e-7 * w.diagonal())) continue;
      starts.emplace_back(dist(c, v), grid.index(i, j));
    }
  if (starts.empty()) throw Error(ErrorKind::NoEscape, "no free cell next to the junction vertex");

  // Clearance from blocked cells, in cells (breadth-first, 8-connected).
  std::vector<int> clear(static_cast<std::size_t>(nx) * ny, -1);
  std::queue<int> q;
  for (int k = 0; k < nx * ny; ++k)
    if (grid.raw()[k]) {
      clear[k] = 0;
      q.push(k);
    }
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    const int i = c % nx, j = c / nx;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int a = i + di, b = j + dj;
        if (!grid.valid(a, b)) continue;
        const int k = grid.index(a, b);
        if (clear[k] < 0) {
          clear[k] = clear[c] + 1;
          q.push(k);
        }
      }
  }
  if (q.empty() && std::all_of(clear.begin(), clear.end(), [](int c) { return c < 0; }))
    std::fill(clear.begin(), clear.end(), nx + ny);

  std::vector<double> cost(static_cast<std::size_t>(nx) * ny, std::numeric_limits<double>::infinity());
  std::vector<int> prev(static_cast<std::size_t>(nx) * ny, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (const auto& [d, k] : starts) {
    cost[k] = d / cell;
    pq.emplace(cost[k], k);
  }
  int goal = -1;
  while (!pq.empty()) {
    const auto [c0, c] = pq.top();
    pq.pop();
    if (c0 > cost[c]) continue;
    const int i = c % nx, j = c / nx;
    if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) {
      goal = c;
      break;
    }
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (!di && !dj) continue;
        const int a = i + di, b = j + dj;
        if (!grid.valid(a, b) || grid.at(a, b)) continue;
        if (di && dj && (grid.at(i + di, j) || grid.at(i, j + dj))) continue;
        const int k = grid.index(a, b);
        const double step = (di && dj) ? std::numbers::sqrt2 : 1.0;
        const double nc = c0 + step * (1.0 + 4.0 / (clear[k] + 0.5));
        if (nc < cost[k]) {
          cost[k] = nc;
          prev[k] = c;
          pq.emplace(nc, k);
        }
      }
  }
  if (goal < 0) throw Error(ErrorKind::NoEscape, "vertex is not accessible from the unbounded complement");

  std::vector<Point> path;
  for (int k = goal; k >= 0; k = prev[k]) path.push_back(grid.center(k % nx, k / nx));
  path.push_back(v);
  std::reverse(path.begin(), path.end());
  // Leave the window perpendicular to the nearest side.
  const Point last = path.back();
  const double dx0 = last.x - w.xmin, dx1 = w.xmax - last.x, dy0 = last.y - w.ymin, dy1 = w.ymax - last.y;
  const double m = std::min({dx0, dx1, dy0, dy1});
  if (m == dx0) path.push_back({w.xmin, last.y});
  else if (m == dx1) path.push_back({w.xmax, last.y});
  else if (m == dy0) path.push_back({last.x, w.ymin});
  else path.push_back({last.x, w.ymax});

  for (double e : {0.25 * cell, 0.12 * cell, 0.06 * cell}) {
    Junction j;
    j.v = v;
    j.window = w;
    j.construction = "traced";
    j.rays[static_cast<int>(Ray::In)] = path;
    j.rays[static_cast<int>(Ray::Plus)] = offset_polyline(path, e);
    j.rays[static_cast<int>(Ray::Minus)] = offset_polyline(path, -e);
    const JunctionCheck chk = check_junction(j, ob);
    if (chk.disjoint && chk.avoids_obstacle) return j;
  }
  throw Error(ErrorKind::NoEscape, "escape corridor too narrow for three disjoint rays");
}

geom::Window default_window(const std::vector<Point>& pts) {
  geom::Window w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : pts) {
    w.xmin = std::min(w.xmin, p.x);
    w.xmax = std::max(w.xmax, p.x);
    w.ymin = std::min(w.ymin, p.y);
    w.ymax = std::max(w.ymax, p.y);
  }
  return w.expanded(std::max(0.5, 0.5 * std::max(w.width(), w.height())));
}

const std::vector<double>& default_spreads() {
  static const std::vector<double> s{kPi / 3, kPi / 6, kPi / 12, kPi / 36, kPi / 90, kPi / 180, kPi / 360};
  return s;
}

Junction fan_or_trace(const Obstacle& ob, Point v, Point dir, double half_wedge, const JunctionOptions& opts) {
  const geom::Window& w = ob.window;
  if (!opts.force_traced) {
    const auto& spreads = opts.spreads.empty() ? default_spreads() : opts.spreads;
    const Point d = geom::rotate(dir, opts.rotation);
    for (double s : spreads) {
      if (s + std::abs(opts.rotation) >= 0.95 * half_wedge) continue;
      if (auto j = straight_fan(ob, v, d, s, w)) return *j;
    }
  }
  return traced_junction(ob, v, dir, w, opts.resolution);
}

}  // namespace

std::array<std::vector<Point>, 3> Junction::extended(double far) const {
  std::array<std::vector<Point>, 3> out = rays;
  const Point c = window.center();
  for (auto& r : out) {
    const Point end = r.back();
    const Point d = end - c;
    if (geom::norm(d) > 0 && far > geom::norm(d)) r.push_back(c + far * unit(d));
  }
  return out;
}

Junction Junction::rotated(double angle) const {
  Junction j = *this;
  for (auto& r : j.rays)
    for (Point& p : r) p = v + geom::rotate(p - v, angle);
  return j;
}

Obstacle curve_obstacle(const OrientedClosedCurve& s, const geom::Window& window) {
  Obstacle ob;
  ob.window = window;
  const auto& v = s.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) ob.segments.emplace_back(v[i], v[(i + 1) % v.size()]);
  return ob;
}

Junction make_junction(const Obstacle& obstacle, Point v, Point outward, const JunctionOptions& opts) {
  Obstacle ob = obstacle;
  if (opts.window) ob.window = *opts.window;
  return fan_or_trace(ob, v, unit(outward), kPi / 2, opts);
}

Junction make_junction(const OrientedClosedCurve& s, Point v, const JunctionOptions& opts) {
  const geom::Window w = opts.window.value_or(default_window(s.vertices()));
  if (!w.contains(v)) throw Error(ErrorKind::OutsideWindow, "junction vertex outside the window");
  if (s.distance(v) > 1e-9) throw Error(ErrorKind::NotOnBoundary, "junction vertex must lie on the curve");
  const Obstacle ob = curve_obstacle(s, w);

  // Exterior wedge at v: counterclockwise from the backward to the forward direction.
  const auto& verts = s.vertices();
  const std::size_t n = verts.size();
  const double t = s.project(v);
  Point back = -s.tangent(t), fwd = s.tangent(t);
  for (std::size_t i = 0; i < n; ++i)
    if (dist(verts[i], v) <= 1e-12) {
      back = unit(verts[(i + n - 1) % n] - verts[i]);
      fwd = unit(verts[(i + 1) % n] - verts[i]);
      break;
    }
  const double wedge = ccw_angle(back, fwd);
  const Point dir = geom::rotate(back, wedge / 2);
  return fan_or_trace(ob, v, dir, wedge / 2, opts);
}

Junction make_junction(const curve::Region& x, const curve::Compactum& generators, Point v,
                       const JunctionOptions& opts) {
  const curve::Region hull = curve::topological_hull(x);
  Obstacle ob;
  ob.window = opts.window.value_or(x.window());
  ob.segments = generators.segments();
  ob.blocked = hull;

  const auto [vi, vj] = hull.cell_of(v);
  Point dir{0, 0};
  int free = 0;
  for (int j = vj - 3; j <= vj + 3; ++j)
    for (int i = vi - 3; i <= vi + 3; ++i) {
      if (!hull.valid(i, j) || hull.at(i, j)) continue;
      const Point c = hull.center(i, j);
      if (dist(c, v) == 0) continue;
      dir += unit(c - v);
      ++free;
    }
  if (free == 0) throw Error(ErrorKind::NoEscape, "vertex is interior to the topological hull");
  if (opts.outward) dir = *opts.outward;
  if (geom::norm(dir) < 1e-9) throw Error(ErrorKind::NoEscape, "no preferred escape side at v; pass an outward hint");
  return fan_or_trace(ob, v, unit(dir), kPi / 2, opts);
}

bool JunctionCheck::ok() const {
  return disjoint && avoids_obstacle && escapes &&
         std::all_of(separation.begin(), separation.end(), [](double d) { return d > 0; });
}

JunctionCheck check_junction(const Junction& j, const Obstacle& obstacle) {
  JunctionCheck out;
  const double skip = 1e-7 * j.window.diagonal();
  for (const auto& r : j.rays) {
    if (!on_window_edge(j.window, r.back())) out.escapes = false;
    if (!polyline_clear(obstacle, r, j.v, skip)) out.avoids_obstacle = false;
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const auto& ra = j.rays[a];
      const auto& rb = j.rays[b];
      for (std::size_t p = 0; p + 1 < ra.size() && out.disjoint; ++p)
        for (std::size_t q = 0; q + 1 < rb.size(); ++q) {
          if (p == 0 && q == 0) {
            // Both start at v: they may only share v.
            const Point da = unit(ra[1] - ra[0]), db = unit(rb[1] - rb[0]);
            if (std::abs(cross(da, db)) < 1e-12 && dot(da, db) > 0) out.disjoint = false;
            continue;
          }
          if (geom::segments_intersect(ra[p], ra[p + 1], rb[q], rb[q + 1])) {
            out.disjoint = false;
            break;
          }
        }
    }
  const double scale = j.window.diagonal();
  const double radii[3] = {0.1 * scale, 0.01 * scale, 0.001 * scale};
  const auto& plus = j.ray(Ray::Plus);
  const auto& in = j.ray(Ray::In);
  for (int k = 0; k < 3; ++k) {
    double best = std::numeric_limits<double>::infinity();
    // Sample J+ outside the ball and measure the distance to Ji.
    for (std::size_t p = 0; p + 1 < plus.size(); ++p) {
      const int n = std::max(2, static_cast<int>(std::ceil(dist(plus[p], plus[p + 1]) / (radii[k] / 4))));
      for (int s = 0; s <= n; ++s) {
        const Point x = plus[p] + (static_cast<double>(s) / n) * (plus[p + 1] - plus[p]);
        if (dist(x, j.v) < radii[k]) continue;
        for (std::size_t q = 0; q + 1 < in.size(); ++q)
          best = std::min(best, geom::dist_point_segment(x, in[q], in[q + 1]));
      }
    }
    out.separation[k] = best;
  }
  return out;
}

ArcPath path_of(const CurveArc& arc) {
  return {[arc](double u) { return u <= 0.0 ? arc.start() : (u >= 1.0 ? arc.end() : arc.at(u)); },
          arc.interior_breaks()};
}

ArcPath polyline_path(std::vector<Point> pts) {
  std::vector<double> cum{0.0};
  for (std::size_t k = 1; k < pts.size(); ++k) cum.push_back(cum.back() + dist(pts[k - 1], pts[k]));
  const double total = cum.back();
  if (pts.size() < 2 || total == 0.0) throw Error(ErrorKind::EmptyInput, "path needs two distinct points");
  std::vector<double> breaks;
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) breaks.push_back(cum[k] / total);
  for (double& c : cum) c /= total;
  return {[pts = std::move(pts), cum = std::move(cum)](double u) {
            if (u <= 0.0) return pts.front();
            if (u >= 1.0) return pts.back();
            const auto it = std::upper_bound(cum.begin(), cum.end(), u);
            const std::size_t k = static_cast<std::size_t>(it - cum.begin()) - 1;
            const double w = (u - cum[k]) / (cum[k + 1] - cum[k]);
            return pts[k] + w * (pts[k + 1] - pts[k]);
          },
          std::move(breaks)};
}

std::vector<double> image_samples(const maps::PlaneMap& f, const ArcPath& arc, Point center, double max_step) {
  std::vector<double> us = arc.breaks;
  const int base = 256;
  for (int k = 0; k <= base; ++k) us.push_back(static_cast<double>(k) / base);
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());

  std::vector<double> out{us[0]};
  auto img = [&](double u) { return f(arc.at(u)); };
  std::function<void(double, Point, double, Point, int)> refine = [&](double u0, Point p0, double u1, Point p1,
                                                                      int depth) {
    const Point a = p0 - center, b = p1 - center;
    const bool turn_ok = std::abs(std::atan2(cross(a, b), dot(a, b))) < kPi / 4;
    if (depth >= 18 || (dist(p0, p1) <= max_step && turn_ok)) {
      out.push_back(u1);
      return;
    }
    const double um = 0.5 * (u0 + u1);
    const Point pm = img(um);
    refine(u0, p0, um, pm, depth + 1);
    refine(um, pm, u1, p1, depth + 1);
  };
  Point prev = img(us[0]);
  for (std::size_t k = 1; k < us.size(); ++k) {
    const Point cur = img(us[k]);
    refine(us[k - 1], prev, us[k], cur, 0);
    prev = cur;
  }
  return out;
}

namespace {

struct Tangency {
  std::string what;
};

CrossingSequence crossings_once(const maps::PlaneMap& f, const ArcPath& arc, const Junction& j,
                                const CrossingOptions& opts) {
  const std::vector<double> us = image_samples(f, arc, j.v, j.window.diagonal() / 400);
  std::vector<Point> img;
  img.reserve(us.size());
  double reach = j.window.diagonal();
  const Point c = j.window.center();
  for (double u : us) {
    img.push_back(f(arc.at(u)));
    reach = std::max(reach, dist(img.back(), c));
  }
  const auto rays = j.extended(2.0 * reach + 1.0);

  for (const Point& e : {f(arc.at(0.0)), f(arc.at(1.0))})
    for (const auto& r : rays)
      for (std::size_t k = 0; k + 1 < r.size(); ++k)
        if (geom::dist_point_segment(e, r[k], r[k + 1]) <= opts.tolerance)
          throw Error(ErrorKind::EndpointOnJunction, "image of an arc endpoint lies on the junction");

  CrossingSequence seq;
  seq.junction = j;
  for (std::size_t k = 0; k + 1 < img.size(); ++k) {
    const Point p = img[k], q = img[k + 1];
    const double xlo = std::min(p.x, q.x), xhi = std::max(p.x, q.x);
    const double ylo = std::min(p.y, q.y), yhi = std::max(p.y, q.y);
    for (int r = 0; r < 3; ++r) {
      const auto& ray = rays[r];
      for (std::size_t m = 0; m + 1 < ray.size(); ++m) {
        const Point a = ray[m], b = ray[m + 1];
        if (std::max(a.x, b.x) < xlo || std::min(a.x, b.x) > xhi || std::max(a.y, b.y) < ylo ||
            std::min(a.y, b.y) > yhi)
          continue;
        const geom::SegmentHit hit = geom::intersect_segments(p, q, a, b);
        if (!hit.hit) continue;
        if (hit.s >= 1.0) continue;
        if (hit.t >= 1.0 && m + 2 < ray.size()) continue;
        const double angle = std::asin(std::min(1.0, std::abs(cross(unit(q - p), unit(b - a)))));
        if (angle < opts.tangency_angle) throw Tangency{"tangential crossing"};
        if (hit.s < 1e-12 || (hit.t < 1e-12 && m > 0)) throw Tangency{"crossing through a sample vertex"};
        Crossing ev;
        ev.u = us[k] + hit.s * (us[k + 1] - us[k]);
        ev.ray = static_cast<Ray>(r);
        ev.where = p + hit.s * (q - p);
        seq.events.push_back(ev);
      }
    }
  }
  std::sort(seq.events.begin(), seq.events.end(), [](const Crossing& x, const Crossing& y) { return x.u < y.u; });
  return seq;
}

}  // namespace

CrossingSequence crossings(const maps::PlaneMap& f, const ArcPath& arc, const std::function<Junction(int)>& factory,
                           const CrossingOptions& opts) {
  std::vector<std::string> notes;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    const Junction j = factory(attempt);
    try {
      CrossingSequence seq = crossings_once(f, arc, j, opts);
      seq.retries = attempt;
      seq.diagnostics = std::move(notes);
      return seq;
    } catch (const Tangency& t) {
      notes.push_back("attempt " + std::to_string(attempt) + ": " + t.what + ", perturbing junction");
    }
  }
  throw Error(ErrorKind::UnresolvedTangency,
              "tangential crossing persists after " + std::to_string(opts.max_retries) + " perturbations");
}

CrossingSequence crossings(const maps::PlaneMap& f, const ArcPath& arc, const Junction& j,
                           const CrossingOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return crossings(f, arc, [&](int attempt) {
    return attempt == 0 ? j : j.rotated(2e-3 * u(rng));
  }, opts);
}

int count_variation(const std::vector<Crossing>& events) {
  int v = 0;
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    if (events[k].ray == Ray::Plus && events[k + 1].ray == Ray::In) ++v;
    if (events[k].ray == Ray::In && events[k + 1].ray == Ray::Plus) --v;
  }
  return v;
}

namespace {

bool in_hull(const OrientedClosedCurve& s, Point p) {
  try {
    return curve::contains(s, p);
  } catch (const Error&) {
    return true;  // on S
  }
}

}  // namespace

std::string arc_violation(const maps::PlaneMap& f, const CurveArc& arc, double tol) {
  const OrientedClosedCurve& s = *arc.parent;
  if (!in_hull(s, f(arc.start()))) return "f(a) lies outside T(S)";
  if (!in_hull(s, f(arc.end()))) return "f(b) lies outside T(S)";

  const std::vector<Point> pts = arc.polyline(256);
  geom::Window box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : pts) box = {std::min(box.xmin, p.x), std::max(box.xmax, p.x), std::min(box.ymin, p.y),
                                    std::max(box.ymax, p.y)};
  const geom::Window padded = box.expanded(tol);
  const ArcPath path = path_of(arc);
  const std::vector<double> us = image_samples(f, path, box.center(), std::max(box.diagonal(), 1e-6) / 200);
  std::vector<Point> img;
  img.reserve(us.size());
  for (double u : us) img.push_back(f(path.at(u)));
  for (std::size_t k = 0; k + 1 < img.size(); ++k) {
    const Point p = img[k], q = img[k + 1];
    if (std::max(p.x, q.x) < padded.xmin || std::min(p.x, q.x) > padded.xmax || std::max(p.y, q.y) < padded.ymin ||
        std::min(p.y, q.y) > padded.ymax)
      continue;
    for (std::size_t m = 0; m + 1 < pts.size(); ++m) {
      if (geom::segments_intersect(p, q, pts[m], pts[m + 1])) return "f(A) meets A";
      if (geom::dist_point_segment(p, pts[m], pts[m + 1]) <= tol) return "f(A) meets A";
    }
  }
  return {};
}

ArcVariation variation_arc(const maps::PlaneMap& f, const CurveArc& arc, const VariationOptions& opts) {
  const std::string why = arc_violation(f, arc, opts.crossing.tolerance);
  if (!why.empty()) throw Error(ErrorKind::InvalidPartition, why);
  const OrientedClosedCurve& s = *arc.parent;
  const Point v = arc.at(opts.vertex_fraction);
  std::mt19937_64 rng(opts.crossing.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::optional<Junction> base;
  auto factory = [&](int attempt) {
    if (attempt == 0 || !base || base->construction == "traced") {
      if (!base) base = make_junction(s, v, opts.junction);
      return attempt == 0 ? *base : base->rotated(2e-3 * u(rng));
    }
    JunctionOptions jo = opts.junction;
    jo.rotation += 0.05 * u(rng);
    return make_junction(s, v, jo);
  };
  ArcVariation out;
  out.crossings = crossings(f, path_of(arc), factory, opts.crossing);
  out.value = count_variation(out.crossings.events);
  return out;
}

ArcVariation variation_path(const maps::PlaneMap& f, const ArcPath& path, const Obstacle& obstacle,
                            const VariationOptions& opts) {
  const double u0 = opts.vertex_fraction;
  const Point v = path.at(u0);
  const double du = 1e-4;
  const Point d = path.at(std::min(1.0, u0 + du)) - path.at(std::max(0.0, u0 - du));
  const Point outward{d.y, -d.x};
  std::mt19937_64 rng(opts.crossing.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto factory = [&](int attempt) {
    JunctionOptions jo = opts.junction;
    if (attempt > 0) jo.rotation += 0.05 * u(rng);
    Junction j = make_junction(obstacle, v, outward, jo);
    if (attempt > 0 && j.construction == "traced") j = j.rotated(2e-3 * u(rng));
    return j;
  };
  ArcVariation out;
  out.crossings = crossings(f, path, factory, opts.crossing);
  out.value = count_variation(out.crossings.events);
  return out;
}

VariationReport variation_total(const maps::PlaneMap& f, const OrientedClosedCurve& s, std::vector<double> partition,
                                const VariationOptions& opts) {
  if (partition.empty()) throw Error(ErrorKind::InvalidPartition, "empty partition");
  for (double& t : partition) t = curve::wrap01(t);
  std::sort(partition.begin(), partition.end());
  for (std::size_t i = 0; i + 1 < partition.size(); ++i)
    if (partition[i + 1] - partition[i] <= 1e-15)
      throw Error(ErrorKind::InvalidPartition, "repeated partition point at index " + std::to_string(i + 1));

  VariationReport rep;
  rep.partition = partition;
  const std::size_t n = partition.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!in_hull(s, f(s.at(partition[i]))))
      throw Error(ErrorKind::InvalidPartition, "f(a_" + std::to_string(i) + ") lies outside T(S)");
  for (std::size_t i = 0; i < n; ++i) {
    const CurveArc arc = n == 1 ? CurveArc::whole(s, partition[0]) : CurveArc(s, partition[i], partition[(i + 1) % n]);
    const std::string why = arc_violation(f, arc, opts.crossing.tolerance);
    if (!why.empty()) throw Error(ErrorKind::InvalidPartition, "arc " + std::to_string(i) + ": " + why);
    const ArcVariation av = variation_arc(f, arc, opts);
    rep.per_arc.push_back(av.value);
    rep.total += av.value;
    rep.junction_vertices.push_back(av.crossings.junction.v);
    rep.junction_kinds.push_back(av.crossings.junction.construction);
    for (const auto& d : av.crossings.diagnostics) rep.diagnostics.push_back("arc " + std::to_string(i) + ": " + d);
  }
  return rep;
}

std::vector<double> auto_partition(const maps::PlaneMap& f, const OrientedClosedCurve& s, const curve::Compactum* x,
                                   const PartitionOptions& opts) {
  for (double t : opts.required)
    if (!in_hull(s, f(s.at(t))))
      throw Error(ErrorKind::NoValidPartition, "required point t = " + std::to_string(t) + " does not map into T(S)");
  std::vector<double> ts = s.vertex_parameters();
  for (int k = 0; k < opts.candidate_samples; ++k) ts.push_back(static_cast<double>(k) / opts.candidate_samples);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<double> cand;
  for (double t : ts) {
    const Point p = s.at(t);
    if (x && x->distance(p) > opts.contact_tolerance) continue;
    if (in_hull(s, f(p))) cand.push_back(t);
  }
  if (cand.empty()) throw Error(ErrorKind::NoValidPartition, "no point of S ∩ X maps into T(S)");

  auto nearest = [&](double target) {
    return *std::min_element(cand.begin(), cand.end(), [&](double a, double b) {
      const double da = std::abs(std::remainder(a - target, 1.0)), db = std::abs(std::remainder(b - target, 1.0));
      return da < db;
    });
  };
  std::vector<double> part;
  for (double t : opts.required) {
    part.push_back(curve::wrap01(t));
    cand.push_back(curve::wrap01(t));
  }
  if (part.empty())
    for (double q : {0.0, 0.25, 0.5, 0.75}) part.push_back(nearest(q));
  std::sort(part.begin(), part.end());
  part.erase(std::unique(part.begin(), part.end()), part.end());

  for (;;) {
    if (part.size() > opts.max_arcs)
      throw Error(ErrorKind::NoValidPartition, "more than " + std::to_string(opts.max_arcs) + " arcs needed");
    std::vector<double> next;
    bool changed = false;
    const std::size_t n = part.size();
    for (std::size_t i = 0; i < n; ++i) {
      next.push_back(part[i]);
      const CurveArc arc = n == 1 ? CurveArc::whole(s, part[0]) : CurveArc(s, part[i], part[(i + 1) % n]);
      if (arc_violation(f, arc).empty()) continue;
      // Split at the candidate nearest the middle of the arc.
      const double a = part[i], span = arc.span();
      double best = -1, best_d = 2;
      for (double c : cand) {
        const double u = curve::wrap01(c - a);
        if (u <= 0 || u >= span) continue;
        const double d = std::abs(u - span / 2);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (best < 0)
        throw Error(ErrorKind::NoValidPartition,
                    "arc starting at t = " + std::to_string(a) + " cannot be split at an admissible point");
      next.push_back(best);
      changed = true;
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    part = std::move(next);
    if (!changed) return part;
  }
}

}  // namespace planetopo::variation
