#include "planetopo/kp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <boost/polygon/voronoi.hpp>

#include "planetopo/error.hpp"
#include "planetopo/maps.hpp"

namespace planetopo::kp {

using curve::Compactum;
using geom::cross;
using geom::dist;
using geom::dot;
using geom::unit;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double scale_of(const Compactum& k) {
  const geom::Window b = k.bounds();
  return std::max({1.0, b.width(), b.height()});
}

bool round(const Ball& b) { return b.kind != Ball::Kind::HalfPlane; }

// Contact of one segment of K with ∂B: either a piece lying on ∂B or the
// point of closest approach.
struct Touch {
  Point p0, p1;
  bool along = false;
};

// Returns false when the segment enters the open ball by more than tol.
bool touch_segment(const Ball& b, Point a, Point c, double tol, std::vector<Touch>& out) {
  const double sa = b.signed_distance(a), sc = b.signed_distance(c);
  if (a == c) {
    if (sa < -tol) return false;
    if (sa <= tol) out.push_back({a, a, false});
    return true;
  }
  const double flat = tol * 1e-3 + 1e-12;
  switch (b.kind) {
    case Ball::Kind::HalfPlane: {
      if (std::min(sa, sc) < -tol) return false;
      if (std::max(sa, sc) <= flat) {
        out.push_back({a, c, true});
      } else if (std::min(sa, sc) <= tol) {
        out.push_back(sa <= sc ? Touch{a, a, false} : Touch{c, c, false});
      }
      return true;
    }
    case Ball::Kind::Disk: {
      const Point q = geom::closest_on_segment(b.center, a, c);
      const double sq = b.signed_distance(q);
      if (sq < -tol) return false;
      if (sq <= tol) out.push_back({q, q, false});
      return true;
    }
    case Ball::Kind::ExteriorDisk: {
      if (std::min(sa, sc) < -tol) return false;
      // Farthest points of a segment from the center are its endpoints.
      if (sa <= tol) out.push_back({a, a, false});
      if (sc <= tol) out.push_back({c, c, false});
      return true;
    }
  }
  return true;
}

}  // namespace

bool KPElement::nonempty_interior() const {
  if (runs.size() >= 3) return true;
  return std::any_of(runs.begin(), runs.end(), [](const ContactRun& r) { return !r.degenerate(); });
}

bool KPElement::hull_contains(Point p, double tol) const {
  if (!ball.contains(p, tol)) return false;
  for (std::size_t i = 0; i < chords.size(); ++i) {
    if (hull_side[i] == 0) {
      if (chords[i].distance(p) > tol) return false;
      continue;
    }
    const int s = chords[i].side(p, tol);
    if (s != 0 && s != hull_side[i]) return false;
  }
  return true;
}

bool KPElement::hull_interior_contains(Point p, double tol) const {
  if (!nonempty_interior()) return false;
  if (ball.signed_distance(p) >= -tol) return false;
  for (std::size_t i = 0; i < chords.size(); ++i)
    if (chords[i].side(p, tol) != hull_side[i]) return false;
  return true;
}

std::optional<KPElement> make_element(const Compactum& k, const Ball& b, double tol, std::string source) {
  std::vector<Touch> touches;
  for (const auto& [a, c] : k.segments())
    if (!touch_segment(b, a, c, tol, touches)) return std::nullopt;
  if (b.kind == Ball::Kind::Disk || b.kind == Ball::Kind::HalfPlane)
    for (const auto& poly : k.polygons())
      if (!poly.empty() && b.signed_distance(poly[0]) < -tol) return std::nullopt;
  if (b.kind == Ball::Kind::Disk && k.contains(b.center, 0.0)) return std::nullopt;
  if (touches.empty()) return std::nullopt;

  // Coordinates: angles for round balls, line positions for half-planes.
  std::vector<ContactRun> runs;
  for (const Touch& t : touches) {
    ContactRun r;
    r.u0 = b.boundary_coordinate(t.p0);
    r.u1 = t.along ? b.boundary_coordinate(t.p1) : r.u0;
    r.p0 = t.p0;
    r.p1 = t.along ? t.p1 : t.p0;
    if (r.u1 < r.u0) {
      std::swap(r.u0, r.u1);
      std::swap(r.p0, r.p1);
    }
    runs.push_back(r);
  }
  std::sort(runs.begin(), runs.end(), [](const ContactRun& x, const ContactRun& y) { return x.u0 < y.u0; });

  const double merge = round(b) ? std::max(1e-12, 10.0 * tol / b.radius) : std::max(1e-12, 10.0 * tol);
  std::vector<ContactRun> merged;
  for (const ContactRun& r : runs) {
    if (!merged.empty() && r.u0 <= merged.back().u1 + merge) {
      if (r.u1 > merged.back().u1) {
        merged.back().u1 = r.u1;
        merged.back().p1 = r.p1;
      }
      continue;
    }
    merged.push_back(r);
  }
  if (round(b) && merged.size() > 1 && merged.front().u0 + kTwoPi <= merged.back().u1 + merge) {
    merged.front().u0 = merged.back().u0 - kTwoPi;
    merged.front().p0 = merged.back().p0;
    merged.front().u1 = std::max(merged.front().u1, merged.back().u1 - kTwoPi);
    merged.pop_back();
  }
  // Tiny runs are point contacts.
  for (ContactRun& r : merged)
    if ((r.u1 - r.u0) <= merge) {
      r.u1 = r.u0;
      r.p1 = r.p0;
    }

  KPElement e;
  e.ball = b;
  e.runs = merged;
  e.source = std::move(source);
  const std::size_t m = merged.size();
  if (m == 0 || (m == 1 && merged[0].degenerate())) return std::nullopt;
  for (const ContactRun& r : merged) {
    e.contacts.push_back(r.p0);
    if (!r.degenerate()) e.contacts.push_back(r.p1);
  }
  e.is_gap = m >= 3;

  auto on_boundary = [&](Point p) {
    const double r = round(b) ? b.radius : 1.0;
    return b.boundary_distance(p) <= 1e-12 * std::max(1.0, r) ? p : b.boundary_point(b.boundary_coordinate(p));
  };
  auto run_mid = [&](const ContactRun& r) { return b.boundary_point(0.5 * (r.u0 + r.u1)); };
  auto add_chord = [&](Point from, Point to, std::optional<Point> ref) {
    if (dist(from, to) <= 1e-12) return;
    const CircularArc g = geom::perpendicular_arc(b, on_boundary(from), on_boundary(to));
    e.chords.push_back(g);
    e.hull_side.push_back(ref ? g.side(*ref) : 0);
  };
  if (m == 1) {
    add_chord(merged[0].p1, merged[0].p0, run_mid(merged[0]));
  } else if (m == 2) {
    const bool d0 = merged[0].degenerate(), d1 = merged[1].degenerate();
    if (d0 && d1) {
      add_chord(merged[0].p0, merged[1].p0, std::nullopt);
    } else {
      add_chord(merged[0].p1, merged[1].p0, d0 ? run_mid(merged[1]) : run_mid(merged[0]));
      add_chord(merged[1].p1, merged[0].p0, d1 ? run_mid(merged[0]) : run_mid(merged[1]));
    }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      add_chord(merged[i].p1, merged[(i + 1) % m].p0, merged[(i + 2) % m].p0);
  }
  return e;
}

std::vector<std::size_t> KPPartition::with_interior() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i].nonempty_interior()) out.push_back(i);
  return out;
}

namespace {

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

double contact_tolerance(double h, double r) { return std::min(h, h * h / std::max(r, 1e-12)) + 1e-9; }

// Centers of empty disks from the Voronoi diagram of the samples.
std::vector<std::pair<Point, bool>> voronoi_centers(const std::vector<Point>& samples, const geom::Window& w,
                                                    double h) {
  namespace bp = boost::polygon;
  const Point origin = w.center();
  const double s = std::ldexp(1.0, 28) / std::max(w.width(), w.height());
  std::vector<bp::point_data<int>> pts;
  std::map<std::pair<int, int>, int> seen;
  for (const Point& p : samples) {
    const int x = static_cast<int>(std::lround((p.x - origin.x) * s));
    const int y = static_cast<int>(std::lround((p.y - origin.y) * s));
    if (seen.emplace(std::make_pair(x, y), 0).second) pts.emplace_back(x, y);
  }
  bp::voronoi_diagram<double> vd;
  bp::construct_voronoi(pts.begin(), pts.end(), &vd);
  auto back = [&](double x, double y) { return Point{x / s + origin.x, y / s + origin.y}; };
  auto site = [&](const bp::voronoi_cell<double>& c) {
    const auto& q = pts[c.source_index()];
    return back(q.x(), q.y());
  };

  std::vector<std::pair<Point, bool>> out;
  for (const auto& v : vd.vertices()) out.emplace_back(back(v.x(), v.y()), true);
  const double far = w.diagonal();
  for (const auto& e : vd.edges()) {
    if (!e.is_primary() || &e > e.twin()) continue;
    const Point a = site(*e.cell()), b = site(*e.twin()->cell());
    if (e.is_finite()) {
      const Point p0 = back(e.vertex0()->x(), e.vertex0()->y());
      const Point p1 = back(e.vertex1()->x(), e.vertex1()->y());
      if (dist(p0, p1) < 0.25 * h) continue;
      out.emplace_back(0.5 * (p0 + p1), false);
      continue;
    }
    // Infinite edge along the bisector of a and b.
    Point dir = geom::perp(unit(b - a));
    Point base = 0.5 * (a + b);
    if (e.vertex0() || e.vertex1()) {
      const auto* v = e.vertex0() ? e.vertex0() : e.vertex1();
      const Point pv = back(v->x(), v->y());
      if (dot(base - pv, dir) < 0) dir = -dir;
      base = pv;
      for (double t : {0.05, 0.25, 1.0}) out.emplace_back(base + t * far * dir, false);
    } else {
      for (double t : {-1.0, -0.25, 0.25, 1.0}) out.emplace_back(base + t * far * dir, false);
    }
  }
  return out;
}

}  // namespace

KPPartition maximal_balls(const Compactum& k, const geom::Window& window, const KPOptions& opts) {
  if (k.empty()) throw Error(ErrorKind::EmptyInput, "empty compactum");
  const geom::Window kb = k.bounds();
  if (!window.contains({kb.xmin, kb.ymin}) || !window.contains({kb.xmax, kb.ymax}))
    throw Error(ErrorKind::OutsideWindow, "compactum does not fit in the window");

  KPPartition part;
  part.k = k;
  part.window = window;
  part.spacing = opts.spacing > 0 ? opts.spacing : window.width() / 512.0;
  const double h = part.spacing;
  const double scale = scale_of(k);
  const double exact_tol = 1e-9 * scale;

  {
    const double res = opts.raster_cells / std::max(window.width(), window.height());
    const curve::Region r = curve::rasterize(k, window, res);
    if (curve::topological_hull(r).count() != r.count())
      throw Error(ErrorKind::DisconnectedComplement, "complement of K has bounded components");
  }

  part.samples = k.boundary_samples(h);
  std::vector<Point> verts = k.vertices();

  // Half-planes on convex hull edges.
  const std::vector<Point> hull = convex_hull(verts);
  if (hull.size() >= 3) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Point p = hull[i], q = hull[(i + 1) % hull.size()];
      const Point e = unit(q - p);
      if (auto el = make_element(k, Ball::half_plane(p, {e.y, -e.x}), exact_tol, "half-plane"))
        part.elements.push_back(*el);
    }
  } else if (hull.size() == 2) {
    const Point e = unit(hull[1] - hull[0]);
    for (Point n : {Point{e.y, -e.x}, Point{-e.y, e.x}})
      if (auto el = make_element(k, Ball::half_plane(hull[0], n), exact_tol, "half-plane"))
        part.elements.push_back(*el);
  }

  // Exterior of the smallest enclosing disk.
  if (hull.size() >= 2) {
    const Ball meb = geom::min_enclosing_ball(verts);
    if (auto el = make_element(k, Ball::exterior(meb.center, meb.radius), exact_tol, "exterior"))
      part.elements.push_back(*el);
  }

  // Two-contact exterior disks through consecutive hull vertices.
  if (hull.size() >= 2 && opts.family_samples > 0) {
    const std::size_t edges = hull.size() == 2 ? 1 : hull.size();
    for (std::size_t i = 0; i < edges; ++i) {
      const Point p = hull[i], q = hull[(i + 1) % hull.size()];
      const Point m = 0.5 * (p + q), e = unit(q - p);
      const double half = 0.5 * dist(p, q);
      const Point inward{-e.y, e.x};
      // Center m + s*inward; the disk contains K for s >= s_min.
      double s_min = hull.size() == 2 ? -std::numeric_limits<double>::infinity() : 0.0;
      if (hull.size() >= 3) {
        s_min = -std::numeric_limits<double>::infinity();
        for (const Point& v : verts) {
          if (dist(v, p) < 1e-12 || dist(v, q) < 1e-12) continue;
          const Point d = v - m;
          const double along = dot(d, inward);
          if (along <= 1e-12) continue;
          // |m + s n - v|^2 = s^2 + half^2
          const double s = (geom::norm(d) * geom::norm(d) - half * half) / (2.0 * along);
          s_min = std::max(s_min, s);
        }
      }
      std::vector<double> ss;
      if (std::isfinite(s_min)) {
        for (int j = 1; j <= opts.family_samples; ++j) ss.push_back(s_min + half * std::pow(4.0, j - 1) * 0.5);
      } else {
        for (int j = 1; j <= opts.family_samples; ++j) {
          ss.push_back(half * std::pow(4.0, j - 1) * 0.5);
          ss.push_back(-half * std::pow(4.0, j - 1) * 0.5);
        }
      }
      part.families.push_back({p, q, inward, s_min});
      for (double s : ss) {
        const Point c = m + s * inward;
        const double r = std::hypot(s, half);
        if (auto el = make_element(k, Ball::exterior(c, r), exact_tol, "exterior-family"))
          part.elements.push_back(*el);
      }
    }
  }

  // Interior empty disks from the Voronoi diagram.
  std::map<std::pair<long long, long long>, bool> taken;
  const geom::Window reach = window.expanded(window.diagonal());
  const auto centers = voronoi_centers(part.samples, window, h);
  part.voronoi_sites = part.samples.size();
  for (const auto& [c, vertex] : centers) {
    if (!reach.contains(c)) continue;
    const double r = k.distance(c);
    if (r <= 2.0 * exact_tol) continue;
    const auto key = std::make_pair(std::llround(c.x / (0.5 * h)), std::llround(c.y / (0.5 * h)));
    if (taken.count(key)) continue;
    auto el = make_element(k, Ball::disk(c, r), contact_tolerance(h, r), vertex ? "voronoi-vertex" : "voronoi-edge");
    if (!el) continue;
    // Contacts closer than the sample spacing are one contact seen twice.
    bool split = false;
    const auto& cs = el->contacts;
    for (std::size_t i = 0; i < cs.size() && !split; ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j)
        if (dist(cs[i], cs[j]) < 2.0 * h) split = true;
    if (split) continue;
    taken[key] = true;
    part.elements.push_back(std::move(*el));
  }
  return part;
}

Hull hull_of(const KPElement& e, int samples_per_arc) {
  Hull out;
  out.chords = e.chords;
  if (!e.nonempty_interior() || e.ball.kind == Ball::Kind::ExteriorDisk) return out;
  const Ball& b = e.ball;
  const std::size_t m = e.runs.size();
  // Walk chord, then the following contact run along ∂B.
  auto run_points = [&](const ContactRun& r) {
    std::vector<Point> pts;
    if (r.degenerate()) return pts;
    for (int k = 0; k <= samples_per_arc; ++k)
      pts.push_back(b.boundary_point(r.u0 + (r.u1 - r.u0) * k / samples_per_arc));
    return pts;
  };
  if (m == 1) {
    for (const Point& p : e.chords[0].sample(samples_per_arc)) out.polygon.push_back(p);
    for (const Point& p : run_points(e.runs[0])) out.polygon.push_back(p);
  } else {
    std::size_t c = 0;
    for (std::size_t i = 0; i < m && c < e.chords.size(); ++i) {
      for (const Point& p : e.chords[c].sample(samples_per_arc)) out.polygon.push_back(p);
      for (const Point& p : run_points(e.runs[(i + 1) % m])) out.polygon.push_back(p);
      ++c;
    }
  }
  out.polygon.erase(std::unique(out.polygon.begin(), out.polygon.end(),
                                [](Point a, Point b) { return dist(a, b) < 1e-12; }),
                    out.polygon.end());
  return out;
}

namespace {

// Ball of the original plane whose image under inversion at `pole` is the
// exterior of the disk (c, r).
Ball preimage_of_exterior(Point c, double r, Point pole) {
  Point q[3];
  for (int k = 0; k < 3; ++k) {
    const double th = kTwoPi * k / 3.0 + 0.3;
    q[k] = geom::invert(c + r * Point{std::cos(th), std::sin(th)}, pole);
  }
  Point center;
  double radius = 0;
  if (!geom::circumcircle(q[0], q[1], q[2], center, radius)) {
    const Point d = unit(q[1] - q[0]);
    Point n{-d.y, d.x};
    if (dot(pole - q[0], n) < 0) n = -n;
    return Ball::half_plane(q[0], n);
  }
  return dist(pole, center) < radius ? Ball::disk(center, radius) : Ball::exterior(center, radius);
}

std::vector<Point> fine_samples_near(const Compactum& k, Point near, double radius, double step) {
  std::vector<Point> out;
  for (const auto& [a, b] : k.segments()) {
    if (geom::dist_point_segment(near, a, b) > radius) continue;
    if (a == b) {
      out.push_back(a);
      continue;
    }
    const double len = dist(a, b);
    const Point d = (b - a) / len;
    const double t0 = std::clamp(dot(near - a, d) - radius, 0.0, len);
    const double t1 = std::clamp(dot(near - a, d) + radius, 0.0, len);
    const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / step)));
    for (int j = 0; j <= n; ++j) out.push_back(a + (t0 + (t1 - t0) * j / n) * d);
  }
  return out;
}

// Inverted segment point.
struct InvertedSegment {
  Point a, b, pole;
  Point at(double t) const { return geom::invert(a + t * (b - a), pole); }
};

// Parameter in [lo, hi] maximizing the distance from p, by golden section.
double farthest_param(const InvertedSegment& s, Point p, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = dist(s.at(x1), p), f2 = dist(s.at(x2), p);
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = dist(s.at(x2), p);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = dist(s.at(x1), p);
    }
  }
  return 0.5 * (lo + hi);
}

// Newton steps on the squared distance, holding a parameter that sits on
// the end of its segment fixed.
void newton_farthest(const InvertedSegment& sa, const InvertedSegment& sb, double& s, double& t) {
  auto f = [&](double x, double y) {
    const Point d = sa.at(x) - sb.at(y);
    return dot(d, d);
  };
  const double e = 1e-5;
  for (int it = 0; it < 30; ++it) {
    const bool fs = s <= 0.0 || s >= 1.0, ft = t <= 0.0 || t >= 1.0;
    if (fs && ft) return;
    const double f0 = f(s, t);
    const double gs = (f(s + e, t) - f(s - e, t)) / (2 * e), gt = (f(s, t + e) - f(s, t - e)) / (2 * e);
    const double hss = (f(s + e, t) - 2 * f0 + f(s - e, t)) / (e * e);
    const double htt = (f(s, t + e) - 2 * f0 + f(s, t - e)) / (e * e);
    const double hst = (f(s + e, t + e) - f(s + e, t - e) - f(s - e, t + e) + f(s - e, t - e)) / (4 * e * e);
    double ds = 0, dt = 0;
    if (fs) {
      dt = -gt / htt;
    } else if (ft) {
      ds = -gs / hss;
    } else {
      const double det = hss * htt - hst * hst;
      if (det == 0) return;
      ds = -(htt * gs - hst * gt) / det;
      dt = -(hss * gt - hst * gs) / det;
    }
    if (!std::isfinite(ds) || !std::isfinite(dt)) return;
    const double s2 = std::clamp(s + ds, 0.0, 1.0), t2 = std::clamp(t + dt, 0.0, 1.0);
    if (f(s2, t2) < f0) return;
    const bool done = std::abs(s2 - s) < 1e-15 && std::abs(t2 - t) < 1e-15;
    s = s2;
    t = t2;
    if (done) return;
  }
}

// When the located ball touches K in two places, the probe lies on their
// chord; sampling error moves that chord, so solve for the contact pair
// exactly as the farthest pair between the two inverted pieces of K. One
// candidate per pair of contact clusters, after any half-plane candidates.
std::vector<Ball> polish_two_contacts(const Compactum& k, const Ball& b, Point probe, double h) {
  const double slack = 8.0 * h + 1e-9 * scale_of(k);
  struct Touch {
    Point a, b;
    Point near;
  };
  std::vector<Touch> touches;
  for (const auto& [a, c] : k.segments()) {
    const double len = dist(a, c);
    Point q = a;
    if (len > 0) {
      // Point of the segment nearest the ball.
      const Point d = (c - a) / len;
      double best = std::numeric_limits<double>::infinity();
      const int n = std::max(2, static_cast<int>(std::ceil(len / h)));
      for (int j = 0; j <= n; ++j) {
        const Point x = a + (len * j / n) * d;
        const double gap = b.signed_distance(x);
        if (gap < best) best = gap, q = x;
      }
    }
    if (b.boundary_distance(q) <= slack) touches.push_back({a, c, q});
  }
  std::vector<Ball> out;
  // A segment lying along the boundary means the ball is the half-plane on it.
  for (const Touch& t : touches)
    if (t.a != t.b && b.boundary_distance(t.a) <= slack && b.boundary_distance(t.b) <= slack) {
      const Point d = unit(t.b - t.a);
      Point n{-d.y, d.x};
      if (dot(probe - t.a, n) < 0) n = -n;
      out.push_back(Ball::half_plane(t.a, n));
    }
  if (touches.size() < 2) return out;
  // Cluster touch points; exactly two clusters must remain.
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < touches.size(); ++i) {
    bool placed = false;
    for (auto& cl : clusters)
      if (dist(touches[cl.front()].near, touches[i].near) <= 4.0 * slack + 4.0 * h) {
        cl.push_back(i);
        placed = true;
        break;
      }
    if (!placed) clusters.push_back({i});
  }
  if (clusters.size() < 2 || clusters.size() > 4) return out;

  for (std::size_t ca = 0; ca < clusters.size(); ++ca)
    for (std::size_t cb = ca + 1; cb < clusters.size(); ++cb) {
  double best = -1.0;
  Point pa, pb;
  for (std::size_t i : clusters[ca])
    for (std::size_t j : clusters[cb]) {
      const InvertedSegment sa{touches[i].a, touches[i].b, probe}, sb{touches[j].a, touches[j].b, probe};
      auto param = [](const Touch& t) {
        const double l2 = dot(t.b - t.a, t.b - t.a);
        return l2 > 0 ? std::clamp(dot(t.near - t.a, t.b - t.a) / l2, 0.0, 1.0) : 0.0;
      };
      double s = param(touches[i]), t = param(touches[j]);
      const double wa = std::min(1.0, 4.0 * h / std::max(dist(sa.a, sa.b), 1e-300));
      const double wb = std::min(1.0, 4.0 * h / std::max(dist(sb.a, sb.b), 1e-300));
      for (int it = 0; it < 200; ++it) {
        const double t2 = farthest_param(sb, sa.at(s), std::max(0.0, t - wb), std::min(1.0, t + wb));
        const double s2 = farthest_param(sa, sb.at(t2), std::max(0.0, s - wa), std::min(1.0, s + wa));
        const bool done = std::abs(s2 - s) < 1e-15 && std::abs(t2 - t) < 1e-15;
        s = s2;
        t = t2;
        if (done) break;
      }
      newton_farthest(sa, sb, s, t);
      const double d = dist(sa.at(s), sb.at(t));
      if (d > best) best = d, pa = sa.at(s), pb = sb.at(t);
    }
  if (best > 0) out.push_back(preimage_of_exterior(0.5 * (pa + pb), 0.5 * best, probe));
    }
  return out;
}

}  // namespace

KPElement locate(const KPPartition& part, Point probe) {
  const Compactum& k = part.k;
  if (k.distance(probe) <= 1e-12) throw Error(ErrorKind::OnCurve, "probe lies on K");
  std::vector<Point> pts = part.samples;
  for (const Point& v : k.vertices()) pts.push_back(v);
  double h = part.spacing;
  Ball b;
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<Point> inv;
    inv.reserve(pts.size());
    for (const Point& p : pts) inv.push_back(geom::invert(p, probe));
    const Ball meb = geom::min_enclosing_ball(inv);
    b = preimage_of_exterior(meb.center, meb.radius, probe);
    if (pass == 2) break;
    // Resample K more finely near the support points and repeat.
    std::vector<Point> support;
    for (std::size_t i = 0; i < inv.size(); ++i)
      if (dist(inv[i], meb.center) >= meb.radius * (1.0 - 1e-6)) support.push_back(pts[i]);
    const double fine = h / 32.0;
    for (const Point& s : support)
      for (const Point& p : fine_samples_near(k, s, 2.0 * h, fine)) pts.push_back(p);
    h = fine;
  }
  for (const Ball& exact : polish_two_contacts(k, b, probe, h)) {
    auto el = make_element(k, exact, 1e-9 * scale_of(k), "locate");
    if (el && el->hull_contains(probe, 1e-7 * scale_of(k))) return *el;
  }
  // Snap to an exactly empty ball.
  if (b.kind == Ball::Kind::Disk) b.radius = k.distance(b.center);
  else if (b.kind == Ball::Kind::ExteriorDisk) b.radius = std::max(b.radius, dist(b.center, k.farthest(b.center)));
  const double r = round(b) ? b.radius : scale_of(k);
  const double tol = 1e-7 * scale_of(k) + h * h / r;
  auto el = make_element(k, b, tol, "locate");
  if (!el) throw Error(ErrorKind::CertificationFailed, "located ball is not maximal at tolerance");
  return *el;
}

namespace {

Ball ball_through(Point a, Point b, double theta) {
  const Point u = unit(b - a), n{-u.y, u.x}, m = 0.5 * (a + b);
  const double half = 0.5 * dist(a, b);
  const double t = std::fmod(std::fmod(theta, kTwoPi) + kTwoPi, kTwoPi);
  if (t == 0.0) return Ball::half_plane(a, n);
  if (t == kPi) return Ball::half_plane(a, -n);
  const double s = half / std::tan(t);
  const Point c = m + s * n;
  const double r = std::hypot(s, half);
  return t < kPi ? Ball::disk(c, r) : Ball::exterior(c, r);
}

std::optional<CircularArc> chord_in(const std::optional<KPElement>& e, Point a, Point b, double tol) {
  if (!e) return std::nullopt;
  for (const CircularArc& g : e->chords)
    if ((dist(g.a, a) <= tol && dist(g.b, b) <= tol) || (dist(g.a, b) <= tol && dist(g.b, a) <= tol)) return g;
  return std::nullopt;
}

}  // namespace

ChordFamily chords_between(const KPPartition& part, Point a, Point b) {
  const double scale = scale_of(part.k);
  if (dist(a, b) <= 1e-9 * scale) throw Error(ErrorKind::DegenerateChord, "chord endpoints coincide");
  const double tol = 1e-9 * scale;
  const double match = 1e-6 * scale;
  auto valid = [&](double theta) {
    return chord_in(make_element(part.k, ball_through(a, b, theta), tol, "family"), a, b, match).has_value();
  };

  const int n = 720;
  std::vector<char> ok(n);
  int count = 0;
  for (int i = 0; i < n; ++i) count += ok[i] = valid(kTwoPi * i / n);

  ChordFamily fam;
  if (count == n) {
    fam.kind = ChordFamily::Kind::Disk;
    fam.whole_family = true;
    fam.measure = 1.0;
    for (double th : {0.0, kPi})
      fam.chords.push_back(*chord_in(make_element(part.k, ball_through(a, b, th), tol, "family"), a, b, match));
    return fam;
  }
  if (count == 0) {
    for (const KPElement& e : part.elements)
      if (auto g = chord_in(e, a, b, match)) {
        fam.kind = ChordFamily::Kind::Single;
        fam.chords.push_back(*g);
        return fam;
      }
    throw Error(ErrorKind::NoChord, "no maximal ball has a and b as consecutive contacts");
  }
  // Rotate so that index 0 is invalid, then take the first valid stretch.
  int start = 0;
  while (ok[start]) ++start;
  int lo = -1, hi = -1;
  for (int j = 1; j <= n; ++j) {
    const int i = (start + j) % n;
    if (ok[i] && lo < 0) lo = start + j;
    if (lo >= 0 && !ok[i]) {
      hi = start + j - 1;
      break;
    }
  }
  auto refine = [&](double good, double bad) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (good + bad);
      (valid(mid) ? good : bad) = mid;
    }
    return good;
  };
  const double step = kTwoPi / n;
  const double t_lo = refine(lo * step, (lo - 1) * step);
  const double t_hi = refine(hi * step, (hi + 1) * step);
  fam.kind = ChordFamily::Kind::Disk;
  fam.measure = (t_hi - t_lo) / kTwoPi;
  for (double th : {t_lo, t_hi})
    fam.chords.push_back(*chord_in(make_element(part.k, ball_through(a, b, th), tol, "family"), a, b, match));
  return fam;
}

std::vector<std::size_t> Classification::plus() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < chords.size(); ++i)
    if (chords[i].variation >= 0) out.push_back(i);
  return out;
}

std::vector<std::size_t> Classification::minus() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < chords.size(); ++i)
    if (chords[i].variation <= 0) out.push_back(i);
  return out;
}

std::vector<std::size_t> Classification::zero() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < chords.size(); ++i)
    if (chords[i].variation == 0) out.push_back(i);
  return out;
}

namespace {

struct ChordRef {
  CircularArc chord;
  std::size_t element;
};

std::vector<ChordRef> small_chords(const KPPartition& part, double delta) {
  std::vector<ChordRef> out;
  const double same = 0.25 * part.spacing;
  for (std::size_t i = 0; i < part.elements.size(); ++i)
    for (const CircularArc& g : part.elements[i].chords) {
      if (!(g.diameter() <= delta)) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const ChordRef& o) {
        return dist(o.chord.mid, g.mid) < same &&
               ((dist(o.chord.a, g.a) < same && dist(o.chord.b, g.b) < same) ||
                (dist(o.chord.a, g.b) < same && dist(o.chord.b, g.a) < same));
      });
      if (!dup) out.push_back({g, i});
    }
  return out;
}

// Dense sample of the exterior families, for chords of diameter <= delta.
std::vector<CircularArc> family_chords(const KPPartition& part, double delta, int count = 512) {
  std::vector<CircularArc> out;
  const double tol = 1e-9 * scale_of(part.k);
  for (const ExteriorFamily& fam : part.families) {
    const double half = 0.5 * dist(fam.p, fam.q);
    const Point m = 0.5 * (fam.p + fam.q);
    const double lo = std::isfinite(fam.s_min) ? std::atan2(fam.s_min, half) : -0.5 * kPi;
    for (int j = 1; j < count; ++j) {
      const double phi = lo + (0.5 * kPi - lo) * j / count;
      const double s = half * std::tan(phi);
      if (auto el = make_element(part.k, Ball::exterior(m + s * fam.inward, std::hypot(s, half)), tol, "family"))
        for (const CircularArc& g : el->chords)
          if (g.diameter() <= delta) out.push_back(g);
    }
  }
  return out;
}

int cells_across(int cells) { return cells > 0 ? cells : 512; }

std::vector<Point> chord_polyline(const CircularArc& g, double step) {
  const double len = g.kind == CircularArc::Kind::Circle ? std::abs(g.sweep) * g.radius : dist(g.a, g.b);
  const int n = std::clamp(static_cast<int>(std::ceil(len / step)), 8, 4096);
  return g.sample(n);
}

}  // namespace

Classification classify_chords(const maps::PlaneMap& f, const KPPartition& part, double delta,
                               const ClassifyOptions& opts) {
  Classification cls;
  cls.delta = delta;
  const geom::Window& w = part.window;
  const double res = cells_across(opts.raster_cells) / std::max(w.width(), w.height());
  cls.hull = curve::topological_hull(curve::rasterize(part.k, w, res));
  const double cell = cls.hull.cell();

  std::vector<ChordRef> chords = small_chords(part, delta);
  if (chords.size() > opts.max_chords) {
    std::vector<ChordRef> thin;
    for (std::size_t j = 0; j < opts.max_chords; ++j) thin.push_back(chords[j * chords.size() / opts.max_chords]);
    cls.excluded.push_back(std::to_string(chords.size() - thin.size()) + " chords skipped (max_chords)");
    chords = std::move(thin);
  }

  variation::Obstacle base;
  base.segments = part.k.segments();
  base.blocked = cls.hull;
  base.window = w;

  for (std::size_t ci = 0; ci < chords.size(); ++ci) {
    const CircularArc& g = chords[ci].chord;
    std::vector<Point> path = chord_polyline(g, 0.5 * cell);
    const std::string tag = "chord " + std::to_string(ci);

    const curve::Region sh = curve::shadow_of(cls.hull, path);
    // Orient with the shadow on the left.
    const std::size_t mid = path.size() / 2;
    const Point d = unit(path[std::min(mid + 1, path.size() - 1)] - path[mid - 1]);
    const Point left{-d.y, d.x};
    const Point probe_l = path[mid] + 2.0 * cell * left, probe_r = path[mid] - 2.0 * cell * left;
    bool flip = false;
    if (sh.count() > 0) {
      flip = !sh.contains(probe_l) && sh.contains(probe_r);
    } else {
      flip = part.k.distance(probe_r) < part.k.distance(probe_l);
    }
    if (flip) std::reverse(path.begin(), path.end());

    // Endpoint images must lie in T(K ∪ g).
    auto held = [&](Point x) {
      return cls.hull.contains(x) || sh.contains(x) || part.k.distance(x) <= cell || g.distance(x) <= cell;
    };
    if (!held(f(g.a)) || !held(f(g.b))) {
      cls.excluded.push_back(tag + ": endpoint image outside T(K ∪ g)");
      continue;
    }

    // f(g) ∩ g = ∅ on samples.
    std::vector<Point> img;
    for (const Point& p : path) img.push_back(f(p));
    bool overlap = false;
    for (std::size_t a = 0; a + 1 < img.size() && !overlap; ++a)
      for (std::size_t b = 0; b + 1 < path.size(); ++b)
        if (geom::segments_intersect(img[a], img[a + 1], path[b], path[b + 1]) ||
            geom::dist_point_segment(img[a], path[b], path[b + 1]) <= opts.tolerance) {
          overlap = true;
          break;
        }
    if (overlap) {
      cls.excluded.push_back(tag + ": ChordImageOverlap: f(g) meets g");
      continue;
    }

    variation::Obstacle ob = base;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) ob.segments.emplace_back(path[j], path[j + 1]);
    SignedChord sc;
    sc.chord = g;
    sc.diameter = g.diameter();
    sc.element = chords[ci].element;
    try {
      const auto av = variation::variation_path(f, variation::polyline_path(path), ob, opts.variation);
      sc.variation = av.value;
      sc.junction = av.crossings.junction.construction;
    } catch (const Error& e) {
      cls.excluded.push_back(tag + ": " + e.what());
      continue;
    }
    sc.path = std::move(path);
    for (std::size_t c = 0; c < sh.raw().size(); ++c)
      if (sh.raw()[c]) sc.shadow.push_back(static_cast<int>(c));
    cls.chords.push_back(std::move(sc));
  }
  return cls;
}

curve::Region auxiliary_continuum(const KPPartition& part, double delta, int raster_cells, const Classification* cls,
                                  Sign sign) {
  const geom::Window& w = part.window;
  const double res = cells_across(raster_cells) / std::max(w.width(), w.height());
  curve::Region r = curve::rasterize(part.k, w, res);
  const double step = 0.5 * r.cell();
  if (sign == Sign::All || !cls) {
    for (const ChordRef& c : small_chords(part, delta)) r.paint_polyline(chord_polyline(c.chord, step));
    for (const CircularArc& g : family_chords(part, delta)) r.paint_polyline(chord_polyline(g, step));
  } else {
    for (const SignedChord& c : cls->chords) {
      if (!(c.diameter <= delta)) continue;
      if (sign == Sign::Plus && c.variation < 0) continue;
      if (sign == Sign::Minus && c.variation > 0) continue;
      r.paint_polyline(chord_polyline(c.chord, step));
    }
  }
  return curve::topological_hull(r);
}

std::vector<Chain> outchannel_scan(const KPPartition& part, const Classification& cls) {
  std::vector<Chain> out;
  const double dtol = part.spacing;
  for (int sign : {-1, 1}) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < cls.chords.size(); ++i)
      if (cls.chords[i].variation * sign > 0 && !cls.chords[i].shadow.empty()) ids.push_back(i);
    std::sort(ids.begin(), ids.end(), [&](std::size_t x, std::size_t y) {
      return cls.chords[x].shadow.size() > cls.chords[y].shadow.size();
    });
    // inner inside outer: strictly smaller, and all but a few cells contained.
    auto nested = [&](const SignedChord& inner, const SignedChord& outer) {
      if (inner.shadow.size() >= outer.shadow.size()) return false;
      if (inner.diameter > outer.diameter + dtol) return false;
      // Containment on an even subsample of the inner shadow.
      const std::size_t step = std::max<std::size_t>(1, inner.shadow.size() / 256);
      std::size_t missing = 0, tested = 0;
      for (std::size_t k = 0; k < inner.shadow.size(); k += step, ++tested)
        if (!std::binary_search(outer.shadow.begin(), outer.shadow.end(), inner.shadow[k])) ++missing;
      return missing <= 2 + tested / 50;
    };
    const std::size_t n = ids.size();
    std::vector<int> best(n, 1), prev(n, -1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (best[j] + 1 > best[i] && nested(cls.chords[ids[i]], cls.chords[ids[j]])) {
          best[i] = best[j] + 1;
          prev[i] = static_cast<int>(j);
        }
    std::vector<char> used(n, 0);
    for (;;) {
      int top = -1;
      for (std::size_t i = 0; i < n; ++i)
        if (!used[i] && (top < 0 || best[i] > best[top])) top = static_cast<int>(i);
      if (top < 0 || best[top] < 2) break;
      Chain c;
      c.sign = sign;
      bool clash = false;
      for (int i = top; i >= 0; i = prev[i]) {
        if (used[i]) clash = true;
        c.chords.push_back(ids[i]);
      }
      for (int i = top; i >= 0; i = prev[i]) used[i] = 1;
      if (clash) continue;
      std::reverse(c.chords.begin(), c.chords.end());
      for (std::size_t id : c.chords) c.total_variation += cls.chords[id].variation;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace planetopo::kp
