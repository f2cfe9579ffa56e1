#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "planetopo/curve.hpp"
#include "planetopo/error.hpp"
#include "planetopo/maps.hpp"
#include "planetopo/winding.hpp"

using namespace planetopo;
using namespace planetopo::curve;
using geom::Point;

namespace {

std::vector<Point> random_star(std::mt19937_64& rng, int n, Point c = {0, 0}, double r = 1.0) {
  std::uniform_real_distribution<double> u(0.4, 1.0);
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double th = 2 * std::numbers::pi * k / n;
    v.push_back(c + r * u(rng) * Point{std::cos(th), std::sin(th)});
  }
  return v;
}

double shoelace(const std::vector<Point>& v) {
  double a = 0;
  for (std::size_t i = 0; i < v.size(); ++i) a += geom::cross(v[i], v[(i + 1) % v.size()]);
  return a / 2;
}

// Number of bounded complementary components of a raster set.
int bounded_components(const Region& r) {
  Region comp(r.window(), r.resolution());
  for (int j = 0; j < r.ny(); ++j)
    for (int i = 0; i < r.nx(); ++i) comp.set(i, j, !r.at(i, j));
  int count = 0;
  for (const auto& c : comp.components()) {
    bool edge = false;
    for (int k : c) {
      const int i = k % r.nx(), j = k / r.nx();
      if (i == 0 || j == 0 || i == r.nx() - 1 || j == r.ny() - 1) edge = true;
    }
    if (!edge) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("curve construction and orientation") {
  const std::vector<Point> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const OrientedClosedCurve s(sq);
  CHECK(s.signed_area() == doctest::Approx(4.0));
  CHECK(s.length() == doctest::Approx(8.0));
  std::vector<Point> rev(sq.rbegin(), sq.rend());
  CHECK_THROWS_AS(OrientedClosedCurve{rev}, Error);
  CHECK(OrientedClosedCurve::from_polygon(rev).signed_area() > 0);
  CHECK_THROWS_AS(OrientedClosedCurve({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), Error);
  CHECK_THROWS_AS(OrientedClosedCurve({{0, 0}, {1, 0}}), Error);

  CHECK(geom::dist(s.at(0.0), {-1, -1}) < 1e-15);
  CHECK(geom::dist(s.at(0.125), {0, -1}) < 1e-15);
  CHECK(geom::dist(s.at(1.0), {-1, -1}) < 1e-15);
  CHECK(s.project({0.0, -1.5}) == doctest::Approx(0.125));
  const Point n = s.outward_normal(0.1);
  CHECK(geom::dist(n, {0, -1}) < 1e-15);
}

TEST_CASE("arcs cover the circle once") {
  const auto s = OrientedClosedCurve::circle({0, 0}, 1, 32);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 100; ++k) {
    const double a = u(rng), b = u(rng);
    if (std::abs(a - b) < 1e-9) continue;
    const CurveArc arc(s, a, b);
    CHECK(arc.span() + arc.complement().span() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(geom::dist(arc.end(), arc.complement().start()) < 1e-15);
  }
  CHECK_THROWS_AS(CurveArc(s, 0.3, 0.3), Error);
  CHECK(CurveArc::whole(s, 0.3).span() == 1.0);
}

TEST_CASE("contains") {
  const auto s = OrientedClosedCurve::square({0, 0}, 1);
  CHECK(contains(s, {0, 0}));
  CHECK_FALSE(contains(s, {3, 0}));
  CHECK_THROWS_AS(contains(s, {1, 0}), Error);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    const OrientedClosedCurve star(random_star(rng, 7 + trial));
    for (int k = 0; k < 50; ++k) {
      const Point p{u(rng), u(rng)};
      if (star.distance(p) < 1e-6) continue;
      const bool in = contains(star, p);
      CHECK(in == (winding::winding_number(star.vertices(), p) != 0));
    }
  }
}

TEST_CASE("topological hull") {
  const geom::Window w{-2, 2, -2, 2};
  CHECK_THROWS_AS(topological_hull(Compactum::segment({0, 0}, {1, 0}), w, 0), Error);
  CHECK_THROWS_AS(topological_hull(Compactum::segment({0, 0}, {1, 0}), w, -3), Error);

  // Annulus: two concentric closed polylines; the hole is absorbed.
  Compactum annulus;
  for (double r : {1.0, 0.5}) {
    std::vector<Point> ring;
    for (int k = 0; k <= 400; ++k)
      ring.push_back(r * Point{std::cos(2 * std::numbers::pi * k / 400), std::sin(2 * std::numbers::pi * k / 400)});
    annulus.add_polyline(ring);
  }
  const Region ha = topological_hull(annulus, w, 128);
  CHECK(ha.contains({0, 0}));
  CHECK(ha.contains({0.75, 0}));
  CHECK_FALSE(ha.contains({1.2, 0}));
  CHECK(std::abs(ha.area() - std::numbers::pi) / std::numbers::pi < 0.03);

  // Convex polygon: hull equals its raster.
  const Compactum tri = Compactum::polygon({{-1, -1}, {1.5, -0.5}, {0, 1.2}});
  const Region rt = rasterize(tri, w, 128);
  CHECK(topological_hull(rt) == rt);

  // Figure-eight point cloud against the exact filled area.
  std::vector<Point> cloud;
  std::vector<Point> lobe_l, lobe_r;
  const int m = 4000;
  for (int k = 0; k < m; ++k) {
    const double th = 2 * std::numbers::pi * k / m;
    lobe_r.push_back(Point{0.8, 0} + 0.8 * Point{-std::cos(th), std::sin(th)});
    lobe_l.push_back(Point{-0.8, 0} + 0.8 * Point{std::cos(th), std::sin(th)});
  }
  cloud.insert(cloud.end(), lobe_l.begin(), lobe_l.end());
  cloud.insert(cloud.end(), lobe_r.begin(), lobe_r.end());
  const Region h8 = topological_hull(Compactum::points(cloud), w, 256);
  const double exact = std::abs(shoelace(lobe_l)) + std::abs(shoelace(lobe_r));
  CHECK(std::abs(h8.area() - exact) / exact < 0.02);
  CHECK(h8.contains({0.8, 0}));
  CHECK(h8.contains({-0.8, 0}));

  // Idempotent and monotone.
  CHECK(topological_hull(h8) == h8);
  const Region raw = rasterize(Compactum::points(cloud), w, 256);
  CHECK(raw.minus(h8).count() == 0);
}

TEST_CASE("crosscut components") {
  const geom::Window w{-2, 2, -2, 2};
  const double res = 128;
  const Compactum x = Compactum::segment({-1, 0}, {1, 0});
  const OrientedClosedCurve s({{-1, 0}, {-0.5, -0.5}, {0, 0}, {0.5, -0.5}, {1, 0}, {0.7, 0.5}, {0.4, 0}, {0.1, 0.5}});
  const auto cuts = crosscut_components(s, x, w, res);
  CHECK(cuts.size() == 4);

  Region all = rasterize(x, w, res);
  all.paint_polyline(s.vertices(), true);
  CHECK(bounded_components(all) == static_cast<int>(cuts.size()));

  const Region hull_x = topological_hull(x, w, res);
  for (const auto& c : cuts) {
    CHECK(x.distance(c.arc.start()) <= 0.5 / res + 1e-12);
    CHECK(x.distance(c.arc.end()) <= 0.5 / res + 1e-12);
    REQUIRE(c.shadow.count() > 0);
    Region q(w, res);
    q.paint_polyline(c.path);
    // Every neighbour of a shadow cell is shadow, Q, or T(X).
    for (int j = 0; j < c.shadow.ny(); ++j)
      for (int i = 0; i < c.shadow.nx(); ++i) {
        if (!c.shadow.at(i, j)) continue;
        CHECK((i > 0 && j > 0 && i + 1 < c.shadow.nx() && j + 1 < c.shadow.ny()));
        for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          const int a = i + di, b = j + dj;
          if (!(c.shadow.at(a, b) || q.at(a, b) || hull_x.at(a, b))) {
            FAIL_CHECK("shadow leaks at cell " << a << "," << b);
          }
        }
      }
  }

  // S on X: nothing off X.
  const Compactum block = Compactum::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(crosscut_components(OrientedClosedCurve::square({0, 0}, 1), block, w, res).empty());

  // A single touch point is degenerate.
  const auto sq = OrientedClosedCurve::square({0.1234, 0.0567}, 0.5);
  CHECK_THROWS_AS(crosscut_components(sq, Compactum::points({{0.6234, 0.5567}}), w, res), Error);
}

TEST_CASE("bumping curve around a segment") {
  const geom::Window w{-2, 2, -2, 2};
  const Compactum x = Compactum::segment({-1, 0}, {1, 0});
  const auto f = maps::PlaneMap::translation(3.0);
  const BumpingCurve b = bumping_curve(x, f, 0.1, w, 128);
  CHECK(b.partition.size() >= 2);
  CHECK(b.partition.size() == b.contacts.size());
  for (const Point& c : b.contacts) CHECK(x.distance(c) < 1e-12);
  for (const Point& v : b.curve.vertices()) CHECK(x.distance(v) <= 0.1 + 0.02);
  for (const Point& p : x.boundary_samples(0.01))
    if (b.curve.distance(p) > 1e-7) CHECK(contains(b.curve, p));

  // Dense independent separation check of every arc.
  for (std::size_t i = 0; i < b.partition.size(); ++i) {
    const CurveArc arc(b.curve, b.partition[i], b.partition[(i + 1) % b.partition.size()]);
    const auto pts = arc.polyline(2000);
    double gap = std::numeric_limits<double>::infinity();
    for (const Point& p : pts) {
      const Point q = f(p);
      for (std::size_t k = 0; k + 1 < pts.size(); k += 1) gap = std::min(gap, geom::dist_point_segment(q, pts[k], pts[k + 1]));
    }
    CHECK(gap > 0.0);
  }
}

TEST_CASE("bumping curve around a disk is a slightly larger circle") {
  const geom::Window w{-2, 2, -2, 2};
  std::vector<Point> disk;
  for (int k = 0; k < 128; ++k)
    disk.push_back(Point{std::cos(2 * std::numbers::pi * k / 128), std::sin(2 * std::numbers::pi * k / 128)});
  const Compactum x = Compactum::polygon(disk);
  const BumpingCurve b = bumping_curve(x, maps::PlaneMap::translation(3.0), 0.1, w, 128);
  int off = 0;
  for (const Point& v : b.curve.vertices()) {
    if (x.distance(v) < 1e-9) continue;
    ++off;
    CHECK(std::abs(geom::norm(v) - 1.1) < 0.02);
  }
  CHECK(off > 20);
}

TEST_CASE("bumping curve rejects fixed points near X") {
  const geom::Window w{-2, 2, -2, 2};
  CHECK_THROWS_AS(bumping_curve(Compactum::segment({-1, 0}, {1, 0}), maps::PlaneMap::identity(), 0.1, w, 64), Error);
  try {
    bumping_curve(Compactum::segment({-1, 0}, {1, 0}), maps::PlaneMap::identity(), 0.1, w, 64);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FixedPointNearX);
  }
}
