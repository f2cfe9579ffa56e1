#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "planetopo/error.hpp"
#include "planetopo/kp.hpp"
#include "planetopo/maps.hpp"

using namespace planetopo;
using curve::Compactum;
using geom::Ball;
using geom::CircularArc;
using geom::Point;

namespace {

const double kPi = std::numbers::pi;

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  auto one = [](const std::vector<Point>& x, const std::vector<Point>& y) {
    double worst = 0;
    for (const Point& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : y) best = std::min(best, geom::dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one(a, b), one(b, a));
}

std::vector<Point> circle_arc_points(Point c, double r, double t0, double t1, int n) {
  std::vector<Point> out;
  for (int k = 0; k <= n; ++k) {
    const double t = t0 + (t1 - t0) * k / n;
    out.push_back(c + r * Point{std::cos(t), std::sin(t)});
  }
  return out;
}

Compactum random_polygon(std::uint64_t seed, int n = 12) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> th;
  for (int k = 0; k < n; ++k) th.push_back((k + 0.2 + 0.6 * u(rng)) * 2 * kPi / n);
  std::vector<Point> v;
  for (double t : th) {
    const double r = 0.5 + u(rng);
    v.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return Compactum::polygon(v);
}

// Brute force: radius of the smallest disk containing the segment [-1,1],
// minimizing over a grid of centers.
double brute_enclosing_radius() {
  double best = 1e9;
  for (int i = -50; i <= 50; ++i)
    for (int j = -50; j <= 50; ++j) {
      const Point c{i * 0.02, j * 0.02};
      best = std::min(best, std::max(geom::dist(c, {-1, 0}), geom::dist(c, {1, 0})));
    }
  return best;
}

}  // namespace

TEST_CASE("unit square partition") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = kp::maximal_balls(Compactum::unit_square(), {-2, 2, -2, 2});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 5.0);

  int half = 0, ext = 0;
  for (std::size_t i : p.with_interior()) {
    const auto& e = p.elements[i];
    if (e.ball.kind == Ball::Kind::HalfPlane) ++half;
    if (e.ball.kind == Ball::Kind::ExteriorDisk) ++ext;
    CHECK(e.ball.kind != Ball::Kind::Disk);
  }
  CHECK(half == 4);
  CHECK(ext == 1);
  CHECK(p.with_interior().size() == 5);

  for (std::size_t i : p.with_interior()) {
    const auto& e = p.elements[i];
    if (e.ball.kind == Ball::Kind::HalfPlane && std::abs(e.ball.normal.y - 1) < 1e-12) {
      REQUIRE(e.chords.size() == 1);
      // Semicircle |z - i| = 1 above the top edge.
      CHECK(hausdorff(e.chords[0].sample(400), circle_arc_points({0, 1}, 1, 0, kPi, 400)) < 1e-6 + 1e-2);
      for (const Point& q : e.chords[0].sample(200)) CHECK(std::abs(geom::dist(q, {0, 1}) - 1) < 1e-6);
    }
    if (e.ball.kind == Ball::Kind::ExteriorDisk) {
      CHECK(std::abs(e.ball.radius - std::sqrt(2.0)) < 1e-12);
      REQUIRE(e.chords.size() == 4);
      CHECK(e.is_gap);
      for (const auto& g : e.chords) {
        CHECK(std::abs(g.radius - std::sqrt(2.0)) < 1e-6);
        const double off = std::max(std::abs(g.center.x), std::abs(g.center.y));
        const double on = std::min(std::abs(g.center.x), std::abs(g.center.y));
        CHECK(std::abs(off - 2) < 1e-6);
        CHECK(on < 1e-6);
      }
    }
  }
}

TEST_CASE("half-plane hull is the semidisk") {
  const auto p = kp::maximal_balls(Compactum::unit_square(), {-2, 2, -2, 2});
  for (const auto& e : p.elements) {
    if (e.ball.kind != Ball::Kind::HalfPlane || std::abs(e.ball.normal.y - 1) > 1e-12) continue;
    const auto h = kp::hull_of(e);
    REQUIRE(!h.polygon.empty());
    double area = 0;
    for (std::size_t k = 0; k < h.polygon.size(); ++k)
      area += geom::cross(h.polygon[k], h.polygon[(k + 1) % h.polygon.size()]);
    CHECK(std::abs(std::abs(area) / 2 - kPi / 2) < 1e-3);
    CHECK(e.hull_interior_contains({0, 1.5}));
    CHECK_FALSE(e.hull_contains({0.9, 1.9}));
  }
}

TEST_CASE("segment partition") {
  const auto p = kp::maximal_balls(Compactum::segment({-1, 0}, {1, 0}), {-2, 2, -2, 2});
  int up = 0, down = 0;
  for (const auto& e : p.elements) {
    if (e.source == "half-plane") {
      CHECK(e.nonempty_interior());
      (e.ball.normal.y > 0 ? up : down) += 1;
    }
    if (e.source == "exterior") CHECK(std::abs(e.ball.radius - brute_enclosing_radius()) < 1e-3);
    CHECK(e.ball.kind != Ball::Kind::Disk);
  }
  CHECK(up == 1);
  CHECK(down == 1);
}

TEST_CASE("two points") {
  const Compactum k = Compactum::points({{-1, 0}, {1, 0}});
  const auto p = kp::maximal_balls(k, {-2, 2, -2, 2});
  CHECK(!p.elements.empty());
  for (const auto& e : p.elements) {
    REQUIRE(e.contacts.size() == 2);
    for (const Point& c : e.contacts) CHECK(std::min(geom::dist(c, {-1, 0}), geom::dist(c, {1, 0})) < 1e-9);
    // Every circle through the two points.
    if (e.ball.kind != Ball::Kind::HalfPlane) CHECK(std::abs(e.ball.center.x) < 1e-9);
  }
  const auto fam = kp::chords_between(p, {-1, 0}, {1, 0});
  CHECK(fam.kind == kp::ChordFamily::Kind::Disk);
  CHECK(fam.whole_family);
}

TEST_CASE("chords_between on the square") {
  const auto p = kp::maximal_balls(Compactum::unit_square(), {-2, 2, -2, 2});
  const auto fam = kp::chords_between(p, {1, 1}, {1, -1});
  CHECK(fam.kind == kp::ChordFamily::Kind::Disk);
  REQUIRE(fam.chords.size() == 2);
  // Extremes: the half-plane semicircle and the chord of the exterior element.
  bool semicircle = false, exterior = false;
  for (const auto& g : fam.chords) {
    if (geom::dist(g.center, {1, 0}) < 1e-6 && std::abs(g.radius - 1) < 1e-6) semicircle = true;
    if (geom::dist(g.center, {2, 0}) < 1e-6 && std::abs(g.radius - std::sqrt(2.0)) < 1e-6) exterior = true;
  }
  CHECK(semicircle);
  CHECK(exterior);
  CHECK_THROWS_AS(kp::chords_between(p, {1, 1}, {1, 1}), Error);
  try {
    kp::chords_between(p, {1, 1}, {-1, -1});
    FAIL("diagonal accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoChord);
  }
}

TEST_CASE("disk with antipodal contacts has a straight chord") {
  const Compactum k = Compactum::points({{0, -1}, {0, 1}, {3, 0}});
  const auto e = kp::make_element(k, Ball::disk({0, 0}, 1), 1e-9);
  REQUIRE(e);
  REQUIRE(e->chords.size() == 1);
  CHECK(e->chords[0].kind == CircularArc::Kind::Segment);
  CHECK_FALSE(e->nonempty_interior());
}

TEST_CASE("smallest enclosing disk center lies in the hull of its contacts") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> pts;
    const int n = 3 + trial % 20;
    for (int k = 0; k < n; ++k) pts.push_back({u(rng), u(rng)});
    const Ball b = geom::min_enclosing_ball(pts);
    std::vector<double> angles;
    for (const Point& q : pts)
      if (std::abs(geom::dist(q, b.center) - b.radius) < 1e-9 * (1 + b.radius))
        angles.push_back(std::atan2(q.y - b.center.y, q.x - b.center.x));
    std::sort(angles.begin(), angles.end());
    REQUIRE(angles.size() >= 2);
    // Center in the ideal polygon: no gap between consecutive contacts exceeds a half turn.
    double gap = angles.front() + 2 * kPi - angles.back();
    for (std::size_t k = 1; k < angles.size(); ++k) gap = std::max(gap, angles[k] - angles[k - 1]);
    CHECK(gap <= kPi + 1e-9);
  }
}

TEST_CASE("point location contains the probe") {
  const Compactum k = random_polygon(7);
  const auto p = kp::maximal_balls(k, {-3, 3, -3, 3});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.8, 2.8);
  int probes = 0, inside = 0;
  while (probes < 100) {
    const Point q{u(rng), u(rng)};
    if (k.contains(q) || k.distance(q) < 1e-3) continue;
    ++probes;
    const auto e = kp::locate(p, q);
    inside += e.hull_contains(q, 1e-6);
  }
  CHECK(inside == 100);
}

TEST_CASE("partition: probes lie in exactly one hull") {
  for (std::uint64_t seed : {7u, 11u}) {
    const Compactum k = random_polygon(seed);
    const auto p = kp::maximal_balls(k, {-3, 3, -3, 3});
    const auto listed = p.with_interior();
    std::mt19937_64 rng(seed + 100);
    std::uniform_real_distribution<double> u(-2.8, 2.8);
    int probes = 0, good = 0, doubled = 0;
    while (probes < 400) {
      const Point q{u(rng), u(rng)};
      if (k.contains(q) || k.distance(q) < 1e-3) continue;
      ++probes;
      const auto e = kp::locate(p, q);
      int in_listed = 0;
      bool same = false;
      for (std::size_t i : listed)
        if (p.elements[i].hull_interior_contains(q, 1e-9)) {
          ++in_listed;
          const auto& b = p.elements[i].ball;
          same = same || (b.kind == e.ball.kind && geom::dist(b.center, e.ball.center) < 1e-4);
        }
      doubled += in_listed > 1;
      good += e.hull_contains(q, 1e-6) && (in_listed == 0 || (in_listed == 1 && same));
    }
    CHECK(doubled == 0);
    CHECK(good >= 396);
  }
}

TEST_CASE("chord continuity") {
  const Compactum k = random_polygon(3);
  const auto p = kp::maximal_balls(k, {-3, 3, -3, 3});
  int checked = 0;
  for (const auto& e : p.elements) {
    if (e.source != "voronoi-edge" || e.chords.size() != 1 || checked >= 10) continue;
    const CircularArc& g = e.chords[0];
    const Point n = geom::unit(g.mid - (g.a + g.b) / 2.0 + Point{1e-9, 0});
    // Elements located at points converging to the chord midpoint.
    std::vector<Point> limit;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-6}) {
      const auto located = kp::locate(p, g.mid + eps * geom::perp(n));
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : located.chords) best = std::min(best, c.distance(g.mid));
      limit.clear();
      for (const auto& c : located.chords)
        if (c.distance(g.mid) == best) limit = c.sample(100);
    }
    REQUIRE(!limit.empty());
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& other : p.elements)
      for (const auto& c : other.chords)
        if (c.diameter() < 1e3) nearest = std::min(nearest, hausdorff(limit, c.sample(100)));
    CHECK(nearest <= 3 * p.spacing);
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("small chords shrink with delta") {
  for (const Compactum& k : {Compactum::unit_square(), random_polygon(5)}) {
    const auto p = kp::maximal_balls(k, {-3, 3, -3, 3});
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {0.4, 0.2, 0.1, 0.05}) {
      double worst = 0;
      for (const auto& e : p.elements)
        for (const auto& g : e.chords) {
          if (!(g.diameter() < 1e3)) continue;
          bool near = true;
          for (const Point& q : g.sample(64)) near = near && k.distance(q) <= delta;
          if (near) worst = std::max(worst, g.diameter());
        }
      CHECK(worst <= prev);
      CHECK(worst <= 2 * delta + 1e-9);
      prev = worst;
    }
  }
}

TEST_CASE("auxiliary continuum of a segment") {
  // Chords through the endpoints with diameter at most delta sweep out two
  // major circular segments of radius delta/2 over [-1, 1].
  const Compactum k = Compactum::segment({-1, 0}, {1, 0});
  const auto p = kp::maximal_balls(k, {-4, 4, -4, 4});
  for (double delta : {2.5, 3.0}) {
    const double r = delta / 2, t = std::sqrt(r * r - 1), phi = std::acos(t / r);
    const double area = 2 * (kPi * r * r - r * r * (phi - std::sin(phi) * std::cos(phi)));
    const auto hull = kp::auxiliary_continuum(p, delta, 512);
    CHECK(std::abs(hull.area() - area) < 0.03 * area);
    for (const auto& [i, j] : hull.boundary_cells()) {
      const Point c = hull.center(i, j);
      const double d = std::min(std::abs(geom::dist(c, {0, t}) - r), std::abs(geom::dist(c, {0, -t}) - r));
      CHECK(d <= 2 * hull.cell());
    }
  }
}

TEST_CASE("classification of a constant map into a segment") {
  const Compactum k = Compactum::segment({-1, 0}, {1, 0});
  const auto p = kp::maximal_balls(k, {-2, 2, -2, 2});
  const auto cls = kp::classify_chords(maps::PlaneMap::constant({0.5, 0}), p, 3.0);
  CHECK(!cls.chords.empty());
  for (const auto& c : cls.chords) CHECK(c.variation == 0);
  CHECK(kp::outchannel_scan(p, cls).empty());
  CHECK(cls.plus().size() == cls.chords.size());
  CHECK(cls.minus().size() == cls.chords.size());
}

TEST_CASE("chords whose endpoint images leave the hull are excluded") {
  const Compactum k = Compactum::segment({-1, 0}, {1, 0});
  const auto p = kp::maximal_balls(k, {-2, 2, -2, 2});
  const auto cls = kp::classify_chords(maps::PlaneMap::translation(5), p, 3.0);
  CHECK(cls.chords.empty());
  CHECK(!cls.excluded.empty());
}

TEST_CASE("overlapping chord images are excluded") {
  const Compactum k = Compactum::segment({-1, 0}, {1, 0});
  const auto p = kp::maximal_balls(k, {-2, 2, -2, 2});
  const auto cls = kp::classify_chords(maps::PlaneMap::identity(), p, 3.0);
  CHECK(cls.chords.empty());
  CHECK(!cls.excluded.empty());
}

TEST_CASE("fjord with a reflecting map has a negative chain") {
  const double w = 0.15;
  const Compactum k = Compactum::polygon({{-3, -3}, {3, -3}, {3, 3}, {w, 3}, {w, -2}, {-w, -2}, {-w, 3}, {-3, 3}});
  const auto p = kp::maximal_balls(k, {-4, 4, -4, 4});
  // Reflect across the slot axis and push up the slot.
  const maps::PlaneMap f = maps::PlaneMap::parse("-re(z) + (im(z) + 0.5)*i");
  const auto cls = kp::classify_chords(f, p, 0.35);
  int across = 0, negative = 0;
  for (const auto& c : cls.chords)
    if (std::abs(std::abs(c.chord.a.x) - w) < 1e-9 && std::abs(c.chord.a.x + c.chord.b.x) < 1e-9) {
      ++across;
      negative += c.variation == -1;
    }
  CHECK(across > 20);
  // Above y = 2.5 the images of the endpoints leave the block.
  for (const auto& c : cls.chords) CHECK(c.chord.a.y <= 2.5 + 2 * cls.hull.cell());
  CHECK(negative == across);
  const auto chains = kp::outchannel_scan(p, cls);
  REQUIRE(chains.size() >= 1);
  CHECK(chains[0].sign == -1);
  CHECK(chains[0].chords.size() >= 10);

  const auto still = kp::classify_chords(maps::PlaneMap::constant({2, -2}), p, 0.35);
  CHECK(kp::outchannel_scan(p, still).empty());
}

TEST_CASE("bounded complementary components are rejected") {
  Compactum ring = Compactum::polyline({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
  CHECK_THROWS_AS(kp::maximal_balls(ring, {-2, 2, -2, 2}), Error);
  CHECK_THROWS_AS(kp::maximal_balls(Compactum{}, {-2, 2, -2, 2}), Error);
}
