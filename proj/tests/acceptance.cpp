#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "instances.hpp"
#include "planetopo/checkers.hpp"
#include "planetopo/error.hpp"
#include "planetopo/kp.hpp"
#include "planetopo/maps.hpp"
#include "planetopo/variation.hpp"
#include "planetopo/winding.hpp"

using namespace planetopo;
using curve::Compactum;
using curve::CurveArc;
using curve::OrientedClosedCurve;
using geom::Ball;
using geom::CircularArc;
using geom::Point;
using maps::PlaneMap;
using C = std::complex<double>;

namespace {

const double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return seconds_since(t0);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

OrientedClosedCurve star_polygon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const int n = 5 + static_cast<int>(u(rng) * 10);
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double th = (k + 0.2 + 0.6 * u(rng)) * 2 * kPi / n;
    v.push_back((0.6 + 0.6 * u(rng)) * Point{std::cos(th), std::sin(th)});
  }
  return OrientedClosedCurve(v);
}

// Alternates small perturbations of a constant with maps dominated by a
// leading term c z^d, which wind d times and so reach nonzero variation.
PlaneMap random_poly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  const int degree = 1 + static_cast<int>((u(rng) + 1) * 2) % 4;
  std::vector<C> c;
  if (u(rng) < 0) {
    const double scale = 0.3 + 1.2 * std::abs(u(rng));
    for (int k = 0; k <= degree; ++k) c.push_back(scale / (k + 1) * C(u(rng), u(rng)));
  } else {
    for (int k = 0; k < degree; ++k) c.push_back(0.15 * C(u(rng), u(rng)));
    c.push_back(std::polar(0.8 + 0.6 * std::abs(u(rng)), kPi * u(rng)));
  }
  return PlaneMap::polynomial(c);
}

Compactum random_polygon(std::uint64_t seed, int n = 12) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.2 + 0.6 * u(rng)) * 2 * kPi / n;
    v.push_back((0.5 + u(rng)) * Point{std::cos(t), std::sin(t)});
  }
  return Compactum::polygon(v);
}

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  auto one = [](const std::vector<Point>& x, const std::vector<Point>& y) {
    double worst = 0;
    for (const Point& p : x) {
      double best = kInf;
      for (const Point& q : y) best = std::min(best, geom::dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one(a, b), one(b, a));
}

// Distance to the upper half of |z - i| = 1.
double to_top_semicircle(Point q) {
  const Point c{0, 1};
  if (q.y >= 1) return std::abs(geom::dist(q, c) - 1);
  return std::min(geom::dist(q, {-1, 1}), geom::dist(q, {1, 1}));
}

Outcome unit_square() {
  Outcome o;
  kp::KPPartition p;
  const double secs = timed([&] { p = kp::maximal_balls(Compactum::unit_square(), {-3, 3, -3, 3}); });
  o.require(secs < 5.0, fmt("took %.2f s", secs));
  int half = 0, ext = 0;
  double semicircle = kInf, worst_ext = 0;
  for (std::size_t i : p.with_interior()) {
    const auto& e = p.elements[i];
    half += e.ball.kind == Ball::Kind::HalfPlane;
    ext += e.ball.kind == Ball::Kind::ExteriorDisk;
    if (e.ball.kind == Ball::Kind::HalfPlane && std::abs(e.ball.normal.y - 1) < 1e-12 && e.chords.size() == 1) {
      const CircularArc& g = e.chords[0];
      double h = 0;
      for (const Point& q : g.sample(2000)) h = std::max(h, to_top_semicircle(q));
      for (int k = 0; k <= 2000; ++k) {
        const double t = kPi * k / 2000;
        h = std::max(h, g.distance(Point{std::cos(t), 1 + std::sin(t)}));
      }
      semicircle = h;
    }
    if (e.ball.kind == Ball::Kind::ExteriorDisk) {
      o.require(e.chords.size() == 4, "exterior element does not have 4 chords");
      for (const auto& g : e.chords) {
        const double off = std::max(std::abs(g.center.x), std::abs(g.center.y));
        const double on = std::min(std::abs(g.center.x), std::abs(g.center.y));
        worst_ext = std::max({worst_ext, std::abs(g.radius - std::sqrt(2.0)), std::abs(off - 2), on});
      }
    }
  }
  o.require(half == 4 && ext == 1 && p.with_interior().size() == 5,
            fmt("%g half-plane, %g exterior, %g total", half, ext, static_cast<double>(p.with_interior().size())));
  o.require(semicircle < 1e-6, fmt("semicircle Hausdorff %.3g", semicircle));
  o.require(worst_ext < 1e-6, fmt("exterior chord error %.3g", worst_ext));
  if (o.pass) o.detail = fmt("5 hulls, semicircle Hausdorff %.1e, exterior chord error %.1e, %.2f s", semicircle,
                             worst_ext, secs);
  return o;
}

Outcome index_oracles() {
  Outcome o;
  const auto unit = OrientedClosedCurve::circle({0, 0}, 1, 128);
  const auto two = OrientedClosedCurve::circle({0, 0}, 2, 128);
  double slowest = 0;
  auto check = [&](const PlaneMap& f, const OrientedClosedCurve& s, int want, const char* name) {
    int got = 0;
    const double secs = timed([&] { got = winding::index(f, s); });
    slowest = std::max(slowest, secs);
    o.require(got == want, std::string(name) + " index " + std::to_string(got));
    o.require(secs < 0.1, std::string(name) + fmt(" took %.3f s", secs));
  };
  check(PlaneMap::translation(1), unit, 0, "z+1");
  check(PlaneMap::constant({0.2, -0.3}), unit, 1, "constant");
  check(PlaneMap::power(2), two, 2, "z^2");
  check(PlaneMap::affine(2, 0), unit, 1, "2z");
  bool none = false;
  const double secs = timed([&] {
    try {
      variation::auto_partition(PlaneMap::affine(2, 0), unit);
    } catch (const Error& e) {
      none = e.kind() == ErrorKind::NoValidPartition;
    }
  });
  o.require(none, "2z admits a partition");
  o.require(secs < 0.1, fmt("auto_partition on 2z took %.3f s", secs));
  if (o.pass) o.detail = fmt("0, 1, 2, 1 and NoValidPartition; slowest %.3f s", std::max(slowest, secs));
  return o;
}

Outcome index_variation() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int checked = 0, equal = 0, tried = 0, nonzero = 0;
  const double secs = timed([&] {
    while (checked < 100 && tried < 5000) {
      ++tried;
      const auto s = star_polygon(rng);
      const PlaneMap f = random_poly(rng);
      std::vector<double> part;
      try {
        part = variation::auto_partition(f, s);
      } catch (const Error&) {
        continue;
      }
      ++checked;
      const auto r = checkers::check_index_variation(f, s, part);
      equal += r.equal;
      nonzero += r.variation != 0;
    }
  });
  o.require(checked == 100, fmt("only %g admissible instances", checked));
  o.require(equal == checked, fmt("%g of %g equal", equal, checked));
  o.require(secs < 60, fmt("took %.1f s", secs));
  if (o.pass)
    o.detail = fmt("100/100 equal (%g with nonzero variation, %g draws), %.1f s", nonzero, tried, secs);
  return o;
}

Outcome junction_and_completion() {
  Outcome o;
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0, agree = 0, tried = 0;
  std::vector<OrientedClosedCurve> completions;
  for (double depth : {1.0, 0.6}) {
    std::vector<Point> v;
    for (int k = 0; k <= 64; ++k) v.push_back({std::cos(kPi * k / 64), std::sin(kPi * k / 64)});
    for (int k = 1; k < 64; ++k) v.push_back({-std::cos(kPi * k / 64), -depth * std::sin(kPi * k / 64)});
    completions.emplace_back(v);
  }
  const Point a{std::cos(0.3), std::sin(0.3)}, b{std::cos(2.6), std::sin(2.6)};
  while (checked < 20 && tried < 2000) {
    ++tried;
    const double scale = tried % 2 ? 1.5 : 0.6;
    const PlaneMap f =
        PlaneMap::polynomial({C(0.3 * u(rng), 0.3 * u(rng)), C(scale * u(rng), scale * u(rng)),
                              C(scale * u(rng), scale * u(rng))}) +
        C(scale * u(rng), scale * u(rng)) * PlaneMap::conjugation();
    bool admissible = true;
    for (const auto& s : completions)
      admissible = admissible && variation::arc_violation(f, CurveArc(s, s.project(a), s.project(b))).empty();
    if (!admissible) continue;
    ++checked;
    try {
      const auto c = checkers::check_completion_invariance(f, completions, a, b);
      bool ok = c.agree;
      for (const auto& s : completions) {
        const auto j = checkers::check_junction_invariance(f, CurveArc(s, s.project(a), s.project(b)), 5);
        ok = ok && j.agree && j.values.size() == 5 && j.values.front() == c.values.front();
      }
      agree += ok;
    } catch (const Error& e) {
      o.require(false, e.what());
    }
  }
  o.require(checked == 20, fmt("only %g admissible instances", checked));
  o.require(agree == checked, fmt("%g of %g agree", agree, checked));
  if (o.pass) o.detail = "20/20 agree across 5 junctions and 2 completions";
  return o;
}

Outcome additivity() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0, split = 0, refined = 0, tried = 0;
  double worst = 0;
  while (checked < 50 && tried < 5000) {
    ++tried;
    const auto s = star_polygon(rng);
    const PlaneMap f = random_poly(rng);
    std::vector<double> part;
    try {
      part = variation::auto_partition(f, s);
    } catch (const Error&) {
      continue;
    }
    const double a = u(rng), b = u(rng);
    if (std::abs(a - b) < 1e-3) continue;
    try {
      const CurveArc arc(s, a, b);
      const double sum = winding::fractional_index(f, arc) + winding::fractional_index(f, arc.complement());
      const double err = std::abs(sum - winding::index(f, s));
      worst = std::max(worst, err);
      split += err < 1e-9;
      const int coarse = variation::variation_total(f, s, part).total;
      refined += variation::variation_total(f, s.refined(3), part).total == coarse;
      ++checked;
    } catch (const Error&) {
    }
  }
  o.require(checked == 50, fmt("only %g instances", checked));
  o.require(split == checked, fmt("fractional split within 1e-9 on %g of %g (worst %.2g)", split, checked, worst));
  o.require(refined == checked, fmt("refinement invariant on %g of %g", refined, checked));
  if (o.pass) o.detail = fmt("50/50 split (worst %.1e), 50/50 refinement", worst);
  return o;
}

Outcome lollipop() {
  Outcome o;
  for (int side : {1, -1}) {
    const auto inst = instances::lollipop(side);
    variation::PartitionOptions po;
    po.required = {inst.a0, inst.a1};
    try {
      const auto part = variation::auto_partition(inst.f, inst.s, nullptr, po);
      const auto r = checkers::check_lollipop(inst.f, inst.s, part, inst.neck);
      const char want = side > 0 ? 'L' : 'R';
      o.require(r.side == want, std::string("side ") + r.side);
      o.require(r.identity, "identity fails");
      o.require(r.curve_index == 0 && r.negative_arc.has_value(), "no negative arc with ind 0");
      o.require(r.corollary, "negative arc on the wrong side");
      if (r.negative_arc) {
        const bool on_r = *r.negative_arc < r.neck;
        o.require(on_r == (want == 'R'), "negative arc index on the wrong side");
      }
    } catch (const Error& e) {
      o.require(false, e.what());
    }
  }
  if (o.pass) o.detail = "identity and negative arc on the predicted side for both cases";
  return o;
}

Outcome locator() {
  Outcome o;
  const geom::Window box{-2, 2, -2, 2};
  double slowest = 0, worst = 0;
  auto one = [&](const PlaneMap& f, const std::string& name) {
    checkers::FixedPointResult r;
    const double secs = timed([&] { r = checkers::locate_fixed_point(f, box, 1e-10); });
    slowest = std::max(slowest, secs);
    o.require(secs < 2, name + fmt(" took %.2f s", secs));
    if (r.points.empty()) {
      o.require(false, name + " found no point");
      return;
    }
    const double res = geom::dist(f(r.points[0]), r.points[0]);
    worst = std::max(worst, res);
    o.require(res < 1e-8, name + fmt(" residual %.2g", res));
  };
  one(PlaneMap::power(2), "z^2");
  one(0.5 * PlaneMap::conjugation(), "conj/2");
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 10; ++k) {
    // |a| + 2√2|b| + 8|c| < 1.9 keeps the image of the box inside |z| < 1.9.
    const C a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    const double norm = std::abs(a) + 2 * std::sqrt(2.0) * std::abs(b) + 8 * std::abs(c);
    const double scale = (0.6 + 0.3 * std::abs(u(rng))) * 1.9 / norm;
    one(PlaneMap::polynomial({scale * a, scale * b, scale * c}), "sample " + std::to_string(k));
  }
  checkers::FixedPointResult none;
  const double secs = timed([&] { none = checkers::locate_fixed_point(PlaneMap::translation(1), box, 1e-10); });
  o.require(none.absent && none.points.empty(), "z+1 not reported absent");
  o.require(secs < 2, fmt("z+1 took %.2f s", secs));
  if (o.pass) o.detail = fmt("12 points, worst residual %.1e, slowest %.2f s; z+1 absent", worst, slowest);
  return o;
}

Outcome orientation() {
  Outcome o;
  const geom::Window w{-2, 2, -2, 2};
  const auto pos = maps::orientation_class(PlaneMap::parse("z^3 + 0.2*z"), 50, w);
  const auto neg = maps::orientation_class(PlaneMap::parse("conj(z^2)"), 50, w);
  const auto fold = maps::orientation_class(PlaneMap::fold(), 50, w);
  o.require(pos.positive == 50, fmt("z^3+0.2z: %g/50 positive", pos.positive));
  o.require(neg.negative == 50, fmt("conj(z^2): %g/50 negative", neg.negative));
  o.require(fold.verdict == maps::Orientation::Mixed, "fold not mixed");
  if (o.pass) o.detail = "50/50 positive, 50/50 negative, fold mixed";
  return o;
}

// Each check returns an empty string on success.
std::string partition_disjointness(const Compactum& k, const kp::KPPartition& p, std::uint64_t seed) {
  const auto listed = p.with_interior();
  std::mt19937_64 rng(seed);
  const auto& w = p.window;
  std::uniform_real_distribution<double> ux(w.xmin, w.xmax), uy(w.ymin, w.ymax);
  std::vector<Point> probes;
  while (probes.size() < 10000) {
    const Point q{ux(rng), uy(rng)};
    if (!k.contains(q) && k.distance(q) >= 1e-3 * w.width()) probes.push_back(q);
  }
  // Per probe: 1 in exactly one hull, 2 in two or more, 0 otherwise.
  std::vector<int> verdict(probes.size());
  auto work = [&](std::size_t from, std::size_t to) {
    for (std::size_t n = from; n < to; ++n) {
      const Point q = probes[n];
      int in_listed = 0;
      for (std::size_t i : listed)
        in_listed += p.elements[i].ball.contains(q, 1e-9) && p.elements[i].hull_interior_contains(q, 1e-9);
      verdict[n] = in_listed > 1 ? 2 : in_listed == 1 || kp::locate(p, q).hull_contains(q, 1e-6);
    }
  };
  const std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunk = (probes.size() + threads - 1) / threads;
  std::vector<std::future<void>> jobs;
  for (std::size_t from = 0; from < probes.size(); from += chunk)
    jobs.push_back(std::async(std::launch::async, work, from, std::min(probes.size(), from + chunk)));
  for (auto& j : jobs) j.get();
  const auto doubled = std::count(verdict.begin(), verdict.end(), 2);
  const auto good = std::count(verdict.begin(), verdict.end(), 1);
  if (doubled) return fmt("%g probes in two hull interiors", static_cast<double>(doubled));
  if (good < 9900) return fmt("%g of 10000 probes in exactly one hull", static_cast<double>(good));
  return {};
}

std::string center_in_hull(const Compactum& k) {
  auto gap_ok = [](const std::vector<Point>& pts, const Ball& b) {
    std::vector<double> angles;
    for (const Point& q : pts)
      if (std::abs(geom::dist(q, b.center) - b.radius) < 1e-9 * (1 + b.radius))
        angles.push_back(std::atan2(q.y - b.center.y, q.x - b.center.x));
    if (angles.size() < 2) return false;
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + 2 * kPi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    return gap <= kPi + 1e-9;
  };
  const auto samples = k.boundary_samples(0.01);
  if (!gap_ok(samples, geom::min_enclosing_ball(samples))) return "enclosing ball center outside the hull of K";
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 3 + trial % 20; ++i) pts.push_back({u(rng), u(rng)});
    if (!gap_ok(pts, geom::min_enclosing_ball(pts))) return fmt("cloud %g: center outside the hull", trial);
  }
  return {};
}

std::string chord_continuity(const kp::KPPartition& p) {
  int checked = 0;
  for (const auto& e : p.elements) {
    if (checked >= 10) break;
    if (e.contacts.size() != 2 || e.chords.size() != 1 || !(e.chords[0].diameter() < 1e3)) continue;
    const CircularArc& g = e.chords[0];
    if (geom::dist(g.a, g.b) < 10 * p.spacing) continue;
    const Point n = geom::unit(geom::perp(g.b - g.a));
    for (double sgn : {1.0, -1.0}) {
      std::vector<Point> limit;
      for (double eps : {1e-2, 1e-3, 1e-4, 1e-6}) {
        const Point q = g.mid + sgn * eps * n;
        if (p.k.contains(q)) break;
        const auto located = kp::locate(p, q);
        double best = kInf;
        for (const auto& c : located.chords) best = std::min(best, c.distance(g.mid));
        limit.clear();
        for (const auto& c : located.chords)
          if (c.distance(g.mid) == best && c.diameter() < 1e3) limit = c.sample(100);
      }
      if (limit.empty()) continue;
      double nearest = kInf;
      for (const auto& other : p.elements)
        for (const auto& c : other.chords)
          if (c.diameter() < 1e3) nearest = std::min(nearest, hausdorff(limit, c.sample(100)));
      if (nearest > 3 * p.spacing) return fmt("limit chord %.3g from the partition (h = %.3g)", nearest, p.spacing);
      ++checked;
    }
  }
  if (checked == 0) return "no two-contact chords to test";
  return {};
}

std::string smallness(const Compactum& k, const kp::KPPartition& p) {
  double prev = kInf;
  for (double delta : {0.4, 0.2, 0.1, 0.05}) {
    double worst = 0;
    for (const auto& e : p.elements)
      for (const auto& g : e.chords) {
        if (!(g.diameter() < 1e3)) continue;
        bool near = true;
        for (const Point& q : g.sample(64)) near = near && k.distance(q) <= delta;
        if (near) worst = std::max(worst, g.diameter());
      }
    if (worst > prev) return fmt("max diameter rises to %.3g at delta %.3g", worst, delta);
    prev = worst;
  }
  return {};
}

std::string boundary_containment(const Compactum& k, const kp::KPPartition& p) {
  for (double delta : {0.3, 2.5}) {
    const auto z = kp::auxiliary_continuum(p, delta, 512);
    if (z.boundary_cells().empty()) return fmt("empty boundary at delta %.2g", delta);
    std::vector<CircularArc> small;
    for (const auto& e : p.elements)
      for (const auto& g : e.chords)
        if (g.diameter() <= delta) small.push_back(g);
    // Exterior disks through adjacent hull vertices, swept on a uniform grid.
    for (const auto& fam : p.families) {
      const Point m = 0.5 * (fam.p + fam.q);
      const double lo = std::isfinite(fam.s_min) ? fam.s_min : -50.0;
      for (int j = 0; j <= 4000; ++j) {
        const double s = lo + (50.0 - lo) * j / 4000;
        const Ball b = Ball::exterior(m + s * fam.inward, geom::dist(m + s * fam.inward, fam.p));
        const CircularArc g = geom::perpendicular_arc(b, fam.p, fam.q);
        if (g.diameter() <= delta) small.push_back(g);
      }
    }
    for (const auto& [i, j] : z.boundary_cells()) {
      const Point c = z.center(i, j);
      double d = k.distance(c);
      for (const auto& g : small) d = std::min(d, g.distance(c));
      if (d > 2 * z.cell()) return fmt("boundary cell %.3g from K and chords at delta %.2g", d, delta);
    }
  }
  return {};
}

Outcome property_suite() {
  Outcome o;
  struct Named {
    std::string name;
    Compactum k;
  };
  const std::vector<Named> compacta = {{"square", Compactum::unit_square()},
                                       {"segment", Compactum::segment({-1, 0}, {1, 0})},
                                       {"two points", Compactum::points({{-1, 0}, {1, 0}})},
                                       {"12-gon", random_polygon(7)}};
  for (const auto& [name, k] : compacta) {
    try {
      const auto p = kp::maximal_balls(k, {-3, 3, -3, 3});
      for (const auto& [what, msg] :
           std::vector<std::pair<const char*, std::string>>{{"disjointness", partition_disjointness(k, p, 11)},
                                                            {"center-in-hull", center_in_hull(k)},
                                                            {"chord continuity", chord_continuity(p)},
                                                            {"smallness", smallness(k, p)},
                                                            {"boundary containment", boundary_containment(k, p)}})
        o.require(msg.empty(), name + " " + what + ": " + msg);
    } catch (const Error& e) {
      o.require(false, name + ": " + e.what());
    }
  }
  if (o.pass) o.detail = "5 properties on square, segment, two points and 12-gon";
  return o;
}

Outcome outchannels() {
  Outcome o;
  const std::vector<Compactum> compacta = {Compactum::unit_square(), Compactum::segment({-1, 0}, {1, 0}),
                                           random_polygon(7)};
  const std::vector<std::string> fixed = {"0.5*z", "0.2 + 0.1i", "z^2", "0.5*conj(z)", "-0.5*z + 0.1"};
  int scans = 0;
  for (const auto& k : compacta) {
    const auto p = kp::maximal_balls(k, {-3, 3, -3, 3});
    for (const auto& text : fixed) {
      const auto cls = kp::classify_chords(PlaneMap::parse(text), p, 0.5);
      o.require(kp::outchannel_scan(p, cls).empty(), text + " has a chain");
      ++scans;
    }
  }
  const double w = 0.15;
  const Compactum fjord =
      Compactum::polygon({{-3, -3}, {3, -3}, {3, 3}, {w, 3}, {w, -2}, {-w, -2}, {-w, 3}, {-3, 3}});
  const auto p = kp::maximal_balls(fjord, {-4, 4, -4, 4});
  const auto cls = kp::classify_chords(PlaneMap::parse("-re(z) + (im(z) + 0.5)*i"), p, 0.35);
  const auto chains = kp::outchannel_scan(p, cls);
  o.require(!chains.empty() && chains[0].sign == -1, "no negative chain in the fjord");
  if (o.pass)
    o.detail = fmt("no chains in %g scans of fixed-point maps; fjord chain of %g chords, variation %g", scans,
                   static_cast<double>(chains[0].chords.size()), chains[0].total_variation);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 unit-square KP partition", unit_square},
      {"2 index oracles", index_oracles},
      {"3 index equals variation plus one", index_variation},
      {"4 junction and completion invariance", junction_and_completion},
      {"5 additivity", additivity},
      {"6 lollipop", lollipop},
      {"7 fixed point locator", locator},
      {"8 orientation classifier", orientation},
      {"9 property suite", property_suite},
      {"note outchannel scan", outchannels},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name.substr(0, name.find(' '))) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
