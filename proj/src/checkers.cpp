#include "planetopo/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

#include "planetopo/error.hpp"

namespace planetopo::checkers {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

[[noreturn]] void violation(const std::string& clause) { throw Error(ErrorKind::HypothesisViolation, clause); }

std::string fmt(Point p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

double diameter(const Window& w) { return w.diagonal(); }

bool in_hull(const curve::OrientedClosedCurve& s, Point p) {
  try {
    return curve::contains(s, p);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OnCurve) return true;
    throw;
  }
}

std::size_t nearest_partition_point(const curve::OrientedClosedCurve& s, const std::vector<double>& part, Point p,
                                    double tol, const char* name) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < part.size(); ++i) {
    const double d = geom::dist(s.at(part[i]), p);
    if (d < bd) bd = d, best = i;
  }
  if (bd > tol) violation(std::string(name) + " is not a partition point");
  return best;
}

// True when the vectors all lie in an open half-plane.
bool in_half_plane(std::span<const Point> vs) {
  std::vector<double> angles;
  for (Point v : vs) {
    if (geom::norm(v) == 0.0) return false;
    angles.push_back(std::atan2(v.y, v.x));
  }
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2 * kPi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return gap > kPi;
}

// Sampled search for fixed points of f in T(S): cells whose corner displacements
// do not fit in a half-plane get a boundary index.
std::optional<Point> fixed_point_in_hull(const PlaneMap& f, const curve::OrientedClosedCurve& s, int n) {
  Window w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (Point v : s.vertices()) {
    w.xmin = std::min(w.xmin, v.x), w.xmax = std::max(w.xmax, v.x);
    w.ymin = std::min(w.ymin, v.y), w.ymax = std::max(w.ymax, v.y);
  }
  const double hx = w.width() / n, hy = w.height() / n;
  std::vector<Point> d((n + 1) * (n + 1));
  std::vector<char> inside((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Point z{w.xmin + i * hx, w.ymin + j * hy};
      d[j * (n + 1) + i] = f(z) - z;
      inside[j * (n + 1) + i] = in_hull(s, z);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int c[4] = {j * (n + 1) + i, j * (n + 1) + i + 1, (j + 1) * (n + 1) + i, (j + 1) * (n + 1) + i + 1};
      if (!(inside[c[0]] || inside[c[1]] || inside[c[2]] || inside[c[3]])) continue;
      const Point vs[4] = {d[c[0]], d[c[1]], d[c[2]], d[c[3]]};
      if (in_half_plane(vs)) continue;
      const Window cell{w.xmin + i * hx, w.xmin + (i + 1) * hx, w.ymin + j * hy, w.ymin + (j + 1) * hy};
      try {
        if (box_index(f, cell) != 0) return cell.center();
      } catch (const Error&) {
        return cell.center();
      }
    }
  }
  return std::nullopt;
}

std::vector<Point> resample(const std::vector<Point>& poly, int n) {
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < poly.size(); ++i) cum.push_back(cum.back() + geom::dist(poly[i - 1], poly[i]));
  std::vector<Point> out;
  std::size_t seg = 1;
  for (int k = 0; k <= n; ++k) {
    const double at = cum.back() * k / n;
    while (seg + 1 < poly.size() && cum[seg] < at) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double u = len > 0 ? (at - cum[seg - 1]) / len : 0.0;
    out.push_back(poly[seg - 1] + u * (poly[seg] - poly[seg - 1]));
  }
  return out;
}

bool polylines_meet(const std::vector<Point>& a, const std::vector<Point>& b) {
  for (std::size_t i = 1; i < a.size(); ++i)
    for (std::size_t j = 1; j < b.size(); ++j)
      if (geom::segments_intersect(a[i - 1], a[i], b[j - 1], b[j])) return true;
  return false;
}

Point newton_polish(const PlaneMap& f, Point x, double tol) {
  auto d = [&](Point z) { return f(z) - z; };
  double r = geom::norm(d(x));
  for (int it = 0; it < 30 && r >= tol; ++it) {
    const double h = std::max(1e-8, 1e-6 * geom::norm(x));
    const Point d0 = d(x);
    const Point dx = (d(x + Point{h, 0}) - d0) / h;
    const Point dy = (d(x + Point{0, h}) - d0) / h;
    const double det = dx.x * dy.y - dy.x * dx.y;
    if (det == 0.0) break;
    const Point step{(d0.x * dy.y - dy.x * d0.y) / det, (dx.x * d0.y - d0.x * dx.y) / det};
    const Point next = x - step;
    const double rn = geom::norm(d(next));
    if (!(rn < r)) break;
    x = next, r = rn;
  }
  return x;
}

struct Cell {
  Window box;
  int index = 0;
};

// Four children with a possibly jittered cut; retries when a cut passes through
// a fixed point or the indices fail to add up.
std::vector<Cell> subdivide(const PlaneMap& f, const Cell& c, const LocateOptions& opts, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  const Window& w = c.box;
  for (int attempt = 0; attempt <= opts.max_jitter; ++attempt) {
    const double cx = w.center().x + (attempt ? u(rng) * w.width() : 0.0);
    const double cy = w.center().y + (attempt ? u(rng) * w.height() : 0.0);
    std::vector<Cell> kids{{{w.xmin, cx, w.ymin, cy}, 0},
                           {{cx, w.xmax, w.ymin, cy}, 0},
                           {{w.xmin, cx, cy, w.ymax}, 0},
                           {{cx, w.xmax, cy, w.ymax}, 0}};
    try {
      int sum = 0;
      for (Cell& k : kids) sum += k.index = box_index(f, k.box);
      if (sum == c.index) return kids;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FixedPointOnCurve && e.kind() != ErrorKind::CertificationFailed) throw;
    }
  }
  throw Error(ErrorKind::BoundaryFixedPoint, "subdivision of " + fmt({w.xmin, w.ymin}) + "-" + fmt({w.xmax, w.ymax}) +
                                                 " keeps meeting a fixed point");
}

// Descends into the first child of nonzero index until the box is small.
Point descend(const PlaneMap& f, Cell c, double tol, const LocateOptions& opts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  while (diameter(c.box) >= tol) {
    const auto kids = subdivide(f, c, opts, rng);
    auto it = std::find_if(kids.begin(), kids.end(), [](const Cell& k) { return k.index != 0; });
    if (it == kids.end()) throw Error(ErrorKind::CertificationFailed, "no child box carries the index");
    c = *it;
  }
  Point x = c.box.center();
  if (geom::dist(f(x), x) >= 10 * tol) x = newton_polish(f, x, tol);
  if (geom::dist(f(x), x) >= 10 * tol)
    throw Error(ErrorKind::CertificationFailed, "residual at " + fmt(x) + " exceeds 10 tol");
  return x;
}

}  // namespace

IndexVariationReport check_index_variation(const PlaneMap& f, const curve::OrientedClosedCurve& s,
                                           const std::vector<double>& partition,
                                           const variation::VariationOptions& opts) {
  IndexVariationReport r;
  r.index = winding::index(f, s);
  const auto rep = variation::variation_total(f, s, partition, opts);
  r.variation = rep.total;
  r.partition = rep.partition;
  r.per_arc = rep.per_arc;
  r.equal = r.index == r.variation + 1;
  return r;
}

LollipopReport check_lollipop(const PlaneMap& f, const curve::OrientedClosedCurve& s,
                              const std::vector<double>& partition, const std::vector<Point>& neck,
                              const LollipopOptions& opts) {
  if (neck.size() < 2) violation("I needs at least two points");
  if (partition.size() < 2) violation("partition needs a_0 and a_{n+1}");
  const double scale = std::sqrt(std::abs(s.signed_area())) + s.length() / 8;
  const double on_tol = 1e-6 * scale;

  std::vector<double> part(partition);
  std::sort(part.begin(), part.end());
  const std::size_t i0 = nearest_partition_point(s, part, neck.front(), on_tol, "a_0");
  const std::size_t i1 = nearest_partition_point(s, part, neck.back(), on_tol, "a_{n+1}");
  if (i0 == i1) violation("a_0 and a_{n+1} coincide");

  for (Point p : resample(neck, 512)) {
    if (geom::dist(p, neck.front()) <= on_tol || geom::dist(p, neck.back()) <= on_tol) continue;
    if (s.distance(p) <= geom::kTolerance || !in_hull(s, p)) violation("I leaves T(S) or meets S at " + fmt(p));
  }

  variation::VariationReport rep;
  try {
    rep = variation::variation_total(f, s, part, opts.variation);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidPartition) violation(std::string("partition: ") + e.what());
    throw;
  }

  int curve_index = 0;
  try {
    curve_index = winding::index(f, s);
  } catch (const winding::VanishingVector&) {
    violation("f has a fixed point on S");
  }
  if (curve_index != 0) violation("f has a fixed point in T(S): ind(f,S) = " + std::to_string(curve_index));
  if (auto p = fixed_point_in_hull(f, s, opts.grid)) violation("f has a fixed point in T(S) near " + fmt(*p));

  const Point a0 = s.at(part[i0]);
  const auto junction = variation::make_junction(s, a0, opts.variation.junction);
  std::vector<Point> image;
  for (Point p : resample(neck, opts.samples)) image.push_back(f(p));
  if (polylines_meet(image, neck)) violation("f(I) meets I");
  for (const auto& ray : junction.rays)
    if (polylines_meet(image, ray)) violation("f(I) meets J_{a_0}");

  auto loop = [&](double from, double to, bool reversed) {
    std::vector<Point> poly = curve::CurveArc(s, from, to).polyline(256);
    if (reversed) {
      for (std::size_t k = neck.size() - 1; k-- > 1;) poly.push_back(neck[k]);
    } else {
      for (std::size_t k = 1; k + 1 < neck.size(); ++k) poly.push_back(neck[k]);
    }
    return curve::OrientedClosedCurve::from_polygon(std::move(poly));
  };
  const auto r_loop = loop(part[i0], part[i1], true);
  const auto l_loop = loop(part[i1], part[i0], false);

  LollipopReport r;
  const Point fa = f(s.at(part[i1]));
  r.side_margin = std::min(r_loop.distance(fa), l_loop.distance(fa));
  if (r.side_margin < opts.guard) violation("f(a_{n+1}) is within the guard of the boundary of R");
  r.side = curve::contains(r_loop, fa) ? 'R' : 'L';
  if (r.side == 'L' && !curve::contains(l_loop, fa)) violation("f(a_{n+1}) lies outside T(S)");

  const std::size_t m = part.size();
  for (std::size_t k = 0; k < m; ++k) {
    r.partition.push_back(part[(i0 + k) % m]);
    r.per_arc.push_back(rep.per_arc[(i0 + k) % m]);
  }
  r.neck = (i1 + m - i0) % m;
  const std::size_t lo = r.side == 'R' ? 0 : r.neck, hi = r.side == 'R' ? r.neck : m;
  for (std::size_t k = lo; k < hi; ++k) {
    r.side_sum += r.per_arc[k];
    if (r.per_arc[k] < 0 && !r.negative_arc) r.negative_arc = k;
  }
  r.loop_index = winding::index(f, r.side == 'R' ? r_loop : l_loop);
  r.curve_index = curve_index;
  r.identity = r.side_sum + 1 == r.loop_index;
  r.corollary = r.loop_index != 0 || r.negative_arc.has_value();
  r.holds = r.identity && r.corollary;
  return r;
}

HullIndexReport check_hull_index(const PlaneMap& f, const curve::OrientedClosedCurve& s, int samples) {
  std::vector<double> ts = s.vertex_parameters();
  for (int k = 0; k < samples; ++k) ts.push_back(static_cast<double>(k) / samples);
  HullIndexReport r;
  r.min_displacement = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    const Point p = s.at(t), q = f(p);
    if (!in_hull(s, q)) violation("f(S) leaves T(S) at " + fmt(p));
    r.min_displacement = std::min(r.min_displacement, geom::dist(p, q));
  }
  r.index = winding::index(f, s);
  r.holds = r.index == 1;
  return r;
}

int box_index(const PlaneMap& f, const Window& box) {
  if (!(box.width() > 0 && box.height() > 0)) throw Error(ErrorKind::CertificationFailed, "degenerate box " + fmt({box.width(), box.height()}));
  const curve::OrientedClosedCurve edge(std::vector<Point>{
      {box.xmin, box.ymin}, {box.xmax, box.ymin}, {box.xmax, box.ymax}, {box.xmin, box.ymax}});
  winding::LiftOptions lo;
  lo.zero_threshold = std::min(1e-7, 1e-9 * diameter(box));
  lo.max_depth = 40;
  return winding::index(f, edge, lo);
}

FixedPointResult locate_fixed_point(const PlaneMap& f, const Window& box, double tol, const LocateOptions& opts) {
  FixedPointResult r;
  if (!opts.all) {
    const Point c = box.center();
    if (geom::dist(f(c), c) < tol) {
      r.points.push_back(c);
      r.residuals.push_back(geom::dist(f(c), c));
      r.leaf_index.push_back(0);
      return r;
    }
  }
  Cell root{box, 0};
  try {
    root.index = r.boundary_index = box_index(f, box);
  } catch (const winding::VanishingVector& e) {
    throw Error(ErrorKind::BoundaryFixedPoint, "fixed point on the box boundary near " + fmt(e.where.value_or(Point{})));
  }
  if (root.index == 0) {
    r.absent = true;
    r.certificate = "ind(f, boundary) = 0";
    return r;
  }
  auto record = [&](Point x, int k) {
    r.points.push_back(x);
    r.residuals.push_back(geom::dist(f(x), x));
    r.leaf_index.push_back(k);
  };
  if (!opts.all) {
    record(descend(f, root, tol, opts, opts.seed), root.index);
    return r;
  }

  std::mt19937_64 rng(opts.seed);
  std::vector<Cell> leaves, open{root};
  while (!open.empty()) {
    const Cell c = open.back();
    open.pop_back();
    if (std::abs(c.index) == 1 || diameter(c.box) < tol) {
      leaves.push_back(c);
      continue;
    }
    if (leaves.size() + open.size() >= opts.max_leaves)
      throw Error(ErrorKind::CertificationFailed, "too many boxes of nonzero index");
    for (const Cell& k : subdivide(f, c, opts, rng))
      if (k.index != 0) open.push_back(k);
  }
  std::sort(leaves.begin(), leaves.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.box.ymin, a.box.xmin) < std::tie(b.box.ymin, b.box.xmin);
  });
  std::vector<std::future<Point>> jobs;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    jobs.push_back(std::async(std::launch::async, descend, std::cref(f), leaves[i], tol, std::cref(opts),
                              opts.seed + i + 1));
  for (std::size_t i = 0; i < leaves.size(); ++i) record(jobs[i].get(), leaves[i].index);
  return r;
}

FixedPointResult check_period_two(const PlaneMap& f, const Window& box, double tol, const LocateOptions& opts) {
  FixedPointResult r = locate_fixed_point(f.compose(f), box, tol, opts);
  for (std::size_t i = 0; i < r.points.size(); ++i) r.residuals[i] = geom::dist(f(f(r.points[i])), r.points[i]);
  return r;
}

InvarianceReport check_junction_invariance(const PlaneMap& f, const curve::CurveArc& arc, int count) {
  InvarianceReport r;
  for (int k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.5 : 0.2 + 0.6 * k / (count - 1);
    variation::VariationOptions opts;
    opts.vertex_fraction = frac;
    opts.junction.rotation = 0.1 * (frac - 0.5);
    r.values.push_back(variation::variation_arc(f, arc, opts).value);
  }
  r.agree = std::all_of(r.values.begin(), r.values.end(), [&](int v) { return v == r.values.front(); });
  return r;
}

InvarianceReport check_completion_invariance(const PlaneMap& f,
                                             const std::vector<curve::OrientedClosedCurve>& completions,
                                             Point a, Point b, const variation::VariationOptions& opts) {
  InvarianceReport r;
  for (const auto& s : completions) {
    const curve::CurveArc arc(s, s.project(a), s.project(b));
    r.values.push_back(variation::variation_arc(f, arc, opts).value);
  }
  r.agree = !r.values.empty() &&
            std::all_of(r.values.begin(), r.values.end(), [&](int v) { return v == r.values.front(); });
  return r;
}

HomotopyReport check_homotopy(const PlaneMap& f, const PlaneMap& g, const curve::OrientedClosedCurve& s, int steps) {
  HomotopyReport r;
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const PlaneMap h = Complex(1 - t) * f + Complex(t) * g;
    try {
      r.indices.push_back(winding::index(h, s));
    } catch (const winding::VanishingVector&) {
      r.fixed_point_free = false;
    }
  }
  r.invariant = r.fixed_point_free &&
                std::all_of(r.indices.begin(), r.indices.end(), [&](int v) { return v == r.indices.front(); });
  return r;
}

PlaneMap fixed_point_free_extension(const curve::OrientedClosedCurve& s, const std::function<Point(double)>& image,
                                    double blend, const std::vector<double>& anchor, int table) {
  auto lift = std::make_shared<std::vector<Complex>>(table + 1);
  double prev = 0.0;
  for (int k = 0; k <= table; ++k) {
    const double t = curve::wrap01(static_cast<double>(k) / table);
    const Point d = image(t) - s.at(t);
    if (geom::norm(d) == 0.0) violation("image has a fixed point on S at " + fmt(s.at(t)));
    double a = std::atan2(d.y, d.x);
    if (k) {
      a = prev + std::remainder(a - prev, 2 * kPi);
      if (std::abs(a - prev) > kPi / 2) violation("image moves too fast for the lift table");
    }
    prev = a;
    (*lift)[k] = {std::log(geom::norm(d)), a};
  }
  const double turns = ((*lift)[table].imag() - (*lift)[0].imag()) / (2 * kPi);
  if (std::abs(turns) > 1e-6) violation("displacement winds " + std::to_string(std::lround(turns)) + " times");

  auto at = [lift, table](double t) {
    const double x = curve::wrap01(t) * table;
    const int k = std::min(static_cast<int>(x), table - 1);
    return (*lift)[k] + (x - k) * ((*lift)[k + 1] - (*lift)[k]);
  };
  Complex base;
  if (anchor.empty()) {
    for (int k = 0; k < table; ++k) base += (*lift)[k];
    base /= static_cast<double>(table);
  } else {
    const Complex ref = at(anchor.front());
    for (double t : anchor) {
      const Complex v = at(t);
      base += Complex(v.real(), ref.imag() + std::remainder(v.imag() - ref.imag(), 2 * kPi));
    }
    base /= static_cast<double>(anchor.size());
  }
  auto curve = std::make_shared<curve::OrientedClosedCurve>(s);
  return PlaneMap::custom(
      [curve, at, base, blend](Complex z) {
        const Point p(z);
        const double w = std::clamp(1.0 - curve->distance(p) / blend, 0.0, 1.0);
        return z + std::exp(w * at(curve->project(p)) + (1.0 - w) * base);
      },
      "extension");
}

}  // namespace planetopo::checkers
