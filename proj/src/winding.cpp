#include "planetopo/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "planetopo/maps.hpp"

namespace planetopo::winding {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe(double param, double modulus, const std::optional<Point>& where) {
  std::ostringstream os;
  os << "vector nearly vanishes (|d| = " << modulus << ") at t = " << param;
  if (where) os << ", (" << where->x << ", " << where->y << ")";
  return os.str();
}

struct Sample {
  double t;
  Point d;
  double r;
};

class Lifter {
public:
  Lifter(const VectorPath& d, const LiftOptions& opts) : d_(d), opts_(opts) {}

  Sample eval(double t) const {
    const Point v = d_(t);
    return {t, v, geom::norm(v)};
  }

  // Appends samples in (a.t, b.t] to out.
  void refine(const Sample& a, const Sample& b, int depth, std::vector<Sample>& out) {
    if (a.r < opts_.zero_threshold) throw VanishingVector(a.t, a.r);
    if (b.r < opts_.zero_threshold) throw VanishingVector(b.t, b.r);
    bool ok;
    if (opts_.rate) {
      ok = *opts_.rate * (b.t - a.t) < std::max(a.r, b.r);
    } else {
      // Heuristic rule: a quarter turn leaves a margin below the half-plane limit.
      const double step = std::abs(std::atan2(geom::cross(a.d, b.d), geom::dot(a.d, b.d)));
      ok = step < std::numbers::pi / 4;
    }
    if (ok) {
      out.push_back(b);
      return;
    }
    if (depth >= opts_.max_depth)
      throw Error(ErrorKind::CertificationFailed, "lift refinement exhausted at t = " + std::to_string(a.t));
    const Sample m = eval(0.5 * (a.t + b.t));
    refine(a, m, depth + 1, out);
    refine(m, b, depth + 1, out);
  }

  // Golden-section search for the minimum modulus near t.
  Sample polish(double lo, double hi) const {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    Sample s1 = eval(x1), s2 = eval(x2);
    while (hi - lo > 1e-10) {
      if (s1.r < s2.r) {
        hi = x2;
        x2 = x1;
        s2 = s1;
        x1 = hi - phi * (hi - lo);
        s1 = eval(x1);
      } else {
        lo = x1;
        x1 = x2;
        s1 = s2;
        x2 = lo + phi * (hi - lo);
        s2 = eval(x2);
      }
    }
    return s1.r < s2.r ? s1 : s2;
  }

private:
  const VectorPath& d_;
  const LiftOptions& opts_;
};

}  // namespace

VanishingVector::VanishingVector(double t, double m, std::optional<Point> w)
    : Error(ErrorKind::FixedPointOnCurve, describe(t, m, w)), param(t), modulus(m), where(w) {}

int ArgumentLift::winding() const {
  const double inc = increment();
  const double r = std::round(inc);
  if (std::abs(inc - r) >= 1e-6)
    throw Error(ErrorKind::CertificationFailed, "lift increment " + std::to_string(inc) + " is not an integer");
  return static_cast<int>(r);
}

ArgumentLift lift_path(const VectorPath& d, double t0, double t1, std::span<const double> breaks,
                       const LiftOptions& opts) {
  std::vector<double> ts;
  for (int k = 0; k <= opts.min_samples; ++k) ts.push_back(t0 + (t1 - t0) * k / opts.min_samples);
  for (double b : breaks)
    if (b > t0 && b < t1) ts.push_back(b);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  Lifter lifter(d, opts);
  std::vector<Sample> samples{lifter.eval(ts[0])};
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const Sample prev = samples.back();
    lifter.refine(prev, lifter.eval(ts[k]), 0, samples);
  }

  ArgumentLift lift;
  lift.certified = opts.rate.has_value();
  std::size_t imin = 0;
  for (std::size_t k = 1; k < samples.size(); ++k)
    if (samples[k].r < samples[imin].r) imin = k;
  const double lo = samples[imin > 0 ? imin - 1 : 0].t;
  const double hi = samples[std::min(imin + 1, samples.size() - 1)].t;
  Sample best = samples[imin];
  if (hi > lo) {
    const Sample p = lifter.polish(lo, hi);
    if (p.r < best.r) best = p;
  }
  if (best.r < opts.zero_threshold) throw VanishingVector(best.t, best.r);
  lift.min_modulus = best.r;
  lift.min_param = best.t;

  lift.params.reserve(samples.size());
  lift.turns.reserve(samples.size());
  double acc = std::atan2(samples[0].d.y, samples[0].d.x) / kTwoPi;
  lift.params.push_back(samples[0].t);
  lift.turns.push_back(acc);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const Point a = samples[k - 1].d, b = samples[k].d;
    acc += std::atan2(geom::cross(a, b), geom::dot(a, b)) / kTwoPi;
    lift.params.push_back(samples[k].t);
    lift.turns.push_back(acc);
  }
  return lift;
}

ArgumentLift lift_closed(const VectorPath& d, std::span<const double> breaks, const LiftOptions& opts) {
  ArgumentLift lift = lift_path(d, 0.0, 1.0, breaks, opts);
  (void)lift.winding();
  return lift;
}

ArgumentLift displacement_lift(const maps::PlaneMap& f, const curve::OrientedClosedCurve& s,
                               const LiftOptions& opts) {
  LiftOptions o = opts;
  if (!o.rate && f.lipschitz()) o.rate = (*f.lipschitz() + 1.0) * s.length();
  try {
    return lift_closed([&](double t) {
      const Point z = s.at(t);
      return f(z) - z;
    }, s.vertex_parameters(), o);
  } catch (const VanishingVector& e) {
    throw VanishingVector(e.param, e.modulus, s.at(e.param));
  }
}

int index(const maps::PlaneMap& f, const curve::OrientedClosedCurve& s, const LiftOptions& opts) {
  return displacement_lift(f, s, opts).winding();
}

double fractional_index(const maps::PlaneMap& f, const curve::CurveArc& arc, const LiftOptions& opts) {
  const curve::OrientedClosedCurve& s = *arc.parent;
  LiftOptions o = opts;
  if (!o.rate && f.lipschitz()) o.rate = (*f.lipschitz() + 1.0) * s.length() * arc.span();
  const std::vector<double> breaks = arc.interior_breaks();
  auto d = [&](double u) {
    const Point z = u <= 0.0 ? arc.start() : (u >= 1.0 ? arc.end() : arc.at(u));
    return f(z) - z;
  };
  ArgumentLift lift;
  try {
    lift = lift_path(d, 0.0, 1.0, breaks, o);
  } catch (const VanishingVector& e) {
    throw VanishingVector(arc.param(e.param), e.modulus, arc.at(e.param));
  }
  if (arc.full) return static_cast<double>(lift.winding());
  return lift.increment();
}

int winding_number(std::span<const Point> g, Point w, double tol) {
  const std::size_t n = g.size();
  if (n == 0) throw Error(ErrorKind::EmptyInput, "winding number of an empty path");
  for (std::size_t k = 0; k < n; ++k)
    if (geom::dist_point_segment(w, g[k], g[(k + 1) % n]) <= tol)
      throw Error(ErrorKind::OnPath, "point lies on the path");
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = g[k] - w, b = g[(k + 1) % n] - w;
    total += std::atan2(geom::cross(a, b), geom::dot(a, b));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace planetopo::winding
