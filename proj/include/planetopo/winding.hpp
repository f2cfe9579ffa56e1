#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "planetopo/curve.hpp"
#include "planetopo/error.hpp"
#include "planetopo/geom.hpp"

namespace planetopo::maps {
class PlaneMap;
}

namespace planetopo::winding {

using geom::Point;

/// Raised with kind FixedPointOnCurve when the tracked vector nearly vanishes.
class VanishingVector : public Error {
public:
  VanishingVector(double param, double modulus, std::optional<Point> where = std::nullopt);
  double param;
  double modulus;
  /// Curve point where it happened, when the vector came from a curve.
  std::optional<Point> where;
};

struct LiftOptions {
  /// Below this modulus (after refinement near minima) the vector counts as zero.
  double zero_threshold = 1e-7;
  int max_depth = 24;
  int min_samples = 64;
  /// Bound on |d(s) - d(t)| / |s - t| over the parameter interval. When set,
  /// every step is certified: rate * step < |d| keeps the vector in a half-plane.
  std::optional<double> rate;
};

/// Continuous lift of the direction of a vector path, in turns.
struct ArgumentLift {
  std::vector<double> params;
  std::vector<double> turns;
  /// True when the steps were certified by a rate bound rather than heuristically.
  bool certified = false;
  double min_modulus = 0.0;
  double min_param = 0.0;

  double increment() const { return turns.back() - turns.front(); }
  /// Rounded increment; throws CertificationFailed if it is not within 1e-6
  /// of an integer.
  int winding() const;
};

using VectorPath = std::function<Point(double)>;

/// Lift of the direction of d over [t0, t1]. `breaks` are extra parameters to
/// sample (vertices of the underlying polyline). Throws VanishingVector and
/// CertificationFailed.
ArgumentLift lift_path(const VectorPath& d, double t0, double t1, std::span<const double> breaks,
                       const LiftOptions& opts = {});
/// As lift_path over [0,1] for a closed loop; asserts integer increment.
ArgumentLift lift_closed(const VectorPath& d, std::span<const double> breaks, const LiftOptions& opts = {});

/// Lift of the displacement f(z) - z along S.
ArgumentLift displacement_lift(const maps::PlaneMap& f, const curve::OrientedClosedCurve& s,
                               const LiftOptions& opts = {});
/// ind(f, S): winding number of the displacement along S.
int index(const maps::PlaneMap& f, const curve::OrientedClosedCurve& s, const LiftOptions& opts = {});
/// Lift increment of the displacement over a counterclockwise arc, in turns.
double fractional_index(const maps::PlaneMap& f, const curve::CurveArc& arc, const LiftOptions& opts = {});

/// Winding number of the closed polyline g about w. Throws OnPath.
int winding_number(std::span<const Point> g, Point w, double tol = geom::kTolerance);

}  // namespace planetopo::winding
