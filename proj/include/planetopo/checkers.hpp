#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "planetopo/curve.hpp"
#include "planetopo/geom.hpp"
#include "planetopo/maps.hpp"
#include "planetopo/variation.hpp"
#include "planetopo/winding.hpp"

namespace planetopo::checkers {

using geom::Point;
using geom::Window;
using maps::PlaneMap;

struct IndexVariationReport {
  int index = 0;
  int variation = 0;
  bool equal = false;
  std::vector<double> partition;
  std::vector<int> per_arc;
};

/// ind(f,S) against var(f,S) + 1 over the given partition.
IndexVariationReport check_index_variation(const PlaneMap& f, const curve::OrientedClosedCurve& s,
                                           const std::vector<double>& partition,
                                           const variation::VariationOptions& opts = {});

struct LollipopOptions {
  variation::VariationOptions variation;
  /// Minimum distance of f(a_{n+1}) from the boundary of R for the side decision.
  double guard = 1e-6;
  /// Grid points per side for the sampled fixed-point search in T(S).
  int grid = 160;
  /// Samples of f along I for the separation test.
  int samples = 4096;
};

struct LollipopReport {
  /// 'R' when f(a_{n+1}) lies in T([a_0,a_{n+1}] ∪ I), 'L' otherwise.
  char side = 'R';
  /// Partition rotated to start at a_0; neck is the position of a_{n+1}.
  std::vector<double> partition;
  std::size_t neck = 0;
  std::vector<int> per_arc;
  int side_sum = 0;
  int loop_index = 0;
  int curve_index = 0;
  bool identity = false;
  /// An arc on the decided side with negative variation, when one exists.
  std::optional<std::size_t> negative_arc;
  bool corollary = false;
  bool holds = false;
  double side_margin = 0.0;
};

/// Verifies the hypotheses (throws HypothesisViolation naming the clause), picks
/// the side of f(a_{n+1}) and compares the side sum of variations plus one with
/// the index of f on the loop formed by I and that side of S. `neck` runs
/// inside T(S) from a_0 to a_{n+1}, both of which must be partition points.
LollipopReport check_lollipop(const PlaneMap& f, const curve::OrientedClosedCurve& s,
                              const std::vector<double>& partition, const std::vector<Point>& neck,
                              const LollipopOptions& opts = {});

struct HullIndexReport {
  int index = 0;
  double min_displacement = 0.0;
  bool holds = false;
};

/// ind(f,S) = 1 when f(S) ⊆ T(S). Throws HypothesisViolation when a sampled
/// image point leaves T(S).
HullIndexReport check_hull_index(const PlaneMap& f, const curve::OrientedClosedCurve& s, int samples = 2048);

struct LocateOptions {
  int max_jitter = 8;
  std::uint64_t seed = 1;
  /// Find every isolated fixed point of nonzero index instead of the first one.
  bool all = false;
  std::size_t max_leaves = 256;
};

struct FixedPointResult {
  std::vector<Point> points;
  std::vector<double> residuals;
  /// Boundary index of the leaf each point was refined from.
  std::vector<int> leaf_index;
  int boundary_index = 0;
  bool absent = false;
  /// Reason for absent, e.g. the certified zero index on the box boundary.
  std::string certificate;
};

/// Index of f on the counterclockwise boundary of a box.
int box_index(const PlaneMap& f, const Window& box);

/// Quadtree search on boxes of nonzero boundary index down to diameter `tol`.
/// Each returned point has |f(x) - x| < 10 tol. Boundary index 0 gives an
/// absent result, which says nothing about fixed points inside.
FixedPointResult locate_fixed_point(const PlaneMap& f, const Window& box, double tol,
                                    const LocateOptions& opts = {});

/// A point of period at most two, located as a fixed point of f∘f.
FixedPointResult check_period_two(const PlaneMap& f, const Window& box, double tol,
                                  const LocateOptions& opts = {});

struct InvarianceReport {
  std::vector<int> values;
  bool agree = false;
};

/// var(f,A,S) from `count` junctions with different vertices and rotations.
InvarianceReport check_junction_invariance(const PlaneMap& f, const curve::CurveArc& arc, int count = 5);

/// var of the arc a..b computed as a subarc of each completing curve. The
/// endpoints must lie on every curve, which must all contain the arc a..b.
InvarianceReport check_completion_invariance(const PlaneMap& f,
                                             const std::vector<curve::OrientedClosedCurve>& completions,
                                             Point a, Point b, const variation::VariationOptions& opts = {});

struct HomotopyReport {
  std::vector<int> indices;
  bool fixed_point_free = true;
  bool invariant = false;
};

/// ind((1-t) f + t g, S) at `steps` + 1 values of t.
HomotopyReport check_homotopy(const PlaneMap& f, const PlaneMap& g, const curve::OrientedClosedCurve& s,
                              int steps = 16);

/// Map equal to `image` on S whose displacement is exp of a lift of
/// log(image - id) blended into a constant within `blend` of S. It has no
/// fixed points anywhere. Throws HypothesisViolation unless the displacement
/// along S has winding number zero. `anchor` picks the constant: the blend of
/// the lifted values at the listed curve parameters (all of them when empty).
PlaneMap fixed_point_free_extension(const curve::OrientedClosedCurve& s, const std::function<Point(double)>& image,
                                    double blend, const std::vector<double>& anchor = {}, int table = 8192);

}  // namespace planetopo::checkers
