#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "planetopo/curve.hpp"
#include "planetopo/geom.hpp"

namespace planetopo::maps {
class PlaneMap;
}

namespace planetopo::variation {

using geom::Point;

enum class Ray { Plus = 0, In = 1, Minus = 2 };
char label(Ray r);

/// Vertex v with three disjoint polyline rays running from v to the window
/// boundary. Counterclockwise around v the rays come in the order J+, Ji, J-,
/// as for the standard junction (rays at angles 0, pi/2, pi).
struct Junction {
  Point v;
  std::array<std::vector<Point>, 3> rays;
  geom::Window window;
  /// "straight" for a fan of segments, "traced" for rays following an escape path.
  std::string construction;

  const std::vector<Point>& ray(Ray r) const { return rays[static_cast<int>(r)]; }
  /// Rays continued radially from the window center out to distance `far`.
  std::array<std::vector<Point>, 3> extended(double far) const;
  /// Copy with every ray rotated about v.
  Junction rotated(double angle) const;
};

/// What junction rays must avoid (apart from the vertex itself).
struct Obstacle {
  std::vector<std::pair<Point, Point>> segments;
  /// Extra raster cells to avoid, e.g. a topological hull.
  std::optional<curve::Region> blocked;
  geom::Window window;
};

struct JunctionOptions {
  /// Window the rays escape to; defaults to the obstacle bounds padded by half their size.
  std::optional<geom::Window> window;
  /// Cells per unit for the traced fallback.
  double resolution = 128;
  /// Extra rotation of the fan about v (radians), kept inside the free wedge.
  double rotation = 0.0;
  /// Fan half-angles to try, largest first; empty means the default ladder.
  std::vector<double> spreads;
  /// Skip the straight fan and trace escape paths.
  bool force_traced = false;
  /// Preferred escape direction at v; overrides the one inferred from the free cells.
  std::optional<Point> outward;
};

/// Junction at v avoiding the obstacle; `outward` points into the free side at v.
/// Throws NoEscape.
Junction make_junction(const Obstacle& obstacle, Point v, Point outward, const JunctionOptions& opts = {});
/// Junction with J ∩ S = {v} for v on S.
Junction make_junction(const curve::OrientedClosedCurve& s, Point v, const JunctionOptions& opts = {});
/// Junction for a point v on the boundary of the raster set x, escaping in
/// the unbounded complementary component.
Junction make_junction(const curve::Region& x, const curve::Compactum& generators, Point v,
                       const JunctionOptions& opts = {});

/// Obstacle made of the edges of S.
Obstacle curve_obstacle(const curve::OrientedClosedCurve& s, const geom::Window& window);

struct JunctionCheck {
  bool disjoint = true;       // rays meet only at v
  bool avoids_obstacle = true;
  bool escapes = true;        // every ray ends on the window boundary
  /// d(J+ \ W, Ji \ W) for balls W of three shrinking radii.
  std::array<double, 3> separation{};
  bool ok() const;
};
JunctionCheck check_junction(const Junction& j, const Obstacle& obstacle);

struct Crossing {
  double u = 0.0;  // arc fraction in [0,1]
  Ray ray = Ray::Plus;
  Point where;
};

struct CrossingSequence {
  std::vector<Crossing> events;
  /// Junction actually used (after tangency perturbation).
  Junction junction;
  int retries = 0;
  std::vector<std::string> diagnostics;
};

struct CrossingOptions {
  int max_retries = 8;
  /// Crossings at a smaller angle than this count as tangential.
  double tangency_angle = 1e-4;
  std::uint64_t seed = 1;
  double tolerance = geom::kTolerance;
};

/// A path parametrized over [0,1], e.g. a curve arc or a chord.
struct ArcPath {
  std::function<Point(double)> at;
  /// Parameters of polyline vertices, sampled exactly.
  std::vector<double> breaks;
};
ArcPath path_of(const curve::CurveArc& arc);
/// Path along a polyline, parametrized by arc length.
ArcPath polyline_path(std::vector<Point> pts);

/// Arc fractions sampling f along the arc finely enough that the image
/// polyline follows f(A): steps turn less than pi/4 about `center` and are
/// shorter than max_step.
std::vector<double> image_samples(const maps::PlaneMap& f, const ArcPath& arc, Point center, double max_step);

/// Crossings of f(A) with the junction, in arc order. Tangential crossings
/// trigger a small rotation of the junction about v (at most max_retries).
/// Throws EndpointOnJunction and UnresolvedTangency.
CrossingSequence crossings(const maps::PlaneMap& f, const ArcPath& arc, const Junction& j,
                           const CrossingOptions& opts = {});
/// As above with a junction factory; attempt k > 0 asks for a perturbed junction.
CrossingSequence crossings(const maps::PlaneMap& f, const ArcPath& arc, const std::function<Junction(int)>& factory,
                           const CrossingOptions& opts = {});

/// +1 per J+ immediately followed by Ji, -1 per Ji immediately followed by J+.
int count_variation(const std::vector<Crossing>& events);

/// Sampled check of f(a), f(b) in T(S) and f(A) ∩ A = ∅. Returns an empty
/// string when the arc is admissible, else the violated condition.
std::string arc_violation(const maps::PlaneMap& f, const curve::CurveArc& arc, double tol = geom::kTolerance);

struct ArcVariation {
  int value = 0;
  CrossingSequence crossings;
};

struct VariationOptions {
  JunctionOptions junction;
  CrossingOptions crossing;
  /// Arc fraction of the junction vertex.
  double vertex_fraction = 0.5;
};

/// var(f, A, S). Throws InvalidPartition when the arc is not admissible.
ArcVariation variation_arc(const maps::PlaneMap& f, const curve::CurveArc& arc, const VariationOptions& opts = {});

/// Variation of f on a crosscut-like path whose junction must avoid `obstacle`.
/// `outward` points away from the shadow at the junction vertex (the right side
/// of the path direction). Separation hypotheses are the caller's.
ArcVariation variation_path(const maps::PlaneMap& f, const ArcPath& path, const Obstacle& obstacle,
                            const VariationOptions& opts = {});

struct VariationReport {
  std::vector<double> partition;
  std::vector<int> per_arc;
  int total = 0;
  std::vector<Point> junction_vertices;
  std::vector<std::string> junction_kinds;
  std::vector<std::string> diagnostics;
};

/// var(f, S) over the partition a_0 < ... < a_n (curve parameters). Throws
/// InvalidPartition naming the violated condition and the arc index.
VariationReport variation_total(const maps::PlaneMap& f, const curve::OrientedClosedCurve& s,
                                std::vector<double> partition, const VariationOptions& opts = {});

struct PartitionOptions {
  /// Candidate points must lie within this distance of X.
  double contact_tolerance = 1e-7;
  std::size_t max_arcs = 10000;
  int candidate_samples = 1024;
  /// Parameters that must appear in the partition.
  std::vector<double> required;
};

/// Greedy admissible partition of S at points of S ∩ X whose images lie in
/// T(S). X defaults to S itself. Throws NoValidPartition.
std::vector<double> auto_partition(const maps::PlaneMap& f, const curve::OrientedClosedCurve& s,
                                   const curve::Compactum* x = nullptr, const PartitionOptions& opts = {});

}  // namespace planetopo::variation
