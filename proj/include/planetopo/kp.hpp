#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "planetopo/curve.hpp"
#include "planetopo/geom.hpp"
#include "planetopo/variation.hpp"

namespace planetopo::maps {
class PlaneMap;
}

namespace planetopo::kp {

using geom::Ball;
using geom::CircularArc;
using geom::Point;

/// Connected piece of ∂B ∩ K, as an interval of boundary coordinates.
struct ContactRun {
  double u0 = 0.0, u1 = 0.0;
  Point p0, p1;
  bool degenerate() const { return u1 == u0; }
};

/// A maximal ball with its contact set and the boundary of its hyperbolic hull.
struct KPElement {
  Ball ball;
  /// Runs in increasing boundary coordinate (circular for round balls).
  std::vector<ContactRun> runs;
  /// Run endpoints in the same order.
  std::vector<Point> contacts;
  std::vector<CircularArc> chords;
  /// For each chord, the side (as CircularArc::side) holding the hull; 0 when
  /// the hull is the chord itself.
  std::vector<int> hull_side;
  bool is_gap = false;
  std::string source;

  bool nonempty_interior() const;
  /// Closed hull membership with tolerance.
  bool hull_contains(Point p, double tol = 1e-9) const;
  bool hull_interior_contains(Point p, double tol = 1e-9) const;
};

/// Element for ball b if b is empty (up to tol) and maximal: at least two
/// contact runs, or one run of positive length.
std::optional<KPElement> make_element(const curve::Compactum& k, const Ball& b, double tol,
                                      std::string source = "given");

struct KPOptions {
  /// Boundary sample spacing; 0 means window width / 512.
  double spacing = 0.0;
  /// Members sampled from each two-contact family of exterior disks.
  int family_samples = 3;
  /// Cells across the window for the complement connectivity check.
  int raster_cells = 512;
};

/// Exterior disks through adjacent hull vertices p and q, centered at
/// (p+q)/2 + s*inward for s >= s_min.
struct ExteriorFamily {
  Point p, q, inward;
  double s_min = 0.0;
};

struct KPPartition {
  curve::Compactum k;
  geom::Window window;
  double spacing = 0.0;
  std::vector<Point> samples;
  std::vector<KPElement> elements;
  /// Listed with family_samples members each in elements.
  std::vector<ExteriorFamily> families;
  std::size_t voronoi_sites = 0;

  std::vector<std::size_t> with_interior() const;
};

/// Maximal balls of the complement of K: interior empty disks from the
/// Voronoi diagram of boundary samples, half-planes on convex hull edges,
/// the exterior of the smallest enclosing disk, and sampled two-contact
/// exterior disks through adjacent hull vertices.
/// Throws EmptyInput and DisconnectedComplement.
KPPartition maximal_balls(const curve::Compactum& k, const geom::Window& window, const KPOptions& opts = {});

struct Hull {
  std::vector<CircularArc> chords;
  /// Closed polygon of the hull region; empty for hulls containing infinity
  /// or with empty interior.
  std::vector<Point> polygon;
};
Hull hull_of(const KPElement& e, int samples_per_arc = 64);

/// Maximal ball whose hull contains p, by inversion at p and the smallest
/// enclosing disk of the inverted samples.
KPElement locate(const KPPartition& p, Point probe);

struct ChordFamily {
  enum class Kind { Single, Disk };
  Kind kind = Kind::Single;
  /// The chord (Single) or the two extreme chords (Disk).
  std::vector<CircularArc> chords;
  /// Every ball through a and b is admissible; the union covers the whole complement.
  bool whole_family = false;
  /// Admissible fraction of the circle of balls through a and b.
  double measure = 0.0;
};

/// C(a,b): union of all KP chords with endpoints a and b.
/// Throws DegenerateChord and NoChord.
ChordFamily chords_between(const KPPartition& p, Point a, Point b);

struct SignedChord {
  CircularArc chord;
  /// Chord polyline oriented with the shadow on the left.
  std::vector<Point> path;
  int variation = 0;
  double diameter = 0.0;
  std::size_t element = 0;
  /// Sorted cell indices of the shadow in the classification raster.
  std::vector<int> shadow;
  std::string junction;
};

struct ClassifyOptions {
  /// Cells across the window; 0 means 512.
  int raster_cells = 0;
  std::size_t max_chords = 400;
  double tolerance = 1e-9;
  variation::VariationOptions variation;
};

struct Classification {
  double delta = 0.0;
  std::vector<SignedChord> chords;
  /// Chords left out, with the reason.
  std::vector<std::string> excluded;
  curve::Region hull;

  std::vector<std::size_t> plus() const;   // variation >= 0
  std::vector<std::size_t> minus() const;  // variation <= 0
  std::vector<std::size_t> zero() const;
};

/// Variation of f on each chord of diameter at most delta, with respect to T(K).
Classification classify_chords(const maps::PlaneMap& f, const KPPartition& p, double delta,
                               const ClassifyOptions& opts = {});

enum class Sign { All, Plus, Minus };

/// Raster T(K ∪ chords of diameter <= delta), optionally restricted by sign.
curve::Region auxiliary_continuum(const KPPartition& p, double delta, int raster_cells = 512,
                                  const Classification* cls = nullptr, Sign sign = Sign::All);

struct Chain {
  /// Indices into Classification::chords, outermost first.
  std::vector<std::size_t> chords;
  int sign = 0;
  int total_variation = 0;
};

/// Chains of at least two same-sign nonzero-variation chords with strictly
/// nested shadows and non-increasing diameters. Nesting stands in for
/// essential crossing, so the result is a heuristic.
std::vector<Chain> outchannel_scan(const KPPartition& p, const Classification& cls);

}  // namespace planetopo::kp
