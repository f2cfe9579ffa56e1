#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planetopo/geom.hpp"

namespace planetopo::curve {
class OrientedClosedCurve;
}

namespace planetopo::maps {

using Complex = std::complex<double>;
using geom::Point;

/// A map of the plane given as an expression tree over z.
///
/// Text grammar (whitespace ignored):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' integer)?
///     primary := number ['i'] | 'i' | 'z' | '(' expr ')'
///              | name '[' expr (',' expr)* ']'     constant arguments
///              | name '(' expr (',' expr)* ')'     map arguments
///              | name                              applied to z
///
/// Names: poly[c0, c1, ...] is c0 + c1 z + c2 z^2 + ...; affine[a, b] is
/// a z + b; translate[b] is z + b; pow[n] is z^n; conj, fold (|Re z| + i Im z),
/// re, im, abs and exp may be used bare or applied to an expression;
/// compose(f, g, ...) is f(g(...)).
class PlaneMap {
public:
  struct Node;

  PlaneMap();  // identity

  static PlaneMap identity();
  static PlaneMap constant(Complex c);
  /// Coefficients in ascending order of degree.
  static PlaneMap polynomial(std::vector<Complex> coefficients);
  static PlaneMap affine(Complex alpha, Complex beta);
  static PlaneMap translation(Complex beta);
  static PlaneMap conjugation();
  static PlaneMap fold();
  static PlaneMap power(int n);
  static PlaneMap custom(std::function<Complex(Complex)> fn, std::string name);
  /// Throws Error(ParseError) with the column of the offending token.
  static PlaneMap parse(std::string_view text);

  /// this ∘ inner
  PlaneMap compose(const PlaneMap& inner) const;
  PlaneMap conj() const;

  friend PlaneMap operator+(const PlaneMap& a, const PlaneMap& b);
  friend PlaneMap operator-(const PlaneMap& a, const PlaneMap& b);
  friend PlaneMap operator*(const PlaneMap& a, const PlaneMap& b);
  friend PlaneMap operator*(Complex s, const PlaneMap& a);

  PlaneMap with_window(const geom::Window& w) const;
  /// Declares a Lipschitz bound over the window. Use validate_lipschitz() to
  /// check it against random pairs.
  PlaneMap with_lipschitz(double bound) const;

  Complex operator()(Complex z) const;
  Point operator()(Point z) const { return Point((*this)(z.complex())); }
  /// Evaluation with the declared-window check (OutsideWindow).
  Point evaluate(Point z) const;

  std::optional<double> lipschitz() const { return lipschitz_; }
  const std::optional<geom::Window>& window() const { return window_; }
  /// True when the declared bound holds on `pairs` random pairs in the window.
  bool validate_lipschitz(std::uint64_t seed = 1, int pairs = 1000) const;

  std::string text() const;
  /// True when the expression does not depend on z.
  bool is_constant() const;

private:
  explicit PlaneMap(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  std::shared_ptr<const Node> root_;
  std::optional<geom::Window> window_;
  std::optional<double> lipschitz_;
};

/// Degree of f_p: x -> (f(x) - f(p)) / |f(x) - f(p)| on S, i.e. the winding
/// number of f(S) about f(p). Throws ValueHit when f(p) comes within 1e-7 of
/// the sampled image of S.
int degree_at(const PlaneMap& f, const curve::OrientedClosedCurve& s, Point p);

enum class Orientation { Positive, Negative, Mixed, Inconclusive };
std::string_view to_string(Orientation o);

struct OrientationEvidence {
  Orientation verdict = Orientation::Inconclusive;
  int positive = 0;
  int negative = 0;
  int zero = 0;
  int skipped = 0;
  std::vector<int> degrees;  // one per completed trial, in trial order
  std::vector<std::string> diagnostics;
};

/// Samples random circles and perturbed polygons in the window together with
/// interior points, and reports the sign profile of degree(f_p).
OrientationEvidence orientation_class(const PlaneMap& f, int trials, const geom::Window& window,
                                      std::uint64_t seed = 7);

}  // namespace planetopo::maps
