#include "planetopo/maps.hpp"

#include <cctype>
#include <cstdio>
#include <random>
#include <sstream>

#include "planetopo/curve.hpp"
#include "planetopo/error.hpp"
#include "planetopo/winding.hpp"

namespace planetopo::maps {

struct PlaneMap::Node {
  enum class Op { Z, Const, Poly, Conj, Fold, Re, Im, Abs, Exp, Add, Sub, Mul, Div, Neg, Pow, Compose, Custom };

  Op op = Op::Z;
  Complex value;
  std::vector<Complex> coeffs;
  int n = 0;
  std::vector<std::shared_ptr<const Node>> kids;
  std::function<Complex(Complex)> fn;
  std::string name;
};

namespace {

using Node = PlaneMap::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr make(Op op, std::vector<NodePtr> kids = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->kids = std::move(kids);
  return n;
}

NodePtr z_node() {
  static const NodePtr z = make(Op::Z);
  return z;
}

NodePtr const_node(Complex c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return n;
}

NodePtr poly_node(std::vector<Complex> coeffs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Poly;
  n->coeffs = std::move(coeffs);
  if (n->coeffs.empty()) n->coeffs.push_back(0.0);
  return n;
}

NodePtr pow_node(NodePtr base, int k) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->n = k;
  n->kids = {std::move(base)};
  return n;
}

Complex ipow(Complex w, int k) {
  if (k < 0) return 1.0 / ipow(w, -k);
  Complex out = 1.0;
  while (k) {
    if (k & 1) out *= w;
    w *= w;
    k >>= 1;
  }
  return out;
}

Complex eval(const Node& node, Complex z) {
  switch (node.op) {
    case Op::Z: return z;
    case Op::Const: return node.value;
    case Op::Poly: {
      Complex acc = 0.0;
      for (auto it = node.coeffs.rbegin(); it != node.coeffs.rend(); ++it) acc = acc * z + *it;
      return acc;
    }
    case Op::Conj: return std::conj(eval(*node.kids[0], z));
    case Op::Fold: {
      const Complex w = eval(*node.kids[0], z);
      return {std::abs(w.real()), w.imag()};
    }
    case Op::Re: return eval(*node.kids[0], z).real();
    case Op::Im: return eval(*node.kids[0], z).imag();
    case Op::Abs: return std::abs(eval(*node.kids[0], z));
    case Op::Exp: return std::exp(eval(*node.kids[0], z));
    case Op::Add: return eval(*node.kids[0], z) + eval(*node.kids[1], z);
    case Op::Sub: return eval(*node.kids[0], z) - eval(*node.kids[1], z);
    case Op::Mul: return eval(*node.kids[0], z) * eval(*node.kids[1], z);
    case Op::Div: return eval(*node.kids[0], z) / eval(*node.kids[1], z);
    case Op::Neg: return -eval(*node.kids[0], z);
    case Op::Pow: return ipow(eval(*node.kids[0], z), node.n);
    case Op::Compose: return eval(*node.kids[0], eval(*node.kids[1], z));
    case Op::Custom: return node.fn(z);
  }
  return 0.0;
}

bool depends_on_z(const Node& node) {
  switch (node.op) {
    case Op::Z:
    case Op::Custom: return true;
    case Op::Const: return false;
    case Op::Poly: return node.coeffs.size() > 1;
    case Op::Compose: return depends_on_z(*node.kids[0]) && depends_on_z(*node.kids[1]);
    default:
      for (const auto& k : node.kids)
        if (depends_on_z(*k)) return true;
      return false;
  }
}

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_complex(Complex c) {
  if (c.imag() == 0.0) return c.real() < 0 ? "(" + fmt_real(c.real()) + ")" : fmt_real(c.real());
  if (c.real() == 0.0) return "(" + fmt_real(c.imag()) + "i)";
  return "(" + fmt_real(c.real()) + (c.imag() < 0 ? "-" : "+") + fmt_real(std::abs(c.imag())) + "i)";
}

void print(const Node& node, std::ostringstream& os) {
  auto unary = [&](const char* fname) {
    os << fname << '(';
    print(*node.kids[0], os);
    os << ')';
  };
  auto binary = [&](const char* sym) {
    os << '(';
    print(*node.kids[0], os);
    os << ' ' << sym << ' ';
    print(*node.kids[1], os);
    os << ')';
  };
  switch (node.op) {
    case Op::Z: os << 'z'; break;
    case Op::Const: os << fmt_complex(node.value); break;
    case Op::Poly:
      os << "poly[";
      for (std::size_t k = 0; k < node.coeffs.size(); ++k) os << (k ? ", " : "") << fmt_complex(node.coeffs[k]);
      os << ']';
      break;
    case Op::Conj: unary("conj"); break;
    case Op::Fold: unary("fold"); break;
    case Op::Re: unary("re"); break;
    case Op::Im: unary("im"); break;
    case Op::Abs: unary("abs"); break;
    case Op::Exp: unary("exp"); break;
    case Op::Add: binary("+"); break;
    case Op::Sub: binary("-"); break;
    case Op::Mul: binary("*"); break;
    case Op::Div: binary("/"); break;
    case Op::Neg: os << "(-"; print(*node.kids[0], os); os << ')'; break;
    case Op::Pow: os << '('; print(*node.kids[0], os); os << ")^" << node.n; break;
    case Op::Compose:
      os << "compose(";
      print(*node.kids[0], os);
      os << ", ";
      print(*node.kids[1], os);
      os << ')';
      break;
    case Op::Custom: os << node.name; break;
  }
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    // Columns are 1-based; scene loaders translate these to line/column.
    throw Error(ErrorKind::ParseError, "column " + std::to_string(pos_ + 1) + ": " + msg + " in map '" +
                                           std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      skip();
      bool neg = accept('-');
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      const int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
      return pow_node(base, neg ? -k : k);
    }
    return base;
  }

  Complex constant_of(const NodePtr& e) {
    if (depends_on_z(*e)) fail("expected a constant argument");
    return eval(*e, 0.0);
  }

  std::vector<NodePtr> args(char close) {
    std::vector<NodePtr> out;
    out.push_back(expr());
    while (accept(',')) out.push_back(expr());
    expect(close);
    return out;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      return named(name, start);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 == text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return const_node({0.0, v});
    }
    return const_node(v);
  }

  NodePtr apply_unary(Op op) {
    std::vector<NodePtr> a;
    if (accept('(')) {
      a = args(')');
      if (a.size() != 1) fail("expected one argument");
    } else {
      a = {z_node()};
    }
    return make(op, std::move(a));
  }

  NodePtr named(const std::string& name, std::size_t start) {
    if (name == "z") return z_node();
    if (name == "i") return const_node({0.0, 1.0});
    if (name == "conj") return apply_unary(Op::Conj);
    if (name == "fold") return apply_unary(Op::Fold);
    if (name == "re") return apply_unary(Op::Re);
    if (name == "im") return apply_unary(Op::Im);
    if (name == "abs") return apply_unary(Op::Abs);
    if (name == "exp") return apply_unary(Op::Exp);
    if (name == "poly" || name == "affine" || name == "translate" || name == "pow") {
      expect('[');
      std::vector<Complex> vals;
      for (const auto& e : args(']')) vals.push_back(constant_of(e));
      if (name == "poly") return poly_node(vals);
      if (name == "affine") {
        if (vals.size() != 2) fail("affine takes [alpha, beta]");
        return poly_node({vals[1], vals[0]});
      }
      if (name == "translate") {
        if (vals.size() != 1) fail("translate takes [beta]");
        return poly_node({vals[0], 1.0});
      }
      if (vals.size() != 1 || vals[0].imag() != 0.0 || vals[0].real() != std::round(vals[0].real()))
        fail("pow takes one integer");
      return pow_node(z_node(), static_cast<int>(vals[0].real()));
    }
    if (name == "compose") {
      expect('(');
      auto fs = args(')');
      NodePtr acc = fs.back();
      for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = make(Op::Compose, {*it, acc});
      return acc;
    }
    pos_ = start;
    fail("unknown name '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PlaneMap::PlaneMap() : root_(z_node()) {}

PlaneMap PlaneMap::identity() { return PlaneMap(z_node()); }
PlaneMap PlaneMap::constant(Complex c) { return PlaneMap(const_node(c)); }
PlaneMap PlaneMap::polynomial(std::vector<Complex> coefficients) { return PlaneMap(poly_node(std::move(coefficients))); }
PlaneMap PlaneMap::affine(Complex alpha, Complex beta) { return PlaneMap(poly_node({beta, alpha})); }
PlaneMap PlaneMap::translation(Complex beta) { return PlaneMap(poly_node({beta, 1.0})); }
PlaneMap PlaneMap::conjugation() { return PlaneMap(make(Op::Conj, {z_node()})); }
PlaneMap PlaneMap::fold() { return PlaneMap(make(Op::Fold, {z_node()})); }
PlaneMap PlaneMap::power(int n) { return PlaneMap(pow_node(z_node(), n)); }

PlaneMap PlaneMap::custom(std::function<Complex(Complex)> fn, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Custom;
  n->fn = std::move(fn);
  n->name = std::move(name);
  return PlaneMap(n);
}

PlaneMap PlaneMap::parse(std::string_view text) { return PlaneMap(Parser(text).parse()); }

PlaneMap PlaneMap::compose(const PlaneMap& inner) const {
  PlaneMap out(make(Op::Compose, {root_, inner.root_}));
  out.window_ = inner.window_;
  return out;
}

PlaneMap PlaneMap::conj() const { return PlaneMap(make(Op::Conj, {root_})); }

PlaneMap operator+(const PlaneMap& a, const PlaneMap& b) { return PlaneMap(make(Op::Add, {a.root_, b.root_})); }
PlaneMap operator-(const PlaneMap& a, const PlaneMap& b) { return PlaneMap(make(Op::Sub, {a.root_, b.root_})); }
PlaneMap operator*(const PlaneMap& a, const PlaneMap& b) { return PlaneMap(make(Op::Mul, {a.root_, b.root_})); }
PlaneMap operator*(Complex s, const PlaneMap& a) { return PlaneMap(make(Op::Mul, {const_node(s), a.root_})); }

PlaneMap PlaneMap::with_window(const geom::Window& w) const {
  PlaneMap out = *this;
  out.window_ = w;
  return out;
}

PlaneMap PlaneMap::with_lipschitz(double bound) const {
  PlaneMap out = *this;
  out.lipschitz_ = bound;
  return out;
}

Complex PlaneMap::operator()(Complex z) const { return eval(*root_, z); }

Point PlaneMap::evaluate(Point z) const {
  if (window_ && !window_->contains(z))
    throw Error(ErrorKind::OutsideWindow, "evaluation point outside the declared window");
  return (*this)(z);
}

bool PlaneMap::validate_lipschitz(std::uint64_t seed, int pairs) const {
  if (!lipschitz_) return true;
  const geom::Window w = window_.value_or(geom::Window{});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(w.xmin, w.xmax), uy(w.ymin, w.ymax);
  std::uniform_real_distribution<double> step(-1.0, 1.0);
  const double local = 1e-3 * w.diagonal();
  for (int k = 0; k < pairs; ++k) {
    const Point p{ux(rng), uy(rng)};
    // Alternate far pairs with nearby pairs, where local stretching shows.
    Point q = (k % 2) ? Point{ux(rng), uy(rng)} : p + local * Point{step(rng), step(rng)};
    const double d = geom::dist(p, q);
    if (d == 0.0) continue;
    const double image = geom::dist((*this)(p), (*this)(q));
    if (image > *lipschitz_ * d * (1.0 + 1e-9) + 1e-12) return false;
  }
  return true;
}

std::string PlaneMap::text() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

bool PlaneMap::is_constant() const { return !depends_on_z(*root_); }

int degree_at(const PlaneMap& f, const curve::OrientedClosedCurve& s, Point p) {
  const Point fp = f(p);
  winding::LiftOptions opts;
  opts.zero_threshold = 1e-7;
  try {
    const auto lift = winding::lift_closed(
        [&](double t) { return f(s.at(t)) - fp; }, s.vertex_parameters(), opts);
    return lift.winding();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::FixedPointOnCurve)
      throw Error(ErrorKind::ValueHit, "f(p) lies on or near f(S)");
    throw;
  }
}

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::Positive: return "positive";
    case Orientation::Negative: return "negative";
    case Orientation::Mixed: return "mixed";
    case Orientation::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

OrientationEvidence orientation_class(const PlaneMap& f, int trials, const geom::Window& window,
                                      std::uint64_t seed) {
  OrientationEvidence ev;
  const double span = std::min(window.width(), window.height());
  for (int k = 0; k < trials; ++k) {
    std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double radius = span * (0.04 + 0.2 * u01(rng));
    const Point c{window.xmin + radius + (window.width() - 2 * radius) * u01(rng),
                  window.ymin + radius + (window.height() - 2 * radius) * u01(rng)};
    std::vector<Point> verts;
    const int n = 48;
    const bool polygon = (k % 2) == 1;
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n;
      const double r = polygon ? radius * (0.75 + 0.25 * u01(rng)) : radius;
      verts.push_back(c + r * Point{std::cos(th), std::sin(th)});
    }
    const double pr = 0.5 * radius * std::sqrt(u01(rng));
    const double pth = 2.0 * std::numbers::pi * u01(rng);
    const Point p = c + pr * Point{std::cos(pth), std::sin(pth)};
    try {
      const curve::OrientedClosedCurve s(verts);
      const int d = degree_at(f, s, p);
      ev.degrees.push_back(d);
      if (d > 0) ++ev.positive;
      else if (d < 0) ++ev.negative;
      else ++ev.zero;
    } catch (const Error& e) {
      ++ev.skipped;
      ev.diagnostics.push_back("trial " + std::to_string(k) + ": " + e.what());
    }
  }
  if (ev.positive > 0 && ev.negative > 0) ev.verdict = Orientation::Mixed;
  else if (ev.positive > 0 && ev.zero == 0) ev.verdict = Orientation::Positive;
  else if (ev.negative > 0 && ev.zero == 0) ev.verdict = Orientation::Negative;
  return ev;
}

}  // namespace planetopo::maps
