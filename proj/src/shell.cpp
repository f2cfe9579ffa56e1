#include "planetopo/shell.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "planetopo/checkers.hpp"
#include "planetopo/kp.hpp"
#include "planetopo/maps.hpp"
#include "planetopo/variation.hpp"
#include "planetopo/winding.hpp"

namespace planetopo::shell {

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return {line, col};
}

[[noreturn]] void fail_at(std::string_view text, std::size_t offset, const std::string& what) {
  const auto [line, col] = line_column(text, offset);
  throw SceneError(what, line, col);
}

// Offset of the first occurrence of "key" as an object key, or of the value
// inside it when `inner` is set; 0 when not found.
std::size_t key_offset(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto at = text.find(quoted);
  return at == std::string_view::npos ? 0 : at;
}

std::size_t value_offset(std::string_view text, std::string_view key) {
  std::size_t at = key_offset(text, key);
  at = text.find(':', at);
  if (at == std::string_view::npos) return 0;
  ++at;
  while (at < text.size() && (text[at] == ' ' || text[at] == '\t' || text[at] == '\n' || text[at] == '\r')) ++at;
  return at;
}

const std::set<std::string>& scene_keys() {
  static const std::set<std::string> keys{"continuum", "curve",  "map",  "window", "resolution", "delta", "eta",
                                          "tasks",     "seed",   "tolerance", "neck", "box", "trials"};
  return keys;
}

Point read_point(std::string_view text, const char* key, const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail_at(text, value_offset(text, key), std::string("expected [x, y] in ") + key);
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Point> read_points(std::string_view text, const char* key, const json& v) {
  if (!v.is_array()) fail_at(text, value_offset(text, key), std::string("expected a list of points in ") + key);
  std::vector<Point> out;
  for (const json& p : v) out.push_back(read_point(text, key, p));
  return out;
}

Window read_window(std::string_view text, const char* key, const json& v) {
  if (!v.is_array() || v.size() != 4 || !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); }))
    fail_at(text, value_offset(text, key), std::string("expected [xmin, xmax, ymin, ymax] in ") + key);
  Window w{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
  if (!(w.width() > 0 && w.height() > 0)) fail_at(text, value_offset(text, key), std::string("empty ") + key);
  return w;
}

double read_positive(std::string_view text, const char* key, const json& v) {
  if (!v.is_number() || !(v.get<double>() > 0))
    fail_at(text, value_offset(text, key), std::string(key) + " must be a positive number");
  return v.get<double>();
}

curve::Compactum example(const std::string& name) {
  if (name == "unit-square") return curve::Compactum::unit_square();
  if (name == "segment") return curve::Compactum::segment({-1, 0}, {1, 0});
  if (name == "two-points") return curve::Compactum::points({{-1, 0}, {1, 0}});
  if (name == "fjord") {
    const double w = 0.15;
    return curve::Compactum::polygon({{-3, -3}, {3, -3}, {3, 3}, {w, 3}, {w, -2}, {-w, -2}, {-w, 3}, {-3, 3}});
  }
  throw std::invalid_argument(name);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json points_json(const std::vector<Point>& ps) {
  json out = json::array();
  for (Point p : ps) out.push_back(point_json(p));
  return out;
}

json ball_json(const geom::Ball& b) {
  switch (b.kind) {
    case geom::Ball::Kind::Disk:
      return {{"kind", "disk"}, {"center", point_json(b.center)}, {"radius", b.radius}};
    case geom::Ball::Kind::ExteriorDisk:
      return {{"kind", "exterior"}, {"center", point_json(b.center)}, {"radius", b.radius}};
    case geom::Ball::Kind::HalfPlane:
      break;
  }
  return {{"kind", "half-plane"}, {"anchor", point_json(b.anchor)}, {"normal", point_json(b.normal)}};
}

json arc_json(const geom::CircularArc& a) {
  json j{{"a", point_json(a.a)}, {"b", point_json(a.b)}};
  switch (a.kind) {
    case geom::CircularArc::Kind::Segment: j["kind"] = "segment"; break;
    case geom::CircularArc::Kind::Circle:
      j["kind"] = "circle";
      j["center"] = point_json(a.center);
      j["radius"] = a.radius;
      break;
    case geom::CircularArc::Kind::OuterRays: j["kind"] = "outer-rays"; break;
  }
  return j;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Svg {
public:
  explicit Svg(const Window& w) : w_(w), stroke_(std::max(w.width(), w.height()) / 400) {}

  void polyline(const std::vector<Point>& pts, const std::string& color, double width = 1, bool closed = false,
                const std::string& fill = "none") {
    if (pts.empty()) return;
    body_ << "<" << (closed ? "polygon" : "polyline") << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].x) << "," << num(pts[i].y);
    body_ << "\" fill=\"" << fill << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width * stroke_)
          << "\"/>\n";
  }
  void dot(Point p, const std::string& color, double r = 2) {
    body_ << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(r * stroke_) << "\" fill=\""
          << color << "\"/>\n";
  }
  void layer(const std::string& id) {
    if (open_) body_ << "</g>\n";
    body_ << "<g id=\"" << id << "\">\n";
    open_ = true;
  }
  std::string str() const {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(w_.xmin) << " "
       << num(-w_.ymax) << " " << num(w_.width()) << " " << num(w_.height()) << "\">\n"
       << "<g transform=\"scale(1,-1)\">\n"
       << body_.str() << (open_ ? "</g>\n" : "") << "</g>\n</svg>\n";
    return os.str();
  }

private:
  Window w_;
  double stroke_;
  std::ostringstream body_;
  bool open_ = false;
};

void draw_continuum(Svg& svg, const curve::Compactum& k) {
  svg.layer("continuum");
  for (const auto& poly : k.polygons()) svg.polyline(poly, "black", 1, true, "#444");
  for (const auto& line : k.polylines()) svg.polyline(line, "black", 1.5);
  for (Point p : k.isolated()) svg.dot(p, "black", 3);
}

std::string status_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::HypothesisViolation:
    case ErrorKind::NoValidPartition:
    case ErrorKind::InvalidPartition:
    case ErrorKind::FixedPointOnCurve:
    case ErrorKind::FixedPointNearX:
      return "inapplicable";
    default:
      return "error";
  }
}

struct Context {
  const Scene& scene;
  maps::PlaneMap f;
  double resolution;
  double tolerance;
  std::uint64_t seed;
  std::optional<kp::KPPartition> part = {};
  std::optional<kp::Classification> cls = {};
  std::optional<curve::OrientedClosedCurve> s = {};
  bool bumping = false;
  std::optional<variation::VariationReport> var = {};
  std::vector<Point> fixed_points = {};

  double per_unit() const { return resolution / scene.window.width(); }

  const kp::KPPartition& partition() {
    if (!part) {
      kp::KPOptions o;
      o.spacing = scene.window.width() / resolution;
      o.raster_cells = static_cast<int>(resolution);
      part = kp::maximal_balls(scene.continuum, scene.window, o);
    }
    return *part;
  }
  const kp::Classification& classification() {
    if (!cls) {
      kp::ClassifyOptions o;
      o.raster_cells = static_cast<int>(resolution);
      o.tolerance = tolerance;
      cls = kp::classify_chords(f, partition(), scene.delta, o);
    }
    return *cls;
  }
  const curve::OrientedClosedCurve& curve() {
    if (!s) {
      if (scene.curve) {
        s = scene.curve;
      } else {
        s = curve::bumping_curve(scene.continuum, f, scene.eta, scene.window, per_unit(), tolerance).curve;
        bumping = true;
      }
    }
    return *s;
  }
  std::vector<double> auto_partition(std::vector<double> required = {}) {
    variation::PartitionOptions o;
    o.required = std::move(required);
    const auto& c = curve();
    return variation::auto_partition(f, c, bumping ? &scene.continuum : nullptr, o);
  }
};

json task_kp(Context& ctx) {
  const auto& p = ctx.partition();
  json elements = json::array();
  int gaps = 0;
  for (std::size_t i : p.with_interior()) {
    const auto& e = p.elements[i];
    gaps += e.is_gap;
    json chords = json::array();
    for (const auto& c : e.chords) chords.push_back(arc_json(c));
    elements.push_back({{"ball", ball_json(e.ball)},
                        {"contacts", points_json(e.contacts)},
                        {"chords", chords},
                        {"gap", e.is_gap},
                        {"source", e.source}});
  }
  return {{"status", "pass"},
          {"elements", p.elements.size()},
          {"nonempty_interior", elements.size()},
          {"gaps", gaps},
          {"families", p.families.size()},
          {"hulls", elements}};
}

json task_classify(Context& ctx) {
  const auto& c = ctx.classification();
  json chords = json::array();
  for (const auto& sc : c.chords)
    chords.push_back({{"chord", arc_json(sc.chord)}, {"variation", sc.variation}, {"diameter", sc.diameter},
                      {"junction", sc.junction}});
  return {{"status", "pass"},        {"delta", c.delta},           {"chords", chords},
          {"plus", c.plus().size()}, {"minus", c.minus().size()},  {"zero", c.zero().size()},
          {"excluded", c.excluded.size()}};
}

json task_index(Context& ctx) {
  const auto& s = ctx.curve();
  return {{"status", "pass"}, {"curve", ctx.bumping ? "bumping" : "given"}, {"index", winding::index(ctx.f, s)}};
}

json task_variation(Context& ctx) {
  const auto& s = ctx.curve();
  ctx.var = variation::variation_total(ctx.f, s, ctx.auto_partition());
  const auto& r = *ctx.var;
  return {{"status", "pass"},
          {"partition", r.partition},
          {"per_arc", r.per_arc},
          {"total", r.total},
          {"junction_vertices", points_json(r.junction_vertices)},
          {"junction_kinds", r.junction_kinds}};
}

json task_ivp1(Context& ctx) {
  const auto& s = ctx.curve();
  const auto r = checkers::check_index_variation(ctx.f, s, ctx.auto_partition());
  return {{"status", r.equal ? "pass" : "fail"}, {"index", r.index},       {"variation", r.variation},
          {"partition", r.partition},            {"per_arc", r.per_arc}};
}

json task_lollipop(Context& ctx) {
  if (ctx.scene.neck.size() < 2) return {{"status", "inapplicable"}, {"reason", "scene has no neck"}};
  const auto& s = ctx.curve();
  const auto& neck = ctx.scene.neck;
  const auto part = ctx.auto_partition({s.project(neck.front()), s.project(neck.back())});
  const auto r = checkers::check_lollipop(ctx.f, s, part, neck);
  json j{{"status", r.holds ? "pass" : "fail"},
         {"side", std::string(1, r.side)},
         {"partition", r.partition},
         {"neck_position", r.neck},
         {"per_arc", r.per_arc},
         {"side_sum_plus_one", r.side_sum + 1},
         {"loop_index", r.loop_index},
         {"curve_index", r.curve_index},
         {"identity", r.identity},
         {"corollary", r.corollary}};
  j["negative_arc"] = r.negative_arc ? json(*r.negative_arc) : json(nullptr);
  return j;
}

json task_fixpoint(Context& ctx) {
  checkers::LocateOptions o;
  o.all = true;
  o.seed = ctx.seed;
  const Window box = ctx.scene.box.value_or(ctx.scene.window);
  const auto r = checkers::locate_fixed_point(ctx.f, box, ctx.tolerance, o);
  ctx.fixed_points = r.points;
  const bool ok = std::all_of(r.residuals.begin(), r.residuals.end(), [&](double x) { return x < 10 * ctx.tolerance; });
  json j{{"status", ok ? "pass" : "fail"}, {"boundary_index", r.boundary_index}, {"absent", r.absent},
         {"points", points_json(r.points)}, {"residuals", r.residuals},          {"leaf_index", r.leaf_index}};
  if (r.absent) j["certificate"] = r.certificate;
  return j;
}

json task_orientation(Context& ctx) {
  const auto ev = maps::orientation_class(ctx.f, ctx.scene.trials, ctx.scene.window, ctx.seed);
  return {{"status", "pass"},   {"verdict", std::string(maps::to_string(ev.verdict))},
          {"positive", ev.positive}, {"negative", ev.negative},
          {"zero", ev.zero},    {"skipped", ev.skipped}};
}

json task_outchannel(Context& ctx) {
  const auto& c = ctx.classification();
  json chains = json::array();
  for (const auto& ch : kp::outchannel_scan(ctx.partition(), c))
    chains.push_back({{"chords", ch.chords}, {"sign", ch.sign}, {"total_variation", ch.total_variation}});
  return {{"status", "pass"}, {"chains", chains}};
}

std::string render(Context& ctx) {
  Svg svg(ctx.scene.window);
  if (ctx.part) {
    svg.layer("hulls");
    for (std::size_t i : ctx.part->with_interior()) {
      const auto hull = kp::hull_of(ctx.part->elements[i]);
      svg.polyline(hull.polygon, "#3a6ea5", 0.5, true, ctx.part->elements[i].is_gap ? "#f3d9a4" : "#dbe7f3");
    }
    svg.layer("balls");
    for (std::size_t i : ctx.part->with_interior()) {
      const auto& b = ctx.part->elements[i].ball;
      if (b.kind == geom::Ball::Kind::HalfPlane) continue;
      std::vector<Point> ring;
      for (int k = 0; k <= 128; ++k) {
        const double t = 2 * std::numbers::pi * k / 128;
        ring.push_back(b.center + b.radius * Point{std::cos(t), std::sin(t)});
      }
      svg.polyline(ring, "#9aa", 0.4);
    }
  }
  draw_continuum(svg, ctx.scene.continuum);
  if (ctx.cls) {
    svg.layer("chords");
    for (const auto& c : ctx.cls->chords) {
      const std::string color = c.variation > 0 ? "#1f5fbf" : c.variation < 0 ? "#c0392b" : "#888";
      svg.polyline(c.chord.sample(32, ctx.scene.window.diagonal()), color, 1);
    }
  }
  if (ctx.s) {
    svg.layer("curve");
    svg.polyline(ctx.s->vertices(), "#e67e22", 1, true);
    for (Point p : ctx.scene.neck) svg.dot(p, "#e67e22", 2);
    if (ctx.scene.neck.size() >= 2) svg.polyline(ctx.scene.neck, "#e67e22", 1);
  }
  if (ctx.var && ctx.s) {
    svg.layer("junctions");
    for (Point v : ctx.var->junction_vertices) {
      try {
        const auto j = variation::make_junction(*ctx.s, v);
        svg.polyline(j.ray(variation::Ray::Plus), "#27ae60", 0.6);
        svg.polyline(j.ray(variation::Ray::In), "#27ae60", 1);
        svg.polyline(j.ray(variation::Ray::Minus), "#27ae60", 0.6);
      } catch (const Error&) {
      }
      svg.dot(v, "#27ae60", 1.5);
    }
  }
  if (!ctx.fixed_points.empty()) {
    svg.layer("fixed-points");
    for (Point p : ctx.fixed_points) svg.dot(p, "#8e44ad", 3);
  }
  return svg.str();
}

}  // namespace

SceneError::SceneError(const std::string& what, int l, int c)
    : Error(ErrorKind::ParseError, "line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what),
      line(l),
      column(c) {}

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"kp",       "classify", "index",       "variation",      "ivp1",
                                              "lollipop", "fixpoint", "orientation", "outchannel-scan"};
  return names;
}

Scene parse_scene(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail_at(text, e.byte > 0 ? e.byte - 1 : 0, "malformed JSON");
  }
  if (!j.is_object()) fail_at(text, 0, "scene must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!scene_keys().count(key)) fail_at(text, key_offset(text, key), "unknown key \"" + key + "\"");

  Scene s;
  s.text = std::string(text);
  if (!j.contains("continuum")) fail_at(text, 0, "missing key \"continuum\"");
  const json& c = j["continuum"];
  try {
    if (c.is_string()) {
      s.continuum_kind = c.get<std::string>();
      s.continuum = example(s.continuum_kind);
    } else if (c.is_object()) {
      for (const auto& [key, _] : c.items())
        if (key != "kind" && key != "points") fail_at(text, key_offset(text, key), "unknown key \"" + key + "\"");
      if (!c.contains("kind") || !c["kind"].is_string()) fail_at(text, value_offset(text, "continuum"), "continuum needs a kind");
      s.continuum_kind = c["kind"].get<std::string>();
      const auto pts = read_points(text, "points", c.value("points", json::array()));
      if (s.continuum_kind == "polygon") s.continuum = curve::Compactum::polygon(pts);
      else if (s.continuum_kind == "polyline") s.continuum = curve::Compactum::polyline(pts);
      else if (s.continuum_kind == "points") s.continuum = curve::Compactum::points(pts);
      else fail_at(text, value_offset(text, "kind"), "unknown continuum kind \"" + s.continuum_kind + "\"");
      if (pts.empty()) fail_at(text, value_offset(text, "continuum"), "continuum has no points");
    } else {
      fail_at(text, value_offset(text, "continuum"), "continuum must be a name or an object");
    }
  } catch (const std::invalid_argument&) {
    fail_at(text, value_offset(text, "continuum"), "unknown example \"" + s.continuum_kind + "\"");
  }

  if (!j.contains("map") || !j["map"].is_string()) fail_at(text, value_offset(text, "map"), "map must be a string");
  s.map = j["map"].get<std::string>();
  try {
    maps::PlaneMap::parse(s.map);
  } catch (const Error& e) {
    fail_at(text, value_offset(text, "map"), std::string("map: ") + e.what());
  }

  const Window bounds = s.continuum.bounds();
  const double pad = std::max({bounds.width(), bounds.height(), 1.0});
  s.window = j.contains("window") ? read_window(text, "window", j["window"]) : bounds.expanded(pad);
  if (!s.window.contains({bounds.xmin, bounds.ymin}) || !s.window.contains({bounds.xmax, bounds.ymax}))
    fail_at(text, value_offset(text, "window"), "window does not contain the continuum");

  if (j.contains("curve")) {
    const json& cv = j["curve"];
    try {
      if (cv.is_object() && cv.contains("circle")) {
        const json& a = cv["circle"];
        if (!a.is_array() || a.size() < 3) fail_at(text, value_offset(text, "circle"), "circle is [cx, cy, r]");
        s.curve = curve::OrientedClosedCurve::circle({a[0].get<double>(), a[1].get<double>()}, a[2].get<double>(),
                                                     a.size() > 3 ? a[3].get<int>() : 128);
      } else if (cv.is_object() && cv.contains("polygon")) {
        s.curve = curve::OrientedClosedCurve::from_polygon(read_points(text, "polygon", cv["polygon"]));
      } else {
        fail_at(text, value_offset(text, "curve"), "curve needs circle or polygon");
      }
    } catch (const SceneError&) {
      throw;
    } catch (const std::exception& e) {
      fail_at(text, value_offset(text, "curve"), std::string("curve: ") + e.what());
    }
  }
  if (j.contains("resolution")) s.resolution = read_positive(text, "resolution", j["resolution"]);
  if (j.contains("delta")) s.delta = read_positive(text, "delta", j["delta"]);
  if (j.contains("eta")) s.eta = read_positive(text, "eta", j["eta"]);
  if (j.contains("tolerance")) s.tolerance = read_positive(text, "tolerance", j["tolerance"]);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail_at(text, value_offset(text, "seed"), "seed must be a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("trials")) {
    if (!j["trials"].is_number_integer() || j["trials"].get<int>() < 1)
      fail_at(text, value_offset(text, "trials"), "trials must be a positive integer");
    s.trials = j["trials"].get<int>();
  }
  if (j.contains("neck")) s.neck = read_points(text, "neck", j["neck"]);
  if (j.contains("box")) s.box = read_window(text, "box", j["box"]);
  if (j.contains("tasks")) {
    const json& t = j["tasks"];
    if (!t.is_array()) fail_at(text, value_offset(text, "tasks"), "tasks must be a list");
    for (const json& name : t) {
      const auto& known = task_names();
      if (!name.is_string() || std::find(known.begin(), known.end(), name.get<std::string>()) == known.end())
        fail_at(text, value_offset(text, "tasks"), "unknown task " + name.dump());
      s.tasks.push_back(name.get<std::string>());
    }
  }
  return s;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError("cannot read " + path.string(), 0, 0);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_scene(os.str());
}

RunResult run(const Scene& scene, const RunOptions& opts) {
  Context ctx{scene, maps::PlaneMap::parse(scene.map), opts.resolution.value_or(scene.resolution),
              opts.tolerance.value_or(scene.tolerance), opts.seed.value_or(scene.seed)};
  RunResult out;
  json& rep = out.report;
  rep["tool"] = "planetopo";
  rep["version"] = std::string(kVersion);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(scene.text + "|" + std::to_string(ctx.seed) + "|" +
                                                      num(ctx.resolution) + "|" + num(ctx.tolerance))));
  rep["input_hash"] = hash;
  rep["seed"] = ctx.seed;
  rep["resolution"] = ctx.resolution;
  rep["tolerance"] = ctx.tolerance;
  rep["map"] = scene.map;
  rep["continuum"] = scene.continuum_kind;
  rep["tasks"] = json::array();
  rep["timing"] = json::object();

  using Task = json (*)(Context&);
  const std::vector<std::pair<std::string, Task>> table{
      {"kp", task_kp},         {"classify", task_classify}, {"index", task_index},
      {"variation", task_variation}, {"ivp1", task_ivp1},    {"lollipop", task_lollipop},
      {"fixpoint", task_fixpoint}, {"orientation", task_orientation}, {"outchannel-scan", task_outchannel}};
  for (const auto& [name, fn] : table) {
    if (std::find(scene.tasks.begin(), scene.tasks.end(), name) == scene.tasks.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    json r;
    try {
      r = fn(ctx);
    } catch (const Error& e) {
      r = {{"status", status_of(e)}, {"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    }
    r["task"] = name;
    const std::string status = r["status"];
    if (status == "fail" || status == "error") out.passed = false;
    rep["tasks"].push_back(r);
    rep["timing"][name] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  rep["passed"] = out.passed;
  if (opts.svg) out.figures.push_back({"scene", render(ctx)});
  return out;
}

json deterministic_part(const json& report) {
  json out = report;
  out.erase("timing");
  return out;
}

}  // namespace planetopo::shell
