#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "planetopo/checkers.hpp"
#include "planetopo/error.hpp"
#include "planetopo/kp.hpp"
#include "planetopo/maps.hpp"
#include "planetopo/shell.hpp"
#include "planetopo/variation.hpp"
#include "planetopo/winding.hpp"

namespace py = pybind11;
using namespace planetopo;
using geom::Point;

namespace {

using XY = std::pair<double, double>;

std::vector<Point> to_points(const std::vector<XY>& xs) {
  std::vector<Point> out;
  for (auto [x, y] : xs) out.push_back({x, y});
  return out;
}

std::vector<XY> to_pairs(const std::vector<Point>& ps) {
  std::vector<XY> out;
  for (Point p : ps) out.emplace_back(p.x, p.y);
  return out;
}

geom::Window to_window(const std::vector<double>& w) {
  if (w.size() != 4) throw py::value_error("window is [xmin, xmax, ymin, ymax]");
  return {w[0], w[1], w[2], w[3]};
}

py::object json_to_py(const shell::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_planetopo, m) {
  m.doc() = "Index, variation and Kulkarni-Pinkall partitions for plane maps";

  py::register_exception<Error>(m, "Error");

  py::class_<maps::PlaneMap>(m, "PlaneMap")
      .def(py::init([](const std::string& text) { return maps::PlaneMap::parse(text); }), py::arg("text"))
      .def_static("custom",
                  [](std::function<std::complex<double>(std::complex<double>)> fn, std::string name) {
                    return maps::PlaneMap::custom(
                        [fn](std::complex<double> z) {
                          py::gil_scoped_acquire gil;
                          return fn(z);
                        },
                        std::move(name));
                  },
                  py::arg("fn"), py::arg("name") = "python")
      .def("__call__", [](const maps::PlaneMap& f, std::complex<double> z) { return f(z); })
      .def("compose", &maps::PlaneMap::compose)
      .def("text", &maps::PlaneMap::text)
      .def("__repr__", [](const maps::PlaneMap& f) { return "PlaneMap('" + f.text() + "')"; });

  py::class_<curve::OrientedClosedCurve>(m, "Curve")
      .def(py::init([](const std::vector<XY>& v) { return curve::OrientedClosedCurve::from_polygon(to_points(v)); }),
           py::arg("vertices"))
      .def_static("circle", [](XY c, double r, int n) { return curve::OrientedClosedCurve::circle({c.first, c.second}, r, n); },
                  py::arg("center"), py::arg("radius"), py::arg("n") = 64)
      .def("at", [](const curve::OrientedClosedCurve& s, double t) { Point p = s.at(t); return XY{p.x, p.y}; })
      .def("project", [](const curve::OrientedClosedCurve& s, XY p) { return s.project({p.first, p.second}); })
      .def_property_readonly("vertices", [](const curve::OrientedClosedCurve& s) { return to_pairs(s.vertices()); })
      .def_property_readonly("length", &curve::OrientedClosedCurve::length)
      .def("__len__", &curve::OrientedClosedCurve::size);

  m.def("index", [](const maps::PlaneMap& f, const curve::OrientedClosedCurve& s) { return winding::index(f, s); },
        py::arg("f"), py::arg("curve"), "Winding number of f(z) - z along the curve.");

  m.def("auto_partition",
        [](const maps::PlaneMap& f, const curve::OrientedClosedCurve& s, std::vector<double> required) {
          variation::PartitionOptions o;
          o.required = std::move(required);
          return variation::auto_partition(f, s, nullptr, o);
        },
        py::arg("f"), py::arg("curve"), py::arg("required") = std::vector<double>{});

  m.def("variation",
        [](const maps::PlaneMap& f, const curve::OrientedClosedCurve& s, std::vector<double> partition) {
          const auto r = variation::variation_total(f, s, std::move(partition));
          return py::make_tuple(r.total, r.per_arc);
        },
        py::arg("f"), py::arg("curve"), py::arg("partition"), "Total and per-arc variation.");

  m.def("check_index_variation",
        [](const maps::PlaneMap& f, const curve::OrientedClosedCurve& s, const std::vector<double>& partition) {
          const auto r = checkers::check_index_variation(f, s, partition);
          py::dict d;
          d["index"] = r.index;
          d["variation"] = r.variation;
          d["equal"] = r.equal;
          d["per_arc"] = r.per_arc;
          return d;
        },
        py::arg("f"), py::arg("curve"), py::arg("partition"));

  m.def("locate_fixed_points",
        [](const maps::PlaneMap& f, const std::vector<double>& box, double tol, bool all, std::uint64_t seed) {
          checkers::LocateOptions o;
          o.all = all;
          o.seed = seed;
          checkers::FixedPointResult r;
          {
            py::gil_scoped_release release;
            r = checkers::locate_fixed_point(f, to_window(box), tol, o);
          }
          py::dict d;
          d["points"] = to_pairs(r.points);
          d["residuals"] = r.residuals;
          d["boundary_index"] = r.boundary_index;
          d["absent"] = r.absent;
          d["certificate"] = r.certificate;
          return d;
        },
        py::arg("f"), py::arg("box"), py::arg("tol") = 1e-9, py::arg("all") = true, py::arg("seed") = 1);

  m.def("kp_summary",
        [](const std::vector<XY>& polygon, const std::vector<double>& window) {
          const auto p = kp::maximal_balls(curve::Compactum::polygon(to_points(polygon)), to_window(window));
          py::list hulls;
          for (std::size_t i : p.with_interior()) {
            const auto& e = p.elements[i];
            const char* kind = e.ball.kind == geom::Ball::Kind::Disk           ? "disk"
                               : e.ball.kind == geom::Ball::Kind::ExteriorDisk ? "exterior"
                                                                               : "half-plane";
            py::dict h;
            h["kind"] = kind;
            h["gap"] = e.is_gap;
            h["contacts"] = to_pairs(e.contacts);
            hulls.append(h);
          }
          return hulls;
        },
        py::arg("polygon"), py::arg("window"), "Elements of the KP partition with nonempty interior.");

  m.def("run_scene",
        [](const std::string& text, bool svg) {
          const auto scene = shell::parse_scene(text);
          shell::RunOptions o;
          o.svg = svg;
          const auto r = shell::run(scene, o);
          py::dict d;
          d["report"] = json_to_py(r.report);
          d["passed"] = r.passed;
          py::dict figs;
          for (const auto& f : r.figures) figs[py::str(f.name)] = f.svg;
          d["figures"] = figs;
          return d;
        },
        py::arg("text"), py::arg("svg") = false, "Run a scene given as JSON text.");

  m.attr("__version__") = std::string(shell::kVersion);
}
