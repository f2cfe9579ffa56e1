#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "planetopo/curve.hpp"
#include "planetopo/error.hpp"
#include "planetopo/geom.hpp"

namespace planetopo::shell {

using geom::Point;
using geom::Window;
using json = nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";

/// Parse failure with a 1-based position in the scene text.
class SceneError : public Error {
public:
  SceneError(const std::string& what, int line, int column);
  int line;
  int column;
};

struct Scene {
  std::string text;
  std::string continuum_kind;  // polygon, polyline, points, or an example name
  curve::Compactum continuum;
  /// Simple closed curve for index and variation tasks; the bumping curve of
  /// the continuum when absent.
  std::optional<curve::OrientedClosedCurve> curve;
  std::string map;
  Window window;
  double resolution = 256;
  double delta = 0.5;
  double eta = 0.05;
  std::vector<std::string> tasks;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  std::vector<Point> neck;
  std::optional<Window> box;
  int trials = 50;
};

/// Tasks in the order they run.
const std::vector<std::string>& task_names();

/// Throws SceneError.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> resolution;
  std::optional<double> tolerance;
  bool svg = false;
};

struct Figure {
  std::string name;
  std::string svg;
};

struct RunResult {
  json report;
  bool passed = true;
  std::vector<Figure> figures;
};

/// Runs the scene's tasks in the fixed order. Task failures are recorded in the
/// report rather than thrown.
RunResult run(const Scene& scene, const RunOptions& opts = {});

/// The report without its timing fields.
json deterministic_part(const json& report);

}  // namespace planetopo::shell
