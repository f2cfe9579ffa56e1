#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "planetopo/shell.hpp"

namespace fs = std::filesystem;
using namespace planetopo;

int main(int argc, char** argv) {
  CLI::App app{"Index, variation and Kulkarni-Pinkall tools for plane maps"};
  std::string scene_path;
  std::string out_dir = ".";
  bool svg = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> resolution, tolerance;
  app.add_option("--scene", scene_path, "Scene file (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory (PLANETOPO_OUT overrides the default)");
  app.add_flag("--svg", svg, "Also write an SVG figure");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--resolution", resolution, "Samples across the window")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", tolerance, "Numerical tolerance")->check(CLI::PositiveNumber);
  if (const char* env = std::getenv("PLANETOPO_OUT")) out_dir = env;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  shell::Scene scene;
  try {
    scene = shell::load_scene(scene_path);
  } catch (const shell::SceneError& e) {
    std::cerr << scene_path << ":" << e.line << ":" << e.column << ": " << e.what() << "\n";
    return 2;
  }

  shell::RunOptions opts{seed, resolution, tolerance, svg};
  const auto result = shell::run(scene, opts);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const std::string stem = fs::path(scene_path).stem().string();
  std::ofstream(dir / (stem + ".report.json")) << result.report.dump(2) << "\n";
  for (const auto& fig : result.figures) std::ofstream(dir / (stem + "." + fig.name + ".svg")) << fig.svg;

  for (const auto& t : result.report["tasks"])
    std::cout << t["task"].get<std::string>() << ": " << t["status"].get<std::string>() << "\n";
  return result.passed ? 0 : 1;
}
