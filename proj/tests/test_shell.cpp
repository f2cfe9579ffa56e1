#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "planetopo/shell.hpp"

using namespace planetopo;
namespace fs = std::filesystem;

namespace {

const fs::path kScenes = PLANETOPO_SCENES;
const fs::path kCli = PLANETOPO_CLI;

int exit_code(const std::string& args) {
  const int status = std::system((kCli.string() + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "planetopo-shell-test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("unit square scene lists five hulls") {
  const auto r = shell::run(shell::load_scene(kScenes / "unit-square.json"));
  CHECK(r.passed);
  const auto& kp = r.report["tasks"][0];
  CHECK(kp["task"] == "kp");
  CHECK(kp["nonempty_interior"] == 5);
  int half = 0, exterior = 0;
  for (const auto& h : kp["hulls"]) {
    half += h["ball"]["kind"] == "half-plane";
    exterior += h["ball"]["kind"] == "exterior";
  }
  CHECK(half == 4);
  CHECK(exterior == 1);
}

TEST_CASE("index equals variation plus one through the shell") {
  const auto r = shell::run(shell::load_scene(kScenes / "segment-ivp1.json"));
  CHECK(r.passed);
  const auto& ivp1 = r.report["tasks"][2];
  CHECK(ivp1["task"] == "ivp1");
  CHECK(ivp1["status"] == "pass");
  CHECK(ivp1["index"].get<int>() == ivp1["variation"].get<int>() + 1);
}

TEST_CASE("translation off a segment has no admissible partition") {
  const auto scene = shell::parse_scene(R"({"continuum": "segment", "map": "z+5", "tasks": ["index", "ivp1"]})");
  const auto r = shell::run(scene);
  CHECK(r.passed);
  CHECK(r.report["tasks"][0]["index"] == 0);
  CHECK(r.report["tasks"][1]["status"] == "inapplicable");
}

TEST_CASE("reports are deterministic") {
  const auto scene = shell::load_scene(kScenes / "circle-quadratic.json");
  const auto a = shell::run(scene), b = shell::run(scene);
  CHECK(shell::deterministic_part(a.report).dump() == shell::deterministic_part(b.report).dump());
  CHECK(a.report.contains("timing"));
  CHECK_FALSE(shell::deterministic_part(a.report).contains("timing"));
  const auto& fix = a.report["tasks"][1];
  CHECK(fix["points"].size() == 2);
}

TEST_CASE("scene errors carry line and column") {
  try {
    shell::parse_scene("{\n  \"continuum\": \"segment\",\n  \"map\": \"z\",\n  \"colour\": 1\n}");
    FAIL("expected a scene error");
  } catch (const shell::SceneError& e) {
    CHECK(e.line == 4);
    CHECK(e.column == 3);
  }
  try {
    shell::parse_scene("{\n  \"continuum\": \"segment\",\n  \"map\": \"z +\"\n");
    FAIL("expected a scene error");
  } catch (const shell::SceneError& e) {
    CHECK(e.line == 4);
  }
  CHECK_THROWS_AS(shell::parse_scene(R"({"continuum": "blob", "map": "z"})"), shell::SceneError);
  CHECK_THROWS_AS(shell::parse_scene(R"({"continuum": "segment", "map": "z ** 2"})"), shell::SceneError);
  CHECK_THROWS_AS(shell::parse_scene(R"({"continuum": "segment", "map": "z", "tasks": ["kpp"]})"),
                  shell::SceneError);
  CHECK_THROWS_AS(shell::parse_scene(R"({"continuum": "segment", "map": "z", "window": [0, 0.5, -1, 1]})"),
                  shell::SceneError);
}

TEST_CASE("svg figure") {
  shell::RunOptions opts;
  opts.svg = true;
  const auto r = shell::run(shell::load_scene(kScenes / "unit-square.json"), opts);
  REQUIRE(r.figures.size() == 1);
  const std::string& svg = r.figures[0].svg;
  CHECK(svg.find("viewBox=\"-3 -3 6 6\"") != std::string::npos);
  CHECK(svg.find("id=\"hulls\"") != std::string::npos);
  CHECK(svg.find("id=\"continuum\"") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("out");
  CHECK(exit_code("--scene " + (kScenes / "unit-square.json").string() + " --out " + out.string() + " --svg") == 0);
  CHECK(fs::exists(out / "unit-square.report.json"));
  CHECK(fs::exists(out / "unit-square.scene.svg"));

  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << "{\"continuum\": \"segment\",\n \"map\": }";
  CHECK(exit_code("--scene " + bad.string() + " --out " + out.string()) == 2);
  CHECK(exit_code("--out " + out.string()) == 2);

  // A fixed point inside the curve makes the lollipop hypotheses fail, which is
  // reported as inapplicable; a wrong locator result would be a failure.
  const fs::path lol = scratch("lol.json");
  std::ofstream(lol) << R"({"continuum": {"kind": "points", "points": [[0, 0]]},
    "curve": {"circle": [0, 0, 1, 64]}, "map": "0.5*z", "neck": [[0, 1], [0, -1]], "tasks": ["lollipop"]})";
  CHECK(exit_code("--scene " + lol.string() + " --out " + out.string()) == 0);
}
