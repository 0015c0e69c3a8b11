#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crowdsim/scene.hpp"

namespace crowdsim::test {

// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "crowdsim_XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path repo_root() {
  const char* root = std::getenv("CROWDSIM_ROOT");
  if (root) return root;
  return std::filesystem::current_path();
}

inline std::filesystem::path scene_dir() { return repo_root() / "scenes"; }

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the crowdsim binary (path from CROWDSIM_BIN) with the given argument
// string; stdout/stderr are captured through temp files.
inline CmdResult run_cli(const std::string& args) {
  const char* bin = std::getenv("CROWDSIM_BIN");
  if (!bin) throw std::runtime_error("CROWDSIM_BIN not set");
  TempDir capture;
  const std::string out_path = capture.file("out");
  const std::string err_path = capture.file("err");
  const std::string cmd =
      std::string("\"") + bin + "\" " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  CmdResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

// Square floor with no obstacles.
inline Scene square_scene(double side, std::vector<HumanSpec> humans = {}) {
  Scene scene;
  scene.name = "test";
  scene.floor = {{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}};
  scene.grid_resolution = 0.25;
  scene.humans = std::move(humans);
  return scene;
}

inline HumanSpec human_at(int id, Vec2 pos, Vec2 dest) {
  HumanSpec h;
  h.id = id;
  h.position = pos;
  h.destination = dest;
  return h;
}

}  // namespace crowdsim::test
