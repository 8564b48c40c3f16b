#include "fsgcc/sceneio.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fsgcc/report.hpp"

namespace fsgcc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(const std::string& value, const std::string& key) {
  std::istringstream in(value);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.empty()) throw std::invalid_argument("no numeric values for key: " + key);
  return out;
}

Eigen::Vector3d parse_point(const std::string& value, const std::string& key) {
  const auto nums = parse_numbers(value, key);
  if (nums.size() != 3) throw std::invalid_argument(key + " needs exactly 3 coordinates");
  return {nums[0], nums[1], nums[2]};
}

}  // namespace

SimScene parse_scene_text(const std::string& text) {
  SimScene scene;
  scene.mic_positions.clear();

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed scene line: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "room") {
      scene.room_dims = parse_point(value, key);
    } else if (key == "refl") {
      scene.refl = std::stod(value);
    } else if (key == "source") {
      scene.source_pos = parse_point(value, key);
    } else if (key == "mic") {
      scene.mic_positions.push_back(parse_point(value, key));
    } else if (key == "c") {
      scene.c = std::stod(value);
    } else if (key == "fs") {
      scene.fs = std::stod(value);
    } else if (key == "max_order") {
      scene.max_order = std::stoi(value);
    } else if (key == "snr_db") {
      scene.snr_db = (value == "inf" || value == "none")
                         ? std::numeric_limits<double>::infinity()
                         : std::stod(value);
    } else if (key == "seed") {
      scene.seed = std::stoull(value);
    } else if (key == "signal.kind") {
      if (value == "white") scene.signal.kind = TestSignalSpec::Kind::white;
      else if (value == "bandlimited") scene.signal.kind = TestSignalSpec::Kind::bandlimited;
      else if (value == "speechlike") scene.signal.kind = TestSignalSpec::Kind::speechlike;
      else if (value == "wav") scene.signal.kind = TestSignalSpec::Kind::wav;
      else throw std::invalid_argument("unknown signal kind: " + value);
    } else if (key == "signal.duration_s") {
      scene.signal.duration_s = std::stod(value);
    } else if (key == "signal.seed") {
      scene.signal.seed = std::stoull(value);
    } else if (key == "signal.bands") {
      const auto nums = parse_numbers(value, key);
      if (nums.size() % 2 != 0)
        throw std::invalid_argument("signal.bands needs lo/hi pairs");
      scene.signal.bands.clear();
      for (size_t i = 0; i < nums.size(); i += 2)
        scene.signal.bands.emplace_back(nums[i], nums[i + 1]);
    } else if (key == "signal.ar_order") {
      scene.signal.ar_order = std::stoi(value);
    } else if (key == "signal.burst_rate") {
      scene.signal.burst_rate = std::stod(value);
    } else if (key == "signal.wav") {
      scene.signal.wav_path = value;
    } else {
      throw std::invalid_argument("unknown scene key: " + key);
    }
  }
  validate_scene(scene);
  return scene;
}

SimScene parse_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scene_text(buffer.str());
}

std::string scene_to_text(const SimScene& scene) {
  std::string s;
  s += "room = " + fmt_g(scene.room_dims[0]) + " " + fmt_g(scene.room_dims[1]) + " " +
       fmt_g(scene.room_dims[2]) + "\n";
  s += "refl = " + fmt_g(scene.refl) + "\n";
  s += "source = " + fmt_g(scene.source_pos[0]) + " " + fmt_g(scene.source_pos[1]) + " " +
       fmt_g(scene.source_pos[2]) + "\n";
  for (const auto& m : scene.mic_positions)
    s += "mic = " + fmt_g(m[0]) + " " + fmt_g(m[1]) + " " + fmt_g(m[2]) + "\n";
  s += "c = " + fmt_g(scene.c) + "\n";
  s += "fs = " + fmt_g(scene.fs) + "\n";
  s += "max_order = " + std::to_string(scene.max_order) + "\n";
  s += "snr_db = " +
       (std::isfinite(scene.snr_db) ? fmt_g(scene.snr_db) : std::string("inf")) + "\n";
  switch (scene.signal.kind) {
    case TestSignalSpec::Kind::white: s += "signal.kind = white\n"; break;
    case TestSignalSpec::Kind::bandlimited: s += "signal.kind = bandlimited\n"; break;
    case TestSignalSpec::Kind::speechlike: s += "signal.kind = speechlike\n"; break;
    case TestSignalSpec::Kind::wav: s += "signal.kind = wav\n"; break;
  }
  s += "signal.duration_s = " + fmt_g(scene.signal.duration_s) + "\n";
  if (!scene.signal.bands.empty()) {
    s += "signal.bands =";
    for (const auto& [lo, hi] : scene.signal.bands) s += " " + fmt_g(lo) + " " + fmt_g(hi);
    s += "\n";
  }
  if (scene.signal.kind == TestSignalSpec::Kind::speechlike) {
    s += "signal.ar_order = " + std::to_string(scene.signal.ar_order) + "\n";
    s += "signal.burst_rate = " + fmt_g(scene.signal.burst_rate) + "\n";
  }
  if (!scene.signal.wav_path.empty()) s += "signal.wav = " + scene.signal.wav_path + "\n";
  s += "signal.seed = " + std::to_string(scene.signal.seed) + "\n";
  s += "seed = " + std::to_string(scene.seed) + "\n";
  return s;
}

}  // namespace fsgcc
