#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace zernike {

struct CheckEntry {
  std::string name;
  std::string status;  // pass | fail | skipped
  std::string detail;  // residual text or message; required on fail
};

// Machine-readable outcome of one CLI command.
struct RunReport {
  std::string command;
  nlohmann::json spec;
  std::vector<CheckEntry> checks;
  std::vector<std::string> artifacts;
  nlohmann::json result;
  std::uint64_t seed = 0;
  double wall_time_seconds = 0.0;

  // A failing check always carries a message.
  void add_check(const std::string& name, bool passed, const std::string& detail = "") {
    std::string d = detail;
    if (!passed && d.empty()) d = "identity does not hold";
    checks.push_back({name, passed ? "pass" : "fail", std::move(d)});
  }

  void add_skipped(const std::string& name, const std::string& why) {
    checks.push_back({name, "skipped", why});
  }

  bool all_passed() const {
    for (const auto& c : checks) {
      if (c.status == "fail") return false;
    }
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["spec"] = spec;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json e;
      e["name"] = c.name;
      e["status"] = c.status;
      if (!c.detail.empty()) e["detail"] = c.detail;
      j["checks"].push_back(e);
    }
    j["artifacts"] = artifacts;
    j["result"] = result;
    j["seed"] = seed;
    j["wall_time_seconds"] = wall_time_seconds;
    return j;
  }
};

// Output files appear either complete or not at all.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os.flush()) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace zernike
