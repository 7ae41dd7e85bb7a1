#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridrisk/errors.hpp"

namespace gridrisk::cli {

inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

// Reproducibility record written next to every output file.  The same
// manifest (command, case hash, seed, config) always reproduces the same
// ledger bytes; timestamps are informational.
struct RunManifest {
  std::string command;
  std::string case_path;
  std::string case_hash;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<std::string> outputs;
  std::string version = "gridrisk 0.1.0";
  std::string started_at;
  std::string finished_at;

  static std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
  }

  void start(const std::string& cmd, const std::string& case_file) {
    command = cmd;
    case_path = case_file;
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(case_file)));
    case_hash = std::string("fnv1a64:") + hex;
    started_at = now_iso8601();
  }

  std::string write(const std::string& out_base) {
    finished_at = now_iso8601();
    const std::string path = out_base + ".manifest.json";
    nlohmann::json j;
    j["command"] = command;
    j["case_path"] = case_path;
    j["case_hash"] = case_hash;
    j["seed"] = seed;
    j["config"] = config;
    j["outputs"] = outputs;
    j["version"] = version;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest '" + path + "'");
    out << j.dump(2) << "\n";
    return path;
  }
};

}  // namespace gridrisk::cli
