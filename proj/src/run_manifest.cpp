#include "geon/run_manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace geon {

namespace {
using nlohmann::json;
using nlohmann::ordered_json;
}  // namespace

std::string RunManifest::to_text() const {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config_path;
  ordered_json ov = ordered_json::object();
  for (const auto& [key, value] : overrides) ov[key] = value;
  j["overrides"] = ov;
  j["out_dir"] = out_dir;
  j["input_hash"] = input_hash;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::parse(const std::string& text,
                               const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  auto need = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string())
      throw std::runtime_error(origin + ": missing string key '" +
                               std::string(key) + "'");
    return j[key].get<std::string>();
  };
  if (need("tool") != kToolName)
    throw std::runtime_error(origin + ": manifest was written by a different tool");
  RunManifest m;
  m.command = need("command");
  m.config_path = need("config");
  m.out_dir = need("out_dir");
  m.input_hash = need("input_hash");
  if (j.contains("overrides")) {
    if (!j["overrides"].is_object())
      throw std::runtime_error(origin + ": 'overrides' must be an object");
    for (const auto& [key, value] : j["overrides"].items()) {
      if (!value.is_string())
        throw std::runtime_error(origin + ": override values must be strings");
      m.overrides[key] = value.get<std::string>();
    }
  }
  return m;
}

RunManifest RunManifest::load(const std::string& path) {
  return parse(read_text_file(path), path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_file(const std::string& path) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(read_text_file(path))));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace geon
