#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace geon {

inline constexpr const char* kToolName = "geonlab";
inline constexpr const char* kToolVersion = "1.0.0";

/// Everything needed to reproduce a run: the subcommand, the config it
/// read (with a content hash so silent config edits are detectable), and
/// the explicit option overrides. Identical manifests must lead to
/// byte-identical outputs.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::map<std::string, std::string> overrides;  // flag name -> value
  std::string out_dir;
  std::string input_hash;  // "fnv1a64:<16 hex digits>"

  std::string to_text() const;
  static RunManifest parse(const std::string& text, const std::string& origin);
  static RunManifest load(const std::string& path);
};

/// FNV-1a over the raw bytes; stable and dependency-free.
std::uint64_t fnv1a64(const std::string& bytes);
/// "fnv1a64:" + 16 lowercase hex digits of the file's content hash.
std::string hash_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace geon
