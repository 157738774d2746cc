#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "levykde/simulate.hpp"

namespace levykde {

// Shortest-exact formatting: 17 significant digits round-trip any double,
// written C-locale so files are identical across machines.
std::string format_full(double v);

// FNV-1a over a canonical string; used to stamp outputs with their config.
std::uint64_t fnv1a(std::string_view s);

struct PathMeta {
  std::string model_id;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> extra;
};

// Delimited text with '#'-prefixed key=value header lines followed by
// time,state rows.
void write_path(const SamplePath&, const PathMeta&, const std::filesystem::path&);
std::pair<SamplePath, PathMeta> read_path(const std::filesystem::path&);

// Same layout with time,left_limit,jump rows; the sojourn grid travels as a
// separate path file when needed.
void write_jump_log(const JumpLog&, const PathMeta&, const std::filesystem::path&);
std::pair<JumpLog, PathMeta> read_jump_log(const std::filesystem::path&);

}  // namespace levykde
