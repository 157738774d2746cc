#include "levykde/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace levykde {

namespace {

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("failed to parse number '" + std::string(s) + "' in " + context);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

void write_header(std::ofstream& os, const char* kind, const PathMeta& meta) {
  os << "# levykde " << kind << " v1\n";
  os << "# model=" << meta.model_id << " delta=" << format_full(meta.delta)
     << " seed=" << meta.seed;
  for (const auto& [k, v] : meta.extra) os << " " << k << "=" << v;
  os << "\n";
}

struct ParsedFile {
  PathMeta meta;
  std::vector<std::string> rows;  // data lines, header row skipped
};

ParsedFile parse_file(const std::filesystem::path& file, const std::string& expect_columns) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  ParsedFile out;
  std::string line;
  bool saw_columns = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string token;
      while (ls >> token) {
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string val = token.substr(eq + 1);
        if (key == "model") {
          out.meta.model_id = val;
        } else if (key == "delta") {
          out.meta.delta = parse_double(val, file.string());
        } else if (key == "seed") {
          out.meta.seed = std::stoull(val);
        } else {
          out.meta.extra[key] = val;
        }
      }
      continue;
    }
    if (!saw_columns) {
      if (line != expect_columns) {
        throw std::runtime_error("unexpected column header in " + file.string() + ": '" +
                                 line + "'");
      }
      saw_columns = true;
      continue;
    }
    out.rows.push_back(line);
  }
  if (!saw_columns) {
    throw std::runtime_error("missing column header in " + file.string());
  }
  return out;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_path(const SamplePath& path, const PathMeta& meta,
                const std::filesystem::path& file) {
  if (path.dim != 1) throw std::invalid_argument("write_path: only dim == 1 paths");
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  PathMeta m = meta;
  m.delta = path.delta;
  m.seed = path.seed;
  write_header(os, "path", m);
  os << "time,state\n";
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    os << format_full(static_cast<double>(k) * path.delta) << ","
       << format_full(path.values[k]) << "\n";
  }
  if (!os) throw std::runtime_error("write failed for " + file.string());
}

std::pair<SamplePath, PathMeta> read_path(const std::filesystem::path& file) {
  ParsedFile parsed = parse_file(file, "time,state");
  SamplePath path;
  path.dim = 1;
  path.delta = parsed.meta.delta;
  path.seed = parsed.meta.seed;
  path.values.reserve(parsed.rows.size());
  for (const auto& row : parsed.rows) {
    const auto cells = split(row, ',');
    if (cells.size() != 2) throw std::runtime_error("bad row in " + file.string());
    path.values.push_back(parse_double(cells[1], file.string()));
  }
  if (path.values.size() < 2) {
    throw std::runtime_error("path file " + file.string() + " has fewer than two rows");
  }
  if (!(path.delta > 0.0)) {
    throw std::runtime_error("path file " + file.string() + " is missing delta");
  }
  return {std::move(path), std::move(parsed.meta)};
}

void write_jump_log(const JumpLog& log, const PathMeta& meta,
                    const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  PathMeta m = meta;
  m.extra["eps_jump"] = format_full(log.eps_jump);
  m.extra["substep"] = format_full(log.substep);
  write_header(os, "jumps", m);
  os << "time,left_limit,jump\n";
  for (const auto& ev : log.events) {
    os << format_full(ev.time) << "," << format_full(ev.left_limit) << ","
       << format_full(ev.jump) << "\n";
  }
  if (!os) throw std::runtime_error("write failed for " + file.string());
}

std::pair<JumpLog, PathMeta> read_jump_log(const std::filesystem::path& file) {
  ParsedFile parsed = parse_file(file, "time,left_limit,jump");
  JumpLog log;
  if (auto it = parsed.meta.extra.find("eps_jump"); it != parsed.meta.extra.end()) {
    log.eps_jump = parse_double(it->second, file.string());
  }
  if (auto it = parsed.meta.extra.find("substep"); it != parsed.meta.extra.end()) {
    log.substep = parse_double(it->second, file.string());
  }
  for (const auto& row : parsed.rows) {
    const auto cells = split(row, ',');
    if (cells.size() != 3) throw std::runtime_error("bad row in " + file.string());
    log.events.push_back(JumpEvent{parse_double(cells[0], file.string()),
                                   parse_double(cells[1], file.string()),
                                   parse_double(cells[2], file.string())});
  }
  return {std::move(log), std::move(parsed.meta)};
}

}  // namespace levykde
