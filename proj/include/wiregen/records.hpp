#ifndef WIREGEN_RECORDS_HPP
#define WIREGEN_RECORDS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiregen/common.hpp"

namespace wiregen {

// All persisted artifacts (graph, index manifest, dataset, run records,
// reports) share one serialization: newline-delimited JSON with a versioned
// header line. ordered_json keeps key order stable so reruns are
// byte-identical.
using Json = nlohmann::ordered_json;

struct RecordFile {
  std::string format;  // e.g. "wiregen.graph"
  int version = 1;
  Json header_extra = Json::object();
  std::vector<Json> records;
};

inline std::string serialize_records(const RecordFile& f) {
  Json header = Json::object();
  header["format"] = f.format;
  header["version"] = f.version;
  for (auto it = f.header_extra.begin(); it != f.header_extra.end(); ++it) {
    header[it.key()] = it.value();
  }
  std::string out = header.dump();
  out += '\n';
  for (const auto& r : f.records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

inline RecordFile parse_records(std::string_view text, std::string_view expect_format = "") {
  RecordFile f;
  size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      throw Error(errc::parse, std::string("bad record line: ") + e.what());
    }
    if (first) {
      first = false;
      if (!j.contains("format") || !j.contains("version")) {
        throw Error(errc::format, "missing record file header");
      }
      f.format = j["format"].get<std::string>();
      f.version = j["version"].get<int>();
      if (!expect_format.empty() && f.format != expect_format) {
        throw Error(errc::format, "expected " + std::string(expect_format) + " file, found " + f.format);
      }
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "format" && it.key() != "version") f.header_extra[it.key()] = it.value();
      }
    } else {
      f.records.push_back(std::move(j));
    }
  }
  if (first) throw Error(errc::format, "empty record file");
  return f;
}

inline void save_records(const std::filesystem::path& p, const RecordFile& f) {
  write_file_atomic(p, serialize_records(f));
}

inline RecordFile load_records(const std::filesystem::path& p, std::string_view expect_format = "") {
  return parse_records(read_file(p), expect_format);
}

}  // namespace wiregen

#endif  // WIREGEN_RECORDS_HPP
