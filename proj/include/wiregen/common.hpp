#ifndef WIREGEN_COMMON_HPP
#define WIREGEN_COMMON_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wiregen {

enum class errc {
  parse,        // malformed input text
  format,       // recognizable text, wrong document shape
  validation,   // violated data invariant
  input,        // bad operation argument
  parameter,    // out-of-range numeric parameter
  config,       // missing or inconsistent configuration
  state,        // operation called in the wrong state
  training,     // index training impossible on given data
  ingestion,    // corpus file could not be ingested
  lookup,       // referenced entity does not exist
  provider,     // embedding provider failure (retryable)
  transport,    // LLM endpoint failure (retryable)
  environment,  // external tool missing or unusable
  serving,      // app not reachable over HTTP
  io            // filesystem failure
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parse: return "parse";
    case errc::format: return "format";
    case errc::validation: return "validation";
    case errc::input: return "input";
    case errc::parameter: return "parameter";
    case errc::config: return "config";
    case errc::state: return "state";
    case errc::training: return "training";
    case errc::ingestion: return "ingestion";
    case errc::lookup: return "lookup";
    case errc::provider: return "provider";
    case errc::transport: return "transport";
    case errc::environment: return "environment";
    case errc::serving: return "serving";
    case errc::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

// FNV-1a, used for stable content ids and mock determinism.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

// Deterministic splitmix64 generator. Distribution helpers avoid
// std::uniform_int_distribution so streams are identical across stdlibs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint32_t next_u32() { return static_cast<std::uint32_t>(next() >> 32); }

  // In [0, n). n must be > 0.
  std::size_t bounded(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  // In [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[bounded(v.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[bounded(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool contains(std::string_view s, std::string_view needle) {
  return s.find(needle) != std::string_view::npos;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  if (from.empty()) return s;
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

// Compact float formatting for outlines and reports: integral values print
// without a decimal point, others with up to six significant digits.
inline std::string format_num(double v) {
  if (v == 0.0) return "0";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(errc::io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes via a sibling temp file plus rename, so interrupted commands never
// leave a half-written artifact behind.
inline void write_file_atomic(const std::filesystem::path& p, std::string_view contents) {
  namespace fs = std::filesystem;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(errc::io, "short write to " + tmp.string());
  }
  fs::rename(tmp, p);
}

// (line, column) of a byte offset, both 1-based.
inline std::pair<int, int> line_col_at(std::string_view text, size_t offset) {
  int line = 1, col = 1;
  offset = std::min(offset, text.size());
  for (size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace wiregen

#endif  // WIREGEN_COMMON_HPP
