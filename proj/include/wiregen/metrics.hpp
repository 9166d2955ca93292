#ifndef WIREGEN_METRICS_HPP
#define WIREGEN_METRICS_HPP

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "wiregen/common.hpp"

namespace wiregen::metrics {

// Unbiased pass@k estimator: 1 - C(n-c, k)/C(n, k), computed in product form
// so large n stays stable. When fewer than k samples fail, some success is
// guaranteed and the estimate is exactly 1.
inline double pass_at_k(long long n, long long c, long long k) {
  if (n < 0 || c < 0 || c > n) throw Error(errc::parameter, "need 0 <= c <= n");
  if (k < 1 || k > n) throw Error(errc::parameter, "need 1 <= k <= n");
  if (n - c < k) return 1.0;
  double fail = 1.0;
  for (long long i = 0; i < k; ++i) {
    fail *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
  }
  return 1.0 - fail;
}

// Whitespace split after punctuation detachment: every ASCII punctuation
// character becomes its own token.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::string spaced;
  spaced.reserve(text.size() * 2);
  for (char c : text) {
    if (std::ispunct(static_cast<unsigned char>(c))) {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : spaced) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        tokens.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

namespace detail {

inline std::map<std::string, int> ngram_counts(const std::vector<std::string>& tokens, size_t n) {
  std::map<std::string, int> counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (size_t j = 0; j < n; ++j) {
      if (j) key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

inline std::map<std::string, int> char_ngram_counts(const std::string& s, size_t n) {
  std::map<std::string, int> counts;
  if (s.size() < n) return counts;
  for (size_t i = 0; i + n <= s.size(); ++i) ++counts[s.substr(i, n)];
  return counts;
}

template <typename Map>
inline long long clipped_matches(const Map& cand, const Map& ref) {
  long long matches = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) matches += std::min(count, it->second);
  }
  return matches;
}

}  // namespace detail

inline constexpr double kBleuEpsilon = 1e-9;

// Geometric mean of clipped n-gram precisions times the brevity penalty.
// Zero-count precisions are floored at epsilon rather than zeroing the score.
inline double bleu(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int max_n = 4) {
  if (reference.empty()) throw Error(errc::input, "empty BLEU reference");
  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    auto cand = detail::ngram_counts(candidate, static_cast<size_t>(n));
    auto ref = detail::ngram_counts(reference, static_cast<size_t>(n));
    long long total = 0;
    for (const auto& [gram, count] : cand) total += count;
    double precision = kBleuEpsilon;
    if (total > 0) {
      long long matched = detail::clipped_matches(cand, ref);
      precision = matched > 0 ? static_cast<double>(matched) / static_cast<double>(total)
                              : kBleuEpsilon;
    }
    log_sum += std::log(precision);
  }
  double geo_mean = std::exp(log_sum / max_n);

  double r = static_cast<double>(reference.size());
  double c = static_cast<double>(candidate.size());
  double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
  return bp * geo_mean;
}

// Character n-gram F-beta averaged over orders 1..n; whitespace is removed
// before extraction and orders with no reference n-grams are skipped.
inline double chrf(const std::string& candidate, const std::string& reference, int n = 6,
                   double beta = 2.0) {
  if (trim(reference).empty()) throw Error(errc::input, "empty ChrF reference");
  auto strip_ws = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
  };
  std::string cand = strip_ws(candidate);
  std::string ref = strip_ws(reference);

  double sum = 0.0;
  int used = 0;
  double b2 = beta * beta;
  for (int order = 1; order <= n; ++order) {
    auto ref_counts = detail::char_ngram_counts(ref, static_cast<size_t>(order));
    if (ref_counts.empty()) continue;
    auto cand_counts = detail::char_ngram_counts(cand, static_cast<size_t>(order));
    long long ref_total = 0, cand_total = 0;
    for (const auto& [g, c] : ref_counts) ref_total += c;
    for (const auto& [g, c] : cand_counts) cand_total += c;
    long long matches = detail::clipped_matches(cand_counts, ref_counts);
    double precision = cand_total > 0 ? static_cast<double>(matches) / cand_total : 0.0;
    double recall = static_cast<double>(matches) / ref_total;
    double denom = b2 * precision + recall;
    double f = denom > 0 ? (1 + b2) * precision * recall / denom : 0.0;
    sum += f;
    ++used;
  }
  return used > 0 ? sum / used : 0.0;
}

namespace detail {

inline int levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

struct Shift {
  size_t start, len, dest;
};

// Apply "move block [start, start+len) so it begins at dest" where dest is an
// index into the sequence with the block removed.
inline std::vector<std::string> apply_shift(const std::vector<std::string>& seq, const Shift& s) {
  std::vector<std::string> block(seq.begin() + static_cast<std::ptrdiff_t>(s.start),
                                 seq.begin() + static_cast<std::ptrdiff_t>(s.start + s.len));
  std::vector<std::string> rest;
  rest.reserve(seq.size() - s.len);
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i < s.start || i >= s.start + s.len) rest.push_back(seq[i]);
  }
  size_t dest = std::min(s.dest, rest.size());
  std::vector<std::string> out;
  out.reserve(seq.size());
  out.insert(out.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(dest));
  out.insert(out.end(), block.begin(), block.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(dest), rest.end());
  return out;
}

inline constexpr size_t kMaxShiftLen = 10;
inline constexpr int kMaxShiftIterations = 25;
inline constexpr size_t kMaxShiftTrialsPerIter = 256;

}  // namespace detail

// Translation edit rate: (shifts + remaining word edits) / reference length,
// reported x100 so values above 100 signal candidates that overshoot the
// reference badly. Shift search is greedy best-first over candidate blocks
// that occur verbatim in the reference, bounded for tractability on long
// files.
inline double ter(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& reference) {
  if (reference.empty()) throw Error(errc::input, "empty TER reference");
  std::vector<std::string> current = candidate;
  int edits = detail::levenshtein(current, reference);
  int shifts = 0;

  // reference n-gram -> first start position
  std::map<std::string, size_t> ref_pos;
  for (size_t len = 1; len <= std::min(detail::kMaxShiftLen, reference.size()); ++len) {
    for (size_t i = 0; i + len <= reference.size(); ++i) {
      std::string key = std::to_string(len) + ":";
      for (size_t j = 0; j < len; ++j) {
        key += reference[i + j];
        key += '\x1f';
      }
      ref_pos.emplace(key, i);
    }
  }

  for (int iter = 0; iter < detail::kMaxShiftIterations && edits > 0; ++iter) {
    int best_edits = edits;
    detail::Shift best{0, 0, 0};
    size_t trials = 0;
    for (size_t len = std::min(detail::kMaxShiftLen, current.size()); len >= 1 && trials < detail::kMaxShiftTrialsPerIter; --len) {
      for (size_t start = 0; start + len <= current.size() && trials < detail::kMaxShiftTrialsPerIter; ++start) {
        std::string key = std::to_string(len) + ":";
        for (size_t j = 0; j < len; ++j) {
          key += current[start + j];
          key += '\x1f';
        }
        auto it = ref_pos.find(key);
        if (it == ref_pos.end()) continue;
        if (it->second == start) continue;  // already aligned with the match
        detail::Shift s{start, len, std::min(it->second, current.size() - len)};
        ++trials;
        int e = detail::levenshtein(detail::apply_shift(current, s), reference);
        if (e < best_edits) {
          best_edits = e;
          best = s;
        }
      }
    }
    if (best_edits >= edits) break;
    current = detail::apply_shift(current, best);
    edits = best_edits;
    ++shifts;
  }
  return 100.0 * static_cast<double>(shifts + edits) / static_cast<double>(reference.size());
}

inline double bleu_text(const std::string& candidate, const std::string& reference, int max_n = 4) {
  return bleu(tokenize(candidate), tokenize(reference), max_n);
}

inline double ter_text(const std::string& candidate, const std::string& reference) {
  return ter(tokenize(candidate), tokenize(reference));
}

}  // namespace wiregen::metrics

#endif  // WIREGEN_METRICS_HPP
