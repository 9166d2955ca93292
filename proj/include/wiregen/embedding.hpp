#ifndef WIREGEN_EMBEDDING_HPP
#define WIREGEN_EMBEDDING_HPP

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "wiregen/common.hpp"

namespace wiregen::retrieval {

struct EmbeddingVector {
  std::vector<double> values;

  size_t dim() const { return values.size(); }

  double norm() const {
    double s = 0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }

  void normalize() {
    double n = norm();
    if (n == 0) return;
    for (double& v : values) v /= n;
  }
};

inline double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  double s = 0;
  for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s;
}

inline double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual size_t dim() const = 0;
  virtual EmbeddingVector embed(const std::string& text) = 0;
};

// Deterministic test embedder: feature-hashed character trigrams with a fixed
// seed, unit-normalized. Boundary markers make one- and two-character inputs
// well defined.
class TestEmbedder final : public EmbeddingProvider {
 public:
  explicit TestEmbedder(size_t dim = 64, std::uint64_t seed = 0x5eedf00dULL)
      : dim_(dim), seed_(seed) {}

  size_t dim() const override { return dim_; }

  EmbeddingVector embed(const std::string& text) override {
    if (text.empty()) throw Error(errc::input, "cannot embed empty text");
    std::string padded = "^^" + to_lower(text) + "$$";
    EmbeddingVector v;
    v.values.assign(dim_, 0.0);
    for (size_t i = 0; i + 3 <= padded.size(); ++i) {
      std::uint64_t h = fnv1a64(std::string_view(padded).substr(i, 3), seed_);
      size_t idx = static_cast<size_t>(h % dim_);
      double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
      v.values[idx] += sign;
    }
    v.normalize();
    if (v.norm() == 0.0) {
      // all trigram contributions cancelled; fall back to a length feature
      v.values[text.size() % dim_] = 1.0;
    }
    return v;
  }

 private:
  size_t dim_;
  std::uint64_t seed_;
};

inline EmbeddingVector embed(const std::string& text, EmbeddingProvider& provider) {
  EmbeddingVector v = provider.embed(text);
  if (v.dim() != provider.dim()) {
    throw Error(errc::provider, "provider returned dimension " + std::to_string(v.dim()) +
                                    ", expected " + std::to_string(provider.dim()));
  }
  return v;
}

}  // namespace wiregen::retrieval

#endif  // WIREGEN_EMBEDDING_HPP
