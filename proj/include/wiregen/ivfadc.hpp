#ifndef WIREGEN_IVFADC_HPP
#define WIREGEN_IVFADC_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wiregen/kmeans.hpp"
#include "wiregen/records.hpp"

namespace wiregen::retrieval {

// Two-level quantizer index: a coarse codebook routes each vector to an
// inverted list, and a product quantizer over sub-spaces of the residual
// refines it. Queries scan a handful of lists with per-query distance
// lookup tables; raw vectors are retained so a shortlist can be re-ranked
// exactly.

struct RetrievalParams {
  size_t k = 5;               // result count
  size_t nprobe = 4;          // coarse lists scanned per query
  double sim_threshold = 0.3; // cosine floor applied after exact re-rank
  bool rerank = true;

  void validate(size_t k_c) const {
    if (k < 1) throw Error(errc::parameter, "k must be >= 1");
    if (nprobe < 1 || nprobe > k_c) {
      throw Error(errc::parameter, "nprobe must be in [1, " + std::to_string(k_c) + "]");
    }
    if (sim_threshold < -1.0 || sim_threshold > 1.0) {
      throw Error(errc::parameter, "sim_threshold must be in [-1, 1]");
    }
  }
};

struct PostingEntry {
  std::string id;
  std::vector<std::uint16_t> code;  // m sub-codebook indices
};

struct SearchHit {
  std::string id;
  double distance;  // squared L2
};

class IvfadcIndex {
 public:
  size_t d = 0;
  size_t k_c = 0;
  size_t m = 0;
  size_t k_s = 0;
  std::uint64_t seed = 0;
  bool trained = false;

  std::vector<std::vector<double>> coarse_centroids;           // k_c x d
  std::vector<std::vector<std::vector<double>>> sub_codebooks; // m x k_s x (d/m)
  std::vector<std::vector<PostingEntry>> inverted_lists;       // k_c lists
  std::map<std::string, std::vector<double>> raw_vectors;      // for exact re-rank

  size_t sub_dim() const { return d / m; }

  size_t size() const {
    size_t n = 0;
    for (const auto& l : inverted_lists) n += l.size();
    return n;
  }

  // Nearest coarse centroid by squared L2; ties resolve to the lower index.
  size_t nearest_coarse(const std::vector<double>& y) const {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (size_t c = 0; c < coarse_centroids.size(); ++c) {
      double dsq = sq_distance(y, coarse_centroids[c]);
      if (dsq < best_d) {
        best_d = dsq;
        best = c;
      }
    }
    return best;
  }

  std::pair<size_t, std::vector<std::uint16_t>> encode(const EmbeddingVector& y) const {
    if (!trained) throw Error(errc::state, "index is not trained");
    if (y.dim() != d) {
      throw Error(errc::input, "vector dimension " + std::to_string(y.dim()) + ", index expects " +
                                   std::to_string(d));
    }
    size_t list_id = nearest_coarse(y.values);
    std::vector<std::uint16_t> code(m);
    const size_t sd = sub_dim();
    for (size_t j = 0; j < m; ++j) {
      double best_d = std::numeric_limits<double>::max();
      size_t best_c = 0;
      for (size_t cidx = 0; cidx < sub_codebooks[j].size(); ++cidx) {
        double dsq = 0;
        for (size_t t = 0; t < sd; ++t) {
          double r = y.values[j * sd + t] - coarse_centroids[list_id][j * sd + t];
          double diff = r - sub_codebooks[j][cidx][t];
          dsq += diff * diff;
        }
        if (dsq < best_d) {
          best_d = dsq;
          best_c = cidx;
        }
      }
      code[j] = static_cast<std::uint16_t>(best_c);
    }
    return {list_id, code};
  }

  // q(y) = coarse centroid + concatenated sub-codewords.
  std::vector<double> reconstruct(size_t list_id, const std::vector<std::uint16_t>& code) const {
    std::vector<double> out = coarse_centroids[list_id];
    const size_t sd = sub_dim();
    for (size_t j = 0; j < m; ++j) {
      for (size_t t = 0; t < sd; ++t) out[j * sd + t] += sub_codebooks[j][code[j]][t];
    }
    return out;
  }

  std::vector<SearchHit> search(const EmbeddingVector& x, const RetrievalParams& params) const {
    if (!trained) throw Error(errc::state, "index is not trained");
    params.validate(k_c);
    if (x.dim() != d) {
      throw Error(errc::input, "query dimension " + std::to_string(x.dim()) + ", index expects " +
                                   std::to_string(d));
    }

    // nprobe nearest coarse centroids
    std::vector<std::pair<double, size_t>> coarse_order(k_c);
    for (size_t c = 0; c < k_c; ++c) {
      coarse_order[c] = {sq_distance(x.values, coarse_centroids[c]), c};
    }
    std::sort(coarse_order.begin(), coarse_order.end());

    const size_t sd = sub_dim();
    std::vector<SearchHit> candidates;
    std::vector<double> table(m * k_s);
    for (size_t p = 0; p < params.nprobe; ++p) {
      size_t list_id = coarse_order[p].second;
      const auto& list = inverted_lists[list_id];
      if (list.empty()) continue;
      // per-list ADC table over (x - centroid) sub-residuals
      for (size_t j = 0; j < m; ++j) {
        for (size_t cidx = 0; cidx < k_s; ++cidx) {
          double dsq = 0;
          for (size_t t = 0; t < sd; ++t) {
            double r = x.values[j * sd + t] - coarse_centroids[list_id][j * sd + t];
            double diff = r - sub_codebooks[j][cidx][t];
            dsq += diff * diff;
          }
          table[j * k_s + cidx] = dsq;
        }
      }
      for (const auto& entry : list) {
        double dsq = 0;
        for (size_t j = 0; j < m; ++j) dsq += table[j * k_s + entry.code[j]];
        candidates.push_back({entry.id, dsq});
      }
    }

    auto by_distance = [](const SearchHit& a, const SearchHit& b) {
      if (a.distance != b.distance) return a.distance < b.distance;
      return a.id < b.id;
    };

    if (params.rerank) {
      size_t shortlist = std::min(4 * params.k, candidates.size());
      std::partial_sort(candidates.begin(),
                        candidates.begin() + static_cast<std::ptrdiff_t>(shortlist),
                        candidates.end(), by_distance);
      candidates.resize(shortlist);
      for (auto& hit : candidates) {
        hit.distance = sq_distance(x.values, raw_vectors.at(hit.id));
      }
    }
    std::sort(candidates.begin(), candidates.end(), by_distance);
    if (candidates.size() > params.k) candidates.resize(params.k);
    return candidates;
  }
};

inline IvfadcIndex train_index(const std::vector<std::pair<std::string, EmbeddingVector>>& vectors,
                               size_t k_c, size_t m, size_t k_s, std::uint64_t seed) {
  if (vectors.empty()) throw Error(errc::training, "no vectors to index");
  const size_t d = vectors[0].second.dim();
  if (d % m != 0) {
    throw Error(errc::config, "dimension " + std::to_string(d) + " not divisible by m=" +
                                  std::to_string(m));
  }
  if (vectors.size() < k_c) {
    throw Error(errc::training, "need at least k_c=" + std::to_string(k_c) + " vectors, got " +
                                    std::to_string(vectors.size()));
  }
  size_t ks_eff = std::min(k_s, vectors.size());

  IvfadcIndex index;
  index.d = d;
  index.k_c = k_c;
  index.m = m;
  index.k_s = ks_eff;
  index.seed = seed;

  std::vector<std::vector<double>> points;
  points.reserve(vectors.size());
  for (const auto& [id, v] : vectors) {
    if (v.dim() != d) throw Error(errc::input, "inconsistent vector dimensions");
    points.push_back(v.values);
  }

  KMeansResult coarse = kmeans(points, k_c, seed);
  index.coarse_centroids = coarse.centroids;

  // residual sub-vectors per sub-space
  const size_t sd = d / m;
  index.sub_codebooks.resize(m);
  for (size_t j = 0; j < m; ++j) {
    std::vector<std::vector<double>> sub_residuals;
    sub_residuals.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
      const auto& centroid = index.coarse_centroids[coarse.assignment[i]];
      std::vector<double> r(sd);
      for (size_t t = 0; t < sd; ++t) r[t] = points[i][j * sd + t] - centroid[j * sd + t];
      sub_residuals.push_back(std::move(r));
    }
    KMeansResult sub = kmeans(sub_residuals, ks_eff, seed + 1 + j);
    index.sub_codebooks[j] = sub.centroids;
  }

  index.trained = true;
  index.inverted_lists.assign(k_c, {});
  for (const auto& [id, v] : vectors) {
    auto [list_id, code] = index.encode(v);
    index.inverted_lists[list_id].push_back({id, std::move(code)});
    index.raw_vectors[id] = v.values;
  }
  return index;
}

// ---------------------------------------------------------------------------
// Persistence

inline constexpr const char* kIndexFormat = "wiregen.index";

inline RecordFile index_to_records(const IvfadcIndex& index) {
  RecordFile f;
  f.format = kIndexFormat;
  f.header_extra["d"] = index.d;
  f.header_extra["k_c"] = index.k_c;
  f.header_extra["m"] = index.m;
  f.header_extra["k_s"] = index.k_s;
  f.header_extra["seed"] = index.seed;

  {
    Json j = Json::object();
    j["record"] = "coarse_centroids";
    j["rows"] = index.coarse_centroids;
    f.records.push_back(j);
  }
  for (size_t s = 0; s < index.sub_codebooks.size(); ++s) {
    Json j = Json::object();
    j["record"] = "sub_codebook";
    j["sub_space"] = s;
    j["rows"] = index.sub_codebooks[s];
    f.records.push_back(j);
  }
  for (size_t l = 0; l < index.inverted_lists.size(); ++l) {
    for (const auto& entry : index.inverted_lists[l]) {
      Json j = Json::object();
      j["record"] = "posting";
      j["list"] = l;
      j["id"] = entry.id;
      j["code"] = entry.code;
      j["raw"] = index.raw_vectors.at(entry.id);
      f.records.push_back(j);
    }
  }
  return f;
}

inline IvfadcIndex index_from_records(const RecordFile& f) {
  IvfadcIndex index;
  index.d = f.header_extra.at("d").get<size_t>();
  index.k_c = f.header_extra.at("k_c").get<size_t>();
  index.m = f.header_extra.at("m").get<size_t>();
  index.k_s = f.header_extra.at("k_s").get<size_t>();
  index.seed = f.header_extra.at("seed").get<std::uint64_t>();
  index.inverted_lists.assign(index.k_c, {});
  for (const auto& r : f.records) {
    std::string kind = r.at("record").get<std::string>();
    if (kind == "coarse_centroids") {
      index.coarse_centroids = r.at("rows").get<std::vector<std::vector<double>>>();
    } else if (kind == "sub_codebook") {
      index.sub_codebooks.push_back(r.at("rows").get<std::vector<std::vector<double>>>());
    } else if (kind == "posting") {
      PostingEntry entry;
      entry.id = r.at("id").get<std::string>();
      entry.code = r.at("code").get<std::vector<std::uint16_t>>();
      index.inverted_lists[r.at("list").get<size_t>()].push_back(entry);
      index.raw_vectors[entry.id] = r.at("raw").get<std::vector<double>>();
    }
  }
  index.trained = !index.coarse_centroids.empty();
  return index;
}

inline void save_index(const std::filesystem::path& p, const IvfadcIndex& index) {
  save_records(p, index_to_records(index));
}

inline IvfadcIndex load_index(const std::filesystem::path& p) {
  return index_from_records(load_records(p, kIndexFormat));
}

}  // namespace wiregen::retrieval

#endif  // WIREGEN_IVFADC_HPP
