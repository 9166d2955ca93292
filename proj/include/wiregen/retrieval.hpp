#ifndef WIREGEN_RETRIEVAL_HPP
#define WIREGEN_RETRIEVAL_HPP

#include <string>
#include <vector>

#include "wiregen/ivfadc.hpp"
#include "wiregen/kbase.hpp"

namespace wiregen::retrieval {

struct RetrievedEntity {
  kbase::KnowledgeEntity entity;
  double similarity = 0.0;
};

// Embedding text for a knowledge entity: what the index stores per node.
inline std::string entity_embedding_text(const kbase::KnowledgeEntity& e) {
  std::string text = std::string(kbase::entity_kind_name(e.kind)) + " " + e.name + "\n" +
                     kbase::domain_label_name(e.domain_label) + "\n" + e.description;
  if (!e.imports.empty()) text += "\nimports: " + join(e.imports, ", ");
  if (!e.sample_code.empty()) text += "\n" + e.sample_code.substr(0, 240);
  return text;
}

inline IvfadcIndex build_entity_index(const kbase::KnowledgeGraph& graph,
                                      EmbeddingProvider& provider, size_t k_c, size_t m,
                                      size_t k_s, std::uint64_t seed) {
  std::vector<std::pair<std::string, EmbeddingVector>> vectors;
  vectors.reserve(graph.nodes.size());
  for (const auto& [id, node] : graph.nodes) {
    vectors.emplace_back(id, embed(entity_embedding_text(node), provider));
  }
  size_t kc_eff = std::min(k_c, vectors.size());
  if (kc_eff == 0) throw Error(errc::training, "empty graph, nothing to index");
  return train_index(vectors, kc_eff, m, k_s, seed);
}

// Threshold retrieval: embeds the prompt, scans the index, converts squared
// L2 on unit vectors to cosine via sim = 1 - d^2/2, filters by the floor and
// returns at most k entities in descending similarity. The floor is applied
// to exact similarities, after re-ranking.
inline std::vector<RetrievedEntity> retrieve(const std::string& prompt,
                                             const kbase::KnowledgeGraph& graph,
                                             const IvfadcIndex& index, RetrievalParams params,
                                             EmbeddingProvider& provider) {
  if (trim(prompt).empty()) throw Error(errc::input, "empty retrieval prompt");
  params.validate(index.k_c);
  EmbeddingVector query = embed(prompt, provider);
  std::vector<SearchHit> hits = index.search(query, params);

  std::vector<RetrievedEntity> out;
  for (const auto& hit : hits) {
    double sim = 1.0 - hit.distance / 2.0;
    if (sim < params.sim_threshold) continue;
    const kbase::KnowledgeEntity* entity = graph.find(hit.id);
    if (!entity) throw Error(errc::lookup, "index id not in graph: " + hit.id);
    out.push_back({*entity, sim});
  }
  // search returns ascending distance, which is descending similarity
  return out;
}

}  // namespace wiregen::retrieval

#endif  // WIREGEN_RETRIEVAL_HPP
