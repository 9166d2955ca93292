#ifndef WIREGEN_KBASE_HPP
#define WIREGEN_KBASE_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "wiregen/jsx.hpp"
#include "wiregen/records.hpp"

namespace wiregen::kbase {

enum class EntityKind { library, component, feature, snippet };
enum class DomainLabel { geovisualization, charting, layout, forms, navigation, other };
enum class Relation { USES, PROVIDES, EXEMPLIFIES };

inline const char* entity_kind_name(EntityKind k) {
  switch (k) {
    case EntityKind::library: return "library";
    case EntityKind::component: return "component";
    case EntityKind::feature: return "feature";
    case EntityKind::snippet: return "snippet";
  }
  return "component";
}

inline EntityKind entity_kind_from(std::string_view s) {
  if (s == "library") return EntityKind::library;
  if (s == "component") return EntityKind::component;
  if (s == "feature") return EntityKind::feature;
  if (s == "snippet") return EntityKind::snippet;
  throw Error(errc::format, "unknown entity kind: " + std::string(s));
}

inline const char* domain_label_name(DomainLabel l) {
  switch (l) {
    case DomainLabel::geovisualization: return "geovisualization";
    case DomainLabel::charting: return "charting";
    case DomainLabel::layout: return "layout";
    case DomainLabel::forms: return "forms";
    case DomainLabel::navigation: return "navigation";
    case DomainLabel::other: return "other";
  }
  return "other";
}

inline DomainLabel domain_label_from(std::string_view s) {
  if (s == "geovisualization") return DomainLabel::geovisualization;
  if (s == "charting") return DomainLabel::charting;
  if (s == "layout") return DomainLabel::layout;
  if (s == "forms") return DomainLabel::forms;
  if (s == "navigation") return DomainLabel::navigation;
  if (s == "other") return DomainLabel::other;
  throw Error(errc::format, "unknown domain label: " + std::string(s));
}

inline const char* relation_name(Relation r) {
  switch (r) {
    case Relation::USES: return "USES";
    case Relation::PROVIDES: return "PROVIDES";
    case Relation::EXEMPLIFIES: return "EXEMPLIFIES";
  }
  return "USES";
}

inline Relation relation_from(std::string_view s) {
  if (s == "USES") return Relation::USES;
  if (s == "PROVIDES") return Relation::PROVIDES;
  if (s == "EXEMPLIFIES") return Relation::EXEMPLIFIES;
  throw Error(errc::format, "unknown relation: " + std::string(s));
}

struct KnowledgeEntity {
  std::string entity_id;  // content hash of (source_path, byte span)
  EntityKind kind = EntityKind::component;
  std::string name;
  std::vector<std::string> imports;
  DomainLabel domain_label = DomainLabel::other;
  std::string description;
  std::string sample_code;  // verbatim extract from the source file
  std::string source_path;
};

struct Edge {
  std::string src;
  Relation relation = Relation::USES;
  std::string dst;

  bool operator<(const Edge& o) const {
    if (src != o.src) return src < o.src;
    if (relation != o.relation) return relation < o.relation;
    return dst < o.dst;
  }
  bool operator==(const Edge& o) const {
    return src == o.src && relation == o.relation && dst == o.dst;
  }
};

struct KnowledgeGraph {
  std::map<std::string, KnowledgeEntity> nodes;  // by entity_id, sorted
  std::set<Edge> edges;

  const KnowledgeEntity* find(const std::string& id) const {
    auto it = nodes.find(id);
    return it == nodes.end() ? nullptr : &it->second;
  }
};

inline std::string make_entity_id(std::string_view source_path, size_t begin, size_t end) {
  std::string key;
  key.reserve(source_path.size() + 24);
  key += source_path;
  key += ':';
  key += std::to_string(begin);
  key += ':';
  key += std::to_string(end);
  return hex64(fnv1a64(key));
}

// "SitesMapPanel" -> "sites map panel"
inline std::string name_to_phrase(std::string_view name) {
  std::string out;
  for (size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (i > 0 && out.back() != ' ') out += ' ';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (c == '_' || c == '-') {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

inline constexpr double kUnparseableCoverage = 0.10;

struct IngestResult {
  std::vector<KnowledgeEntity> entities;
  std::vector<std::string> warnings;
};

// One component entity per exported component, one library entity per
// distinct import specifier, one snippet entity per component body.
inline IngestResult ingest_source(const std::string& path, const std::string& contents) {
  jsx::ParseResult parsed = jsx::parse_component_source(contents);
  if (parsed.error_token_coverage() > kUnparseableCoverage) {
    const auto& first = parsed.errors.front();
    throw Error(errc::ingestion, "unparseable source " + path + " at " +
                                     std::to_string(first.line) + ":" + std::to_string(first.col) +
                                     " (" + first.message + ")");
  }

  IngestResult out;
  std::vector<std::string> import_names;
  for (const auto& imp : parsed.imports) {
    if (imp.relative()) continue;  // workspace-local imports are not libraries
    if (std::find(import_names.begin(), import_names.end(), imp.specifier) == import_names.end()) {
      import_names.push_back(imp.specifier);
      KnowledgeEntity lib;
      lib.entity_id = make_entity_id("lib:" + imp.specifier, 0, 0);
      lib.kind = EntityKind::library;
      lib.name = imp.specifier;
      lib.description = "library " + imp.specifier;
      lib.source_path = path;
      lib.sample_code = contents.substr(imp.begin, imp.end - imp.begin);
      out.entities.push_back(std::move(lib));
    }
  }

  if (parsed.components.empty()) {
    out.warnings.push_back("no exported components in " + path);
    return out;
  }

  std::string file_comment = jsx::file_leading_comment(parsed);
  for (const auto& comp : parsed.components) {
    std::string name = comp.name.empty()
                           ? std::filesystem::path(path).stem().string()
                           : comp.name;
    std::string body = contents.substr(comp.begin, comp.end - comp.begin);
    std::string description = !comp.leading_comment.empty() ? comp.leading_comment
                              : !file_comment.empty()       ? file_comment
                                                            : name_to_phrase(name);

    KnowledgeEntity entity;
    entity.entity_id = make_entity_id(path, comp.begin, comp.end);
    entity.kind = EntityKind::component;
    entity.name = name;
    entity.imports = import_names;
    entity.description = description;
    entity.sample_code = body;
    entity.source_path = path;
    out.entities.push_back(entity);

    KnowledgeEntity snippet;
    snippet.entity_id = make_entity_id(path + "#snippet", comp.begin, comp.end);
    snippet.kind = EntityKind::snippet;
    snippet.name = name + " snippet";
    snippet.imports = import_names;
    snippet.description = description;
    snippet.sample_code = body;
    snippet.source_path = path;
    out.entities.push_back(std::move(snippet));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Domain classification

using Taxonomy = std::vector<std::pair<DomainLabel, std::vector<std::string>>>;

inline Taxonomy default_taxonomy() {
  return {
      {DomainLabel::geovisualization,
       {"leaflet", "map", "geojson", "gis", "choropleth", "marker", "tile", "openlayers",
        "geospatial"}},
      {DomainLabel::charting,
       {"chart", "plot", "graph", "axis", "series", "d3", "recharts", "histogram"}},
      {DomainLabel::layout, {"layout", "grid", "panel", "container", "flex", "sidebar", "banner"}},
      {DomainLabel::forms, {"form", "input", "select", "dropdown", "field", "button", "picker"}},
      {DomainLabel::navigation, {"nav", "router", "route", "link", "menu", "breadcrumb"}},
  };
}

// Priority for tie-breaks, best first.
inline int label_priority(DomainLabel l) {
  switch (l) {
    case DomainLabel::geovisualization: return 0;
    case DomainLabel::charting: return 1;
    case DomainLabel::layout: return 2;
    case DomainLabel::forms: return 3;
    case DomainLabel::navigation: return 4;
    case DomainLabel::other: return 5;
  }
  return 5;
}

inline DomainLabel classify_entity(const KnowledgeEntity& entity, const Taxonomy& taxonomy) {
  if (taxonomy.empty()) throw Error(errc::config, "empty classification taxonomy");
  std::string haystack = to_lower(entity.name) + " " + to_lower(entity.description);
  for (const auto& imp : entity.imports) haystack += " " + to_lower(imp);

  DomainLabel best = DomainLabel::other;
  int best_hits = 0;
  for (const auto& [label, keywords] : taxonomy) {
    int hits = 0;
    for (const auto& kw : keywords) {
      if (contains(haystack, to_lower(kw))) ++hits;
    }
    if (hits > best_hits ||
        (hits == best_hits && hits > 0 && label_priority(label) < label_priority(best))) {
      best = label;
      best_hits = hits;
    }
  }
  return best_hits == 0 ? DomainLabel::other : best;
}

// ---------------------------------------------------------------------------
// Graph construction

inline KnowledgeGraph build_graph(const std::vector<KnowledgeEntity>& entities) {
  KnowledgeGraph g;
  for (const auto& e : entities) {
    auto [it, inserted] = g.nodes.emplace(e.entity_id, e);
    if (!inserted) {
      const KnowledgeEntity& prev = it->second;
      bool same = prev.kind == e.kind && prev.name == e.name && prev.sample_code == e.sample_code &&
                  prev.source_path == e.source_path;
      if (!same) {
        throw Error(errc::validation, "duplicate entity_id " + e.entity_id + " from " +
                                          prev.source_path + " and " + e.source_path);
      }
      // re-ingestion of an unchanged file: keep the existing node
    }
  }

  std::map<std::string, std::string> library_by_name;
  for (const auto& [id, node] : g.nodes) {
    if (node.kind == EntityKind::library) library_by_name[node.name] = id;
  }

  for (const auto& [id, node] : g.nodes) {
    if (node.kind == EntityKind::component) {
      for (const auto& lib : node.imports) {
        auto it = library_by_name.find(lib);
        if (it != library_by_name.end()) g.edges.insert({id, Relation::USES, it->second});
      }
    } else if (node.kind == EntityKind::snippet) {
      // snippet ids derive from "<path>#snippet"; the component shares the span
      for (const auto& [cid, cnode] : g.nodes) {
        if (cnode.kind == EntityKind::component && cnode.source_path == node.source_path &&
            cnode.sample_code == node.sample_code) {
          g.edges.insert({id, Relation::EXEMPLIFIES, cid});
          break;
        }
      }
    }
  }
  return g;
}

inline std::vector<std::string> graph_neighbors(const KnowledgeGraph& g, const std::string& node,
                                                Relation relation) {
  if (!g.nodes.count(node)) throw Error(errc::lookup, "unknown entity: " + node);
  std::vector<std::string> out;
  for (const auto& e : g.edges) {
    if (e.src == node && e.relation == relation) out.push_back(e.dst);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Persistence: newline-delimited records, nodes then edges, stable order.

inline constexpr const char* kGraphFormat = "wiregen.graph";

inline Json entity_to_json(const KnowledgeEntity& e) {
  Json j = Json::object();
  j["record"] = "node";
  j["entity_id"] = e.entity_id;
  j["kind"] = entity_kind_name(e.kind);
  j["name"] = e.name;
  j["imports"] = e.imports;
  j["domain_label"] = domain_label_name(e.domain_label);
  j["description"] = e.description;
  j["sample_code"] = e.sample_code;
  j["source_path"] = e.source_path;
  return j;
}

inline KnowledgeEntity entity_from_json(const Json& j) {
  KnowledgeEntity e;
  e.entity_id = j.at("entity_id").get<std::string>();
  e.kind = entity_kind_from(j.at("kind").get<std::string>());
  e.name = j.at("name").get<std::string>();
  e.imports = j.at("imports").get<std::vector<std::string>>();
  e.domain_label = domain_label_from(j.at("domain_label").get<std::string>());
  e.description = j.at("description").get<std::string>();
  e.sample_code = j.at("sample_code").get<std::string>();
  e.source_path = j.at("source_path").get<std::string>();
  return e;
}

inline RecordFile graph_to_records(const KnowledgeGraph& g) {
  RecordFile f;
  f.format = kGraphFormat;
  f.header_extra["nodes"] = g.nodes.size();
  f.header_extra["edges"] = g.edges.size();
  for (const auto& [id, node] : g.nodes) f.records.push_back(entity_to_json(node));
  for (const auto& e : g.edges) {
    Json j = Json::object();
    j["record"] = "edge";
    j["src"] = e.src;
    j["relation"] = relation_name(e.relation);
    j["dst"] = e.dst;
    f.records.push_back(j);
  }
  return f;
}

inline KnowledgeGraph graph_from_records(const RecordFile& f) {
  KnowledgeGraph g;
  for (const auto& r : f.records) {
    std::string kind = r.at("record").get<std::string>();
    if (kind == "node") {
      KnowledgeEntity e = entity_from_json(r);
      g.nodes.emplace(e.entity_id, std::move(e));
    } else if (kind == "edge") {
      Edge e;
      e.src = r.at("src").get<std::string>();
      e.relation = relation_from(r.at("relation").get<std::string>());
      e.dst = r.at("dst").get<std::string>();
      if (!g.nodes.count(e.src) || !g.nodes.count(e.dst)) {
        throw Error(errc::validation, "edge references unknown node: " + e.src + " -> " + e.dst);
      }
      g.edges.insert(e);
    }
  }
  return g;
}

inline void save_graph(const std::filesystem::path& p, const KnowledgeGraph& g) {
  save_records(p, graph_to_records(g));
}

inline KnowledgeGraph load_graph(const std::filesystem::path& p) {
  return graph_from_records(load_records(p, kGraphFormat));
}

}  // namespace wiregen::kbase

#endif  // WIREGEN_KBASE_HPP
