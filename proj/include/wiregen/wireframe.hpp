#ifndef WIREGEN_WIREFRAME_HPP
#define WIREGEN_WIREFRAME_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wiregen/records.hpp"
#include "wiregen/xml.hpp"

namespace wiregen::wireframe {

struct Rect {
  double x = 0, y = 0, w = 0, h = 0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }

  bool contains_point(double px, double py) const {
    return px >= x && px <= right() && py >= y && py <= bottom();
  }

  double intersection_area(const Rect& o) const {
    double ix = std::max(0.0, std::min(right(), o.right()) - std::max(x, o.x));
    double iy = std::max(0.0, std::min(bottom(), o.bottom()) - std::max(y, o.y));
    return ix * iy;
  }

  bool operator==(const Rect& o) const { return x == o.x && y == o.y && w == o.w && h == o.h; }
};

enum class ElementKind { dropdown, chart, map, text, image, button, form, container, decor };

inline const char* kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::dropdown: return "dropdown";
    case ElementKind::chart: return "chart";
    case ElementKind::map: return "map";
    case ElementKind::text: return "text";
    case ElementKind::image: return "image";
    case ElementKind::button: return "button";
    case ElementKind::form: return "form";
    case ElementKind::container: return "container";
    case ElementKind::decor: return "decor";
  }
  return "container";
}

struct WireframeElement {
  std::string id;
  ElementKind kind = ElementKind::container;
  Rect bbox;
  std::map<std::string, std::string> annotations;
  std::map<std::string, std::string> style;
};

struct WireframeDocument {
  std::string source_name;
  Rect canvas;
  std::vector<WireframeElement> elements;
  std::vector<std::string> warnings;

  bool operator==(const WireframeDocument& o) const {
    if (!(canvas == o.canvas) || elements.size() != o.elements.size()) return false;
    for (size_t i = 0; i < elements.size(); ++i) {
      const auto& a = elements[i];
      const auto& b = o.elements[i];
      if (a.id != b.id || a.kind != b.kind || !(a.bbox == b.bbox) ||
          a.annotations != b.annotations || a.style != b.style)
        return false;
    }
    return true;
  }
};

// Fixed role -> kind table. Unknown roles fall back to container with a
// warning so hand-drawn mockups survive parsing.
inline std::optional<ElementKind> kind_for_role(std::string_view role) {
  std::string r = to_lower(trim(role));
  if (r == "dropdown" || r == "select" || r == "combobox") return ElementKind::dropdown;
  if (r == "chart" || r == "graph" || r == "plot" || r == "timeseries") return ElementKind::chart;
  if (r == "map" || r == "geovisualization" || r == "geomap") return ElementKind::map;
  if (r == "text" || r == "label" || r == "heading" || r == "paragraph" || r == "title")
    return ElementKind::text;
  if (r == "image" || r == "img" || r == "banner" || r == "thumbnail" || r == "logo")
    return ElementKind::image;
  if (r == "button") return ElementKind::button;
  if (r == "form" || r == "input" || r == "textfield" || r == "search") return ElementKind::form;
  if (r == "container" || r == "panel" || r == "section" || r == "nav" || r == "sidebar" ||
      r == "header" || r == "footer" || r == "card")
    return ElementKind::container;
  if (r == "decor") return ElementKind::decor;
  return std::nullopt;
}

namespace detail {

inline double attr_num(const xml::Node& n, const std::string& key, double fallback = 0.0) {
  const std::string* v = n.attr(key);
  if (!v) return fallback;
  // tolerate unit suffixes like "800px"
  try {
    return std::stod(*v);
  } catch (...) {
    return fallback;
  }
}

// translate(a[, b]) — the only transform the grammar supports.
inline std::pair<double, double> parse_translate(const std::string& transform) {
  size_t p = transform.find("translate");
  if (p == std::string::npos) return {0, 0};
  size_t open = transform.find('(', p);
  size_t close = transform.find(')', open);
  if (open == std::string::npos || close == std::string::npos) return {0, 0};
  std::string args = transform.substr(open + 1, close - open - 1);
  for (auto& c : args) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(args);
  double a = 0, b = 0;
  is >> a;
  if (!(is >> b)) b = 0;
  return {a, b};
}

inline Rect path_bbox(const std::string& d, double dx, double dy) {
  // bbox from coordinate extremes; handles absolute and relative commands by
  // tracking the current point, and includes curve control points.
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  double cx = 0, cy = 0, startx = 0, starty = 0;
  bool any = false;
  auto mark = [&](double x, double y) {
    minx = std::min(minx, x);
    miny = std::min(miny, y);
    maxx = std::max(maxx, x);
    maxy = std::max(maxy, y);
    any = true;
  };
  size_t i = 0;
  char cmd = 0;
  auto skip_sep = [&]() {
    while (i < d.size() && (std::isspace(static_cast<unsigned char>(d[i])) || d[i] == ',')) ++i;
  };
  auto read_num = [&](double& out) -> bool {
    skip_sep();
    size_t start = i;
    if (i < d.size() && (d[i] == '+' || d[i] == '-')) ++i;
    bool digits = false;
    while (i < d.size() && (std::isdigit(static_cast<unsigned char>(d[i])) || d[i] == '.')) {
      ++i;
      digits = true;
    }
    if (i < d.size() && (d[i] == 'e' || d[i] == 'E')) {
      ++i;
      if (i < d.size() && (d[i] == '+' || d[i] == '-')) ++i;
      while (i < d.size() && std::isdigit(static_cast<unsigned char>(d[i]))) ++i;
    }
    if (!digits) {
      i = start;
      return false;
    }
    out = std::stod(d.substr(start, i - start));
    return true;
  };
  while (i < d.size()) {
    skip_sep();
    if (i >= d.size()) break;
    if (std::isalpha(static_cast<unsigned char>(d[i]))) cmd = d[i++];
    bool rel = std::islower(static_cast<unsigned char>(cmd));
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
    auto pt = [&](double x, double y) {
      cx = rel ? cx + x : x;
      cy = rel ? cy + y : y;
      mark(cx, cy);
    };
    double a = 0, b = 0;
    switch (c) {
      case 'M':
      case 'L':
      case 'T':
        if (!read_num(a) || !read_num(b)) { i = d.size(); break; }
        pt(a, b);
        if (c == 'M') { startx = cx; starty = cy; cmd = rel ? 'l' : 'L'; }
        break;
      case 'H':
        if (!read_num(a)) { i = d.size(); break; }
        cx = rel ? cx + a : a;
        mark(cx, cy);
        break;
      case 'V':
        if (!read_num(a)) { i = d.size(); break; }
        cy = rel ? cy + a : a;
        mark(cx, cy);
        break;
      case 'C': {
        double x1, y1, x2, y2;
        if (!read_num(x1) || !read_num(y1) || !read_num(x2) || !read_num(y2) ||
            !read_num(a) || !read_num(b)) { i = d.size(); break; }
        mark(rel ? cx + x1 : x1, rel ? cy + y1 : y1);
        mark(rel ? cx + x2 : x2, rel ? cy + y2 : y2);
        pt(a, b);
        break;
      }
      case 'S':
      case 'Q': {
        double x1, y1;
        if (!read_num(x1) || !read_num(y1) || !read_num(a) || !read_num(b)) { i = d.size(); break; }
        mark(rel ? cx + x1 : x1, rel ? cy + y1 : y1);
        pt(a, b);
        break;
      }
      case 'A': {
        double rx, ry, rot, laf, sf;
        if (!read_num(rx) || !read_num(ry) || !read_num(rot) || !read_num(laf) ||
            !read_num(sf) || !read_num(a) || !read_num(b)) { i = d.size(); break; }
        pt(a, b);
        break;
      }
      case 'Z':
        cx = startx;
        cy = starty;
        break;
      default:
        ++i;  // unknown command byte, skip
        break;
    }
  }
  if (!any) return Rect{dx, dy, 0, 0};
  return Rect{minx + dx, miny + dy, maxx - minx, maxy - miny};
}

inline std::map<std::string, std::string> parse_style_attr(const xml::Node& n) {
  std::map<std::string, std::string> style;
  for (const char* key : {"fill", "stroke", "font-size"}) {
    if (const std::string* v = n.attr(key)) style[key] = *v;
  }
  if (const std::string* s = n.attr("style")) {
    for (const auto& decl : split(*s, ';')) {
      auto colon = decl.find(':');
      if (colon == std::string::npos) continue;
      std::string key = to_lower(trim(decl.substr(0, colon)));
      std::string val = trim(decl.substr(colon + 1));
      if (key == "fill" || key == "stroke" || key == "font-size") style[key] = val;
    }
  }
  return style;
}

struct Collector {
  WireframeDocument* doc;
  std::set<std::string> seen_ids;
  int synth_counter = 0;

  // Annotation grammar: the <desc> child holds semicolon-separated
  // "key: value" pairs; keys are case-insensitive, values trimmed.
  std::map<std::string, std::string> parse_annotations(const std::string& text) {
    std::map<std::string, std::string> out;
    for (const auto& seg : split(text, ';')) {
      std::string s = trim(seg);
      if (s.empty()) continue;
      auto colon = s.find(':');
      if (colon == std::string::npos) {
        doc->warnings.push_back("malformed annotation segment: " + s);
        continue;
      }
      std::string key = to_lower(trim(s.substr(0, colon)));
      std::string val = trim(s.substr(colon + 1));
      if (key.empty()) {
        doc->warnings.push_back("malformed annotation segment: " + s);
        continue;
      }
      out[key] = val;
    }
    return out;
  }

  void add_element(const xml::Node& n, Rect bbox, bool has_geometry) {
    const std::string* id_attr = n.attr("id");
    const xml::Node* desc = n.first_child("desc");
    if (!has_geometry && !id_attr && !desc) return;

    WireframeElement el;
    el.bbox = bbox;
    el.style = parse_style_attr(n);

    if (!id_attr && !desc) {
      // styling-only artwork: kept in the document, excluded from the tree
      el.id = "__decor" + std::to_string(++synth_counter);
      el.kind = ElementKind::decor;
      doc->elements.push_back(std::move(el));
      return;
    }

    if (id_attr) {
      el.id = *id_attr;
      if (!seen_ids.insert(el.id).second) {
        throw Error(errc::validation, "duplicate element id: " + el.id);
      }
    } else {
      el.id = "__el" + std::to_string(++synth_counter);
      doc->warnings.push_back("missing id, synthesized " + el.id);
    }

    if (desc) el.annotations = parse_annotations(desc->inner_text());

    auto role_it = el.annotations.find("role");
    if (role_it == el.annotations.end()) {
      el.kind = ElementKind::container;
      doc->warnings.push_back("missing role: " + el.id);
    } else if (auto k = kind_for_role(role_it->second)) {
      el.kind = *k;
    } else {
      el.kind = ElementKind::container;
      doc->warnings.push_back("unknown role '" + role_it->second + "': " + el.id);
    }
    doc->elements.push_back(std::move(el));
  }

  // Returns the union bbox of all geometry in the subtree, if any.
  std::optional<Rect> walk(const xml::Node& n, double dx, double dy) {
    const std::string& tag = n.name;
    if (tag == "defs" || tag == "metadata" || tag == "title" || tag == "style" ||
        tag == "desc" || n.is_text())
      return std::nullopt;

    if (tag == "g" || tag == "svg") {
      double gx = dx, gy = dy;
      if (tag == "g") {
        if (const std::string* t = n.attr("transform")) {
          auto [tx, ty] = parse_translate(*t);
          gx += tx;
          gy += ty;
        }
      }
      std::optional<Rect> box;
      for (const auto& child : n.children) {
        if (auto b = walk(child, gx, gy)) {
          if (!box) {
            box = b;
          } else {
            double x0 = std::min(box->x, b->x), y0 = std::min(box->y, b->y);
            double x1 = std::max(box->right(), b->right()), y1 = std::max(box->bottom(), b->bottom());
            box = Rect{x0, y0, x1 - x0, y1 - y0};
          }
        }
      }
      if (tag == "g") {
        Rect r = box.value_or(Rect{gx, gy, 0, 0});
        add_element(n, r, box.has_value());
      }
      return box;
    }

    std::optional<Rect> bbox;
    if (tag == "rect" || tag == "image") {
      bbox = Rect{attr_num(n, "x") + dx, attr_num(n, "y") + dy, attr_num(n, "width"),
                  attr_num(n, "height")};
    } else if (tag == "circle") {
      double r = attr_num(n, "r");
      bbox = Rect{attr_num(n, "cx") - r + dx, attr_num(n, "cy") - r + dy, 2 * r, 2 * r};
    } else if (tag == "ellipse") {
      double rx = attr_num(n, "rx"), ry = attr_num(n, "ry");
      bbox = Rect{attr_num(n, "cx") - rx + dx, attr_num(n, "cy") - ry + dy, 2 * rx, 2 * ry};
    } else if (tag == "text") {
      double fs = 16.0;
      auto style = parse_style_attr(n);
      if (auto it = style.find("font-size"); it != style.end()) {
        try {
          fs = std::stod(it->second);
        } catch (...) {
        }
      }
      std::string content = n.inner_text();
      double w = std::max(1.0, 0.6 * fs * static_cast<double>(content.size()));
      bbox = Rect{attr_num(n, "x") + dx, attr_num(n, "y") - fs + dy, w, 1.2 * fs};
    } else if (tag == "line") {
      double x1 = attr_num(n, "x1"), y1 = attr_num(n, "y1");
      double x2 = attr_num(n, "x2"), y2 = attr_num(n, "y2");
      bbox = Rect{std::min(x1, x2) + dx, std::min(y1, y2) + dy, std::fabs(x2 - x1),
                  std::fabs(y2 - y1)};
    } else if (tag == "polyline" || tag == "polygon") {
      const std::string* pts = n.attr("points");
      bbox = path_bbox(pts ? "M " + *pts : "", dx, dy);
    } else if (tag == "path") {
      const std::string* d = n.attr("d");
      bbox = path_bbox(d ? *d : "", dx, dy);
    } else {
      return std::nullopt;  // unsupported element
    }

    add_element(n, *bbox, true);
    return bbox;
  }
};

}  // namespace detail

inline WireframeDocument parse_svg(std::string_view bytes, std::string source_name = "") {
  xml::Node root = xml::parse(bytes);
  if (root.name != "svg") {
    throw Error(errc::format, "root element is <" + root.name + ">, expected <svg>");
  }
  WireframeDocument doc;
  doc.source_name = std::move(source_name);

  if (const std::string* vb = root.attr("viewBox")) {
    std::string v = *vb;
    for (auto& c : v) {
      if (c == ',') c = ' ';
    }
    std::istringstream is(v);
    is >> doc.canvas.x >> doc.canvas.y >> doc.canvas.w >> doc.canvas.h;
  } else {
    doc.canvas = Rect{0, 0, detail::attr_num(root, "width"), detail::attr_num(root, "height")};
  }
  if (doc.canvas.w <= 0 || doc.canvas.h <= 0) {
    throw Error(errc::format, "svg canvas has no positive width/height");
  }

  detail::Collector collector{&doc};
  for (const auto& child : root.children) collector.walk(child, 0, 0);
  return doc;
}

// ---------------------------------------------------------------------------
// Component tree

struct TreeNode {
  const WireframeElement* element = nullptr;  // null only for the synthetic root
  std::string id;
  ElementKind kind = ElementKind::container;
  Rect bbox;
  int depth = 0;
  std::vector<int> children;  // indices into ComponentTree::nodes
};

struct ComponentTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the synthetic root

  const TreeNode& root() const { return nodes[0]; }
  size_t node_count() const { return nodes.size(); }
};

inline constexpr double kContainmentRatio = 0.95;

namespace detail {

// True when candidate may contain el under the 95% rule. Zero-area elements
// are contained when their origin lies inside the candidate.
inline bool contains95(const Rect& candidate, const Rect& el) {
  double a = el.area();
  if (a <= 0.0) return candidate.contains_point(el.x, el.y);
  return candidate.intersection_area(el) >= kContainmentRatio * a;
}

}  // namespace detail

inline ComponentTree build_component_tree(const WireframeDocument& doc) {
  ComponentTree tree;
  TreeNode root;
  root.id = "__root";
  root.kind = ElementKind::container;
  root.bbox = doc.canvas;
  tree.nodes.push_back(root);

  std::vector<const WireframeElement*> els;
  for (const auto& e : doc.elements) {
    if (e.kind != ElementKind::decor) els.push_back(&e);
  }

  std::vector<int> node_of(els.size());
  for (size_t i = 0; i < els.size(); ++i) {
    TreeNode n;
    n.element = els[i];
    n.id = els[i]->id;
    n.kind = els[i]->kind;
    n.bbox = els[i]->bbox;
    tree.nodes.push_back(n);
    node_of[i] = static_cast<int>(tree.nodes.size() - 1);
  }

  // Parent = smallest container holding >= 95% of the element's area. A
  // container of equal area must precede the element in document order, which
  // keeps mutual containment acyclic. Ties on area fall to document order.
  std::vector<int> parent(els.size(), 0);
  for (size_t i = 0; i < els.size(); ++i) {
    int best = -1;
    for (size_t j = 0; j < els.size(); ++j) {
      if (i == j) continue;
      const Rect& cand = els[j]->bbox;
      if (!detail::contains95(cand, els[i]->bbox)) continue;
      if (cand.area() == els[i]->bbox.area() && j > i) continue;
      if (best < 0 || cand.area() < els[static_cast<size_t>(best)]->bbox.area() ||
          (cand.area() == els[static_cast<size_t>(best)]->bbox.area() &&
           j < static_cast<size_t>(best)))
        best = static_cast<int>(j);
    }
    parent[i] = best < 0 ? 0 : node_of[static_cast<size_t>(best)];
  }

  for (size_t i = 0; i < els.size(); ++i) {
    tree.nodes[static_cast<size_t>(parent[i])].children.push_back(node_of[i]);
  }

  // Sibling order: top-to-bottom then left-to-right by bbox origin.
  for (auto& node : tree.nodes) {
    std::stable_sort(node.children.begin(), node.children.end(), [&](int a, int b) {
      const Rect& ra = tree.nodes[static_cast<size_t>(a)].bbox;
      const Rect& rb = tree.nodes[static_cast<size_t>(b)].bbox;
      if (ra.y != rb.y) return ra.y < rb.y;
      return ra.x < rb.x;
    });
  }

  // Depths via DFS from the root.
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int idx = stack.back();
    stack.pop_back();
    for (int c : tree.nodes[static_cast<size_t>(idx)].children) {
      tree.nodes[static_cast<size_t>(c)].depth = tree.nodes[static_cast<size_t>(idx)].depth + 1;
      stack.push_back(c);
    }
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Outline serialization: one line per node,
//   "<kind> #<id> @(x,y,w,h) {k=v, k2=v2}"
// indented two spaces per depth. Byte-identical across runs.

namespace detail {

inline void outline_node(const ComponentTree& tree, int idx, std::string& out) {
  const TreeNode& n = tree.nodes[static_cast<size_t>(idx)];
  out.append(static_cast<size_t>(n.depth) * 2, ' ');
  out += kind_name(n.kind);
  out += " #";
  out += n.id;
  out += " @(";
  out += format_num(n.bbox.x);
  out += ",";
  out += format_num(n.bbox.y);
  out += ",";
  out += format_num(n.bbox.w);
  out += ",";
  out += format_num(n.bbox.h);
  out += ")";
  if (n.element && !n.element->annotations.empty()) {
    out += " {";
    bool first = true;
    for (const auto& [k, v] : n.element->annotations) {  // std::map iterates sorted
      if (!first) out += ", ";
      first = false;
      out += k;
      out += "=";
      out += v;
    }
    out += "}";
  }
  out += "\n";
  for (int c : n.children) outline_node(tree, c, out);
}

}  // namespace detail

inline std::string tree_to_outline(const ComponentTree& tree) {
  std::string out;
  detail::outline_node(tree, 0, out);
  return out;
}

// Canonical machine-readable dump (stable key order).
inline Json document_to_json(const WireframeDocument& doc) {
  Json j = Json::object();
  j["source_name"] = doc.source_name;
  j["canvas"] = {{"x", doc.canvas.x}, {"y", doc.canvas.y}, {"w", doc.canvas.w}, {"h", doc.canvas.h}};
  Json els = Json::array();
  for (const auto& e : doc.elements) {
    Json el = Json::object();
    el["id"] = e.id;
    el["kind"] = kind_name(e.kind);
    el["bbox"] = {{"x", e.bbox.x}, {"y", e.bbox.y}, {"w", e.bbox.w}, {"h", e.bbox.h}};
    el["annotations"] = Json::object();
    for (const auto& [k, v] : e.annotations) el["annotations"][k] = v;
    el["style"] = Json::object();
    for (const auto& [k, v] : e.style) el["style"][k] = v;
    els.push_back(el);
  }
  j["elements"] = els;
  j["warnings"] = doc.warnings;
  return j;
}

}  // namespace wiregen::wireframe

#endif  // WIREGEN_WIREFRAME_HPP
