#ifndef WIREGEN_XML_HPP
#define WIREGEN_XML_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wiregen/common.hpp"

namespace wiregen::xml {

// Small non-validating XML reader, enough for SVG exports from office tools:
// elements, attributes, text, CDATA, comments, processing instructions and a
// DOCTYPE line. Namespace prefixes are stripped from element names.
// Attribute storage is a sorted map, so two serializations of the same
// logical document compare equal regardless of attribute order.

struct Node {
  std::string name;  // empty for text nodes
  std::string text;  // set for text nodes only
  std::map<std::string, std::string> attrs;
  std::vector<Node> children;
  size_t offset = 0;  // byte offset of the node start

  bool is_text() const { return name.empty(); }

  const std::string* attr(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? nullptr : &it->second;
  }

  // Concatenated text of direct text children.
  std::string inner_text() const {
    std::string out;
    for (const auto& c : children) {
      if (c.is_text()) out += c.text;
    }
    return out;
  }

  const Node* first_child(std::string_view tag) const {
    for (const auto& c : children) {
      if (c.name == tag) return &c;
    }
    return nullptr;
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Node parse_document() {
    skip_misc();
    if (pos_ >= src_.size() || src_[pos_] != '<') {
      fail("expected root element");
    }
    Node root = parse_element();
    skip_misc();
    if (pos_ < src_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw Error(errc::parse, what + " at byte " + std::to_string(pos_));
  }

  bool at(std::string_view s) const {
    return src_.size() - pos_ >= s.size() && src_.substr(pos_, s.size()) == s;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  void skip_until(std::string_view end, const std::string& what) {
    size_t p = src_.find(end, pos_);
    if (p == std::string_view::npos) fail("unterminated " + what);
    pos_ = p + end.size();
  }

  // Whitespace, comments, <?...?>, <!DOCTYPE ...> between markup.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (at("<!--")) {
        pos_ += 4;
        skip_until("-->", "comment");
      } else if (at("<?")) {
        pos_ += 2;
        skip_until("?>", "processing instruction");
      } else if (at("<!DOCTYPE") || at("<!doctype")) {
        skip_until(">", "doctype");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    size_t start = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.')
        ++pos_;
      else
        break;
    }
    if (pos_ == start) fail("expected name");
    std::string name(src_.substr(start, pos_ - start));
    size_t colon = name.rfind(':');
    if (colon != std::string::npos && colon + 1 < name.size()) name = name.substr(colon + 1);
    return name;
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size();) {
      if (raw[i] != '&') {
        out += raw[i++];
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) {
        out += raw[i++];
        continue;
      }
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "amp") out += '&';
      else if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else if (!ent.empty() && ent[0] == '#') {
        long code = std::strtol(std::string(ent.substr(ent[1] == 'x' || ent[1] == 'X' ? 2 : 1)).c_str(),
                                nullptr, (ent[1] == 'x' || ent[1] == 'X') ? 16 : 10);
        if (code > 0 && code < 128) out += static_cast<char>(code);
        // multi-byte code points are passed through untouched
        else out += std::string(raw.substr(i, semi - i + 1));
      } else {
        out += std::string(raw.substr(i, semi - i + 1));
      }
      i = semi + 1;
    }
    return out;
  }

  Node parse_element() {
    Node node;
    node.offset = pos_;
    ++pos_;  // consume '<'
    node.name = parse_name();
    // attributes
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size()) fail("unterminated start tag");
      if (at("/>")) {
        pos_ += 2;
        return node;
      }
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      std::string key = parse_name();
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != '=') fail("expected '=' in attribute");
      ++pos_;
      skip_ws();
      if (pos_ >= src_.size() || (src_[pos_] != '"' && src_[pos_] != '\'')) {
        fail("expected quoted attribute value");
      }
      char quote = src_[pos_++];
      size_t vstart = pos_;
      size_t vend = src_.find(quote, pos_);
      if (vend == std::string_view::npos) fail("unterminated attribute value");
      pos_ = vend + 1;
      size_t colon = key.rfind(':');
      if (colon != std::string::npos && colon + 1 < key.size() && key.substr(0, 5) != "xmlns") {
        key = key.substr(colon + 1);
      }
      node.attrs[key] = decode_entities(src_.substr(vstart, vend - vstart));
    }
    // content
    for (;;) {
      if (pos_ >= src_.size()) fail("unterminated element <" + node.name + ">");
      if (at("</")) {
        size_t close_at = pos_;
        pos_ += 2;
        std::string close = parse_name();
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != '>') fail("malformed close tag");
        ++pos_;
        if (close != node.name) {
          pos_ = close_at;
          fail("mismatched close tag </" + close + "> for <" + node.name + ">");
        }
        return node;
      }
      if (at("<!--")) {
        pos_ += 4;
        skip_until("-->", "comment");
        continue;
      }
      if (at("<![CDATA[")) {
        pos_ += 9;
        size_t end = src_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        Node text;
        text.offset = pos_;
        text.text = std::string(src_.substr(pos_, end - pos_));
        node.children.push_back(std::move(text));
        pos_ = end + 3;
        continue;
      }
      if (at("<?")) {
        pos_ += 2;
        skip_until("?>", "processing instruction");
        continue;
      }
      if (src_[pos_] == '<') {
        node.children.push_back(parse_element());
        continue;
      }
      size_t start = pos_;
      size_t next = src_.find('<', pos_);
      if (next == std::string_view::npos) fail("unterminated element <" + node.name + ">");
      pos_ = next;
      std::string raw(src_.substr(start, next - start));
      if (!trim(raw).empty()) {
        Node text;
        text.offset = start;
        text.text = decode_entities(raw);
        node.children.push_back(std::move(text));
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
};

}  // namespace detail

// Throws Error(errc::parse) with a byte offset on malformed input.
inline Node parse(std::string_view src) { return detail::Parser(src).parse_document(); }

}  // namespace wiregen::xml

#endif  // WIREGEN_XML_HPP
