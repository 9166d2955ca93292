#ifndef WIREGEN_JSX_HPP
#define WIREGEN_JSX_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wiregen/common.hpp"

namespace wiregen::jsx {

// Error-tolerant structural parser for the JSX-flavoured component dialect
// used by the corpus and by generated pages. It does not build a full AST:
// it lexes with comment/string awareness, balances (), [], {} into matched
// pairs, records error nodes with spans where the structure breaks, and
// extracts imports, exported components and leading comments. Error-node
// token coverage drives the "unparseable" threshold during ingestion.

struct Token {
  enum class Kind { ident, number, string, template_str, punct };
  Kind kind;
  size_t begin = 0, end = 0;
  int line = 1, col = 1;
};

struct Comment {
  size_t begin = 0, end = 0;
  bool block = false;
  std::string text;  // trimmed, delimiters removed
};

struct ErrorNode {
  size_t begin = 0, end = 0;
  int line = 1, col = 1;
  std::string message;
};

struct ImportDecl {
  std::string specifier;               // "react-leaflet", "./SitePanel", ...
  std::vector<std::string> names;      // imported bindings
  size_t begin = 0, end = 0;
  int line = 1;

  bool relative() const {
    return starts_with(specifier, "./") || starts_with(specifier, "../") ||
           starts_with(specifier, "/");
  }
};

struct ExportedComponent {
  std::string name;
  size_t begin = 0, end = 0;  // source span including the export keyword
  std::string leading_comment;
  bool is_default = false;
};

struct ParseResult {
  std::string source;
  std::vector<Token> tokens;
  std::vector<Comment> comments;
  std::vector<ErrorNode> errors;
  std::vector<ImportDecl> imports;
  std::vector<ExportedComponent> components;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }

  double error_token_coverage() const {
    if (tokens.empty()) return errors.empty() ? 0.0 : 1.0;
    size_t covered = 0;
    for (const auto& t : tokens) {
      for (const auto& e : errors) {
        if (t.begin >= e.begin && t.begin < e.end) {
          ++covered;
          break;
        }
      }
    }
    return static_cast<double>(covered) / static_cast<double>(tokens.size());
  }

  std::string token_text(const Token& t) const { return source.substr(t.begin, t.end - t.begin); }
};

namespace detail {

class Lexer {
 public:
  Lexer(std::string_view src, ParseResult* out) : src_(src), out_(out) {}

  void run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        lex_line_comment();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        lex_block_comment();
        continue;
      }
      if (c == '"' || c == '\'') {
        lex_string(c);
        continue;
      }
      if (c == '`') {
        lex_template();
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number();
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        lex_ident();
        continue;
      }
      push_token(Token::Kind::punct, pos_, pos_ + 1);
      advance();
    }
  }

 private:
  char peek(size_t ahead) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance_to(size_t target) {
    while (pos_ < target && pos_ < src_.size()) advance();
  }

  void push_token(Token::Kind kind, size_t begin, size_t end) {
    Token t;
    t.kind = kind;
    t.begin = begin;
    t.end = end;
    t.line = line_;
    t.col = col_;
    out_->tokens.push_back(t);
  }

  void push_error(size_t begin, size_t end, int line, int col, std::string msg) {
    ErrorNode e;
    e.begin = begin;
    e.end = end;
    e.line = line;
    e.col = col;
    e.message = std::move(msg);
    out_->errors.push_back(std::move(e));
  }

  void lex_line_comment() {
    size_t begin = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n') advance();
    Comment c;
    c.begin = begin;
    c.end = pos_;
    c.block = false;
    c.text = trim(src_.substr(begin + 2, pos_ - begin - 2));
    out_->comments.push_back(std::move(c));
  }

  void lex_block_comment() {
    size_t begin = pos_;
    int line = line_, col = col_;
    size_t end = src_.find("*/", pos_ + 2);
    if (end == std::string_view::npos) {
      push_error(begin, src_.size(), line, col, "unterminated block comment");
      advance_to(src_.size());
      return;
    }
    Comment c;
    c.begin = begin;
    c.end = end + 2;
    c.block = true;
    c.text = trim(src_.substr(begin + 2, end - begin - 2));
    out_->comments.push_back(std::move(c));
    advance_to(end + 2);
  }

  void lex_string(char quote) {
    size_t begin = pos_;
    int line = line_, col = col_;
    advance();
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (c == quote) {
        advance();
        push_token(Token::Kind::string, begin, pos_);
        return;
      }
      if (c == '\n') break;  // strings do not span lines
      advance();
    }
    push_error(begin, pos_, line, col, "unterminated string literal");
    push_token(Token::Kind::string, begin, pos_);
  }

  void lex_template() {
    size_t begin = pos_;
    int line = line_, col = col_;
    advance();
    int expr_depth = 0;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (expr_depth == 0 && c == '`') {
        advance();
        push_token(Token::Kind::template_str, begin, pos_);
        return;
      }
      if (expr_depth == 0 && c == '$' && peek(1) == '{') {
        expr_depth = 1;
        advance();
        advance();
        continue;
      }
      if (expr_depth > 0) {
        if (c == '{') ++expr_depth;
        if (c == '}') --expr_depth;
      }
      advance();
    }
    push_error(begin, src_.size(), line, col, "unterminated template literal");
    push_token(Token::Kind::template_str, begin, src_.size());
  }

  void lex_number() {
    size_t begin = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      advance();
    push_token(Token::Kind::number, begin, pos_);
  }

  void lex_ident() {
    size_t begin = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_' || src_[pos_] == '$'))
      advance();
    push_token(Token::Kind::ident, begin, pos_);
  }

  std::string_view src_;
  ParseResult* out_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

inline char matching_open(char close) {
  switch (close) {
    case ')': return '(';
    case ']': return '[';
    case '}': return '{';
  }
  return '\0';
}

}  // namespace detail

inline ParseResult parse_component_source(std::string_view src) {
  ParseResult result;
  result.source = std::string(src);
  detail::Lexer(src, &result).run();

  // Bracket balance pass. Produces depth per token and matched-pair map;
  // mismatches become error nodes.
  struct Open {
    char c;
    size_t token_index;
  };
  std::vector<Open> stack;
  std::vector<int> depth(result.tokens.size(), 0);
  std::map<size_t, size_t> match;  // open token index -> close token index

  for (size_t i = 0; i < result.tokens.size(); ++i) {
    const Token& t = result.tokens[i];
    depth[i] = static_cast<int>(stack.size());
    if (t.kind != Token::Kind::punct) continue;
    char c = result.source[t.begin];
    if (c == '(' || c == '[' || c == '{') {
      stack.push_back({c, i});
    } else if (c == ')' || c == ']' || c == '}') {
      char want = detail::matching_open(c);
      if (!stack.empty() && stack.back().c == want) {
        match[stack.back().token_index] = i;
        stack.pop_back();
        depth[i] = static_cast<int>(stack.size());
      } else {
        bool recovered = false;
        for (size_t s = stack.size(); s-- > 0;) {
          if (stack[s].c == want) {
            // unwind: everything above s opened without closing
            for (size_t u = stack.size(); u-- > s + 1;) {
              const Token& open_tok = result.tokens[stack[u].token_index];
              ErrorNode e;
              e.begin = open_tok.begin;
              e.end = t.end;
              e.line = open_tok.line;
              e.col = open_tok.col;
              e.message = std::string("unclosed '") + stack[u].c + "'";
              result.errors.push_back(std::move(e));
            }
            match[stack[s].token_index] = i;
            stack.resize(s);
            depth[i] = static_cast<int>(stack.size());
            recovered = true;
            break;
          }
        }
        if (!recovered) {
          ErrorNode e;
          e.begin = t.begin;
          e.end = t.end;
          e.line = t.line;
          e.col = t.col;
          e.message = std::string("unexpected '") + c + "'";
          result.errors.push_back(std::move(e));
        }
      }
    }
  }
  for (const auto& open : stack) {
    const Token& t = result.tokens[open.token_index];
    ErrorNode e;
    e.begin = t.begin;
    e.end = result.source.size();
    e.line = t.line;
    e.col = t.col;
    e.message = std::string("unclosed '") + open.c + "'";
    result.errors.push_back(std::move(e));
  }
  std::sort(result.errors.begin(), result.errors.end(),
            [](const ErrorNode& a, const ErrorNode& b) { return a.begin < b.begin; });

  auto text = [&](size_t i) { return result.token_text(result.tokens[i]); };
  auto is_punct = [&](size_t i, char c) {
    return result.tokens[i].kind == Token::Kind::punct && result.source[result.tokens[i].begin] == c;
  };

  // Import declarations at top level: import X from "spec"; import {A, B} from "spec";
  // import "spec";
  for (size_t i = 0; i < result.tokens.size(); ++i) {
    if (depth[i] != 0 || result.tokens[i].kind != Token::Kind::ident || text(i) != "import")
      continue;
    ImportDecl decl;
    decl.begin = result.tokens[i].begin;
    decl.line = result.tokens[i].line;
    size_t j = i + 1;
    bool saw_from = false;
    while (j < result.tokens.size()) {
      const Token& t = result.tokens[j];
      if (t.kind == Token::Kind::string) {
        std::string raw = text(j);
        decl.specifier = raw.size() >= 2 ? raw.substr(1, raw.size() - 2) : raw;
        decl.end = t.end;
        if (j + 1 < result.tokens.size() && is_punct(j + 1, ';')) decl.end = result.tokens[j + 1].end;
        break;
      }
      if (t.kind == Token::Kind::ident) {
        std::string w = text(j);
        if (w == "from") {
          saw_from = true;
        } else if (w != "import" && w != "as" && w != "type") {
          if (!saw_from) decl.names.push_back(w);
        }
      }
      if (is_punct(j, ';')) break;  // malformed import without specifier
      ++j;
    }
    if (!decl.specifier.empty()) {
      result.imports.push_back(decl);
      i = j;
    }
  }

  // Exported components at top level. Recognized forms:
  //   export default function Name(...) {...}
  //   export function Name(...) {...}
  //   export const Name = (...) => {...}
  //   export default (...) => {...}        (anonymous)
  auto leading_comment_for = [&](size_t offset) -> std::string {
    const Comment* best = nullptr;
    for (const auto& c : result.comments) {
      if (!c.block || c.end > offset) continue;
      std::string_view between = std::string_view(result.source).substr(c.end, offset - c.end);
      if (trim(between).empty() && (!best || c.begin > best->begin)) best = &c;
    }
    return best ? best->text : std::string();
  };

  for (size_t i = 0; i < result.tokens.size(); ++i) {
    if (depth[i] != 0 || result.tokens[i].kind != Token::Kind::ident || text(i) != "export")
      continue;
    ExportedComponent comp;
    comp.begin = result.tokens[i].begin;
    comp.leading_comment = leading_comment_for(comp.begin);
    size_t j = i + 1;
    if (j < result.tokens.size() && result.tokens[j].kind == Token::Kind::ident &&
        text(j) == "default") {
      comp.is_default = true;
      ++j;
    }
    if (j >= result.tokens.size()) break;
    std::string kw = result.tokens[j].kind == Token::Kind::ident ? text(j) : "";
    if (kw == "function") {
      if (j + 1 < result.tokens.size() && result.tokens[j + 1].kind == Token::Kind::ident) {
        comp.name = text(j + 1);
      }
    } else if (kw == "const" || kw == "let" || kw == "var") {
      if (j + 1 < result.tokens.size() && result.tokens[j + 1].kind == Token::Kind::ident) {
        comp.name = text(j + 1);
      }
    } else if (comp.is_default) {
      comp.name = "";  // anonymous default export
    } else {
      continue;  // export { ... } re-exports etc. are not components
    }

    // Body span: first '{' at or after j whose matched close exists; the
    // component ends at that close. Falls back to statement end.
    size_t end = result.source.size();
    for (size_t b = j; b < result.tokens.size(); ++b) {
      if (depth[b] == 0 && is_punct(b, ';') && b > j + 2) {
        end = result.tokens[b].end;
        break;
      }
      if (is_punct(b, '{') && depth[b] == 0) {
        auto it = match.find(b);
        end = it != match.end() ? result.tokens[it->second].end : result.source.size();
        break;
      }
    }
    comp.end = end;
    if (comp.name.empty() || std::isupper(static_cast<unsigned char>(comp.name[0]))) {
      result.components.push_back(comp);
    }
  }

  return result;
}

// The file-level leading block comment, used as a component description.
inline std::string file_leading_comment(const ParseResult& r) {
  if (r.comments.empty()) return "";
  const Comment& c = r.comments.front();
  if (!c.block) return "";
  if (!r.tokens.empty() && r.tokens.front().begin < c.begin) return "";
  return c.text;
}

}  // namespace wiregen::jsx

#endif  // WIREGEN_JSX_HPP
