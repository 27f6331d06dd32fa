#include <cctype>
#include <set>

#include "catmig/error.hpp"
#include "catmig/frontend/source.hpp"

namespace catmig::frontend {

std::string describe(const std::string& file, Position pos) {
  std::string at = std::to_string(pos.line) + ":" + std::to_string(pos.column);
  return file.empty() ? at : file + ":" + at;
}

namespace {

bool is_id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '!' || c == '#' || c == '$' ||
         c == '\'' || c == '@';
}

enum class Tok { Ident, String, LBrace, RBrace, Semi, Comma, Colon, Equals, Dot, Arrow, End };

std::string_view tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string literal";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Position pos;
};

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& path) : text_(text), path_(path) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = pos_;
      if (i_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[i_];
      if (c == '"') {
        t.kind = Tok::String;
        t.text = string_literal();
      } else if (c == '-' && peek(1) == '>') {
        t.kind = Tok::Arrow;
        advance(2);
      } else if (is_id_char(c) || (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        t.kind = Tok::Ident;
        t.text += c;
        advance(1);
        while (i_ < text_.size() && is_id_char(text_[i_])) {
          t.text += text_[i_];
          advance(1);
        }
      } else {
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case ';': t.kind = Tok::Semi; break;
          case ',': t.kind = Tok::Comma; break;
          case ':': t.kind = Tok::Colon; break;
          case '=': t.kind = Tok::Equals; break;
          case '.': t.kind = Tok::Dot; break;
          default: fail(pos_, std::string("unexpected character '") + c + "'");
        }
        advance(1);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t k) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < text_.size(); ++k) {
      if (text_[i_++] == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else {
        ++pos_.column;
      }
    }
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '/' && peek(1) == '/') {
        while (i_ < text_.size() && text_[i_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  std::string string_literal() {
    Position start = pos_;
    advance(1);
    std::string out;
    for (;;) {
      if (i_ >= text_.size() || text_[i_] == '\n') fail(start, "unterminated string literal");
      char c = text_[i_];
      if (c == '"') {
        advance(1);
        return out;
      }
      if (c == '\\') {
        char e = peek(1);
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: fail(pos_, std::string("unknown escape '\\") + e + "'");
        }
        advance(2);
        continue;
      }
      out += c;
      advance(1);
    }
  }

  [[noreturn]] void fail(Position at, const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, describe(path_, at) + ": " + msg);
  }

  std::string_view text_;
  const std::string& path_;
  std::size_t i_ = 0;
  Position pos_;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::string& path) : toks_(std::move(tokens)), path_(path) {}

  EquationDecl equation_only() {
    EquationDecl eq;
    eq.lhs = path();
    expect(Tok::Equals);
    eq.rhs = path();
    expect(Tok::End);
    return eq;
  }

  SourceFile run() {
    SourceFile file;
    file.path = path_;
    while (!at(Tok::End)) {
      const Token& t = expect(Tok::Ident, "'schema', 'instance' or 'mapping'");
      if (t.text == "schema") {
        file.declarations.emplace_back(schema(t.pos));
      } else if (t.text == "instance") {
        file.declarations.emplace_back(instance(t.pos));
      } else if (t.text == "mapping") {
        file.declarations.emplace_back(mapping(t.pos));
      } else {
        fail(t, "expected 'schema', 'instance' or 'mapping', found '" + t.text + "'");
      }
    }
    return file;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_ident(std::string_view text) const { return at(Tok::Ident) && cur().text == text; }

  const Token& expect(Tok k, std::string_view what = {}) {
    if (!at(k)) {
      std::string found = at(Tok::Ident) ? "'" + cur().text + "'" : std::string(tok_name(cur().kind));
      fail(cur(), "expected " + std::string(what.empty() ? tok_name(k) : what) + ", found " + found);
    }
    return toks_[i_++];
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++i_;
    return true;
  }

  void keyword(std::string_view word) {
    if (!at_ident(word)) {
      std::string found = at(Tok::Ident) ? "'" + cur().text + "'" : std::string(tok_name(cur().kind));
      fail(cur(), "expected '" + std::string(word) + "', found " + found);
    }
    ++i_;
  }

  std::string name() { return expect(Tok::Ident, "a name").text; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, describe(path_, t.pos) + ": " + msg);
  }

  // Items separated by commas up to (not including) ';' or '}'.
  template <class F>
  void list(F item) {
    if (at(Tok::Semi) || at(Tok::RBrace)) return;
    do {
      item();
    } while (accept(Tok::Comma));
  }

  void end_section() {
    if (!accept(Tok::Semi) && !at(Tok::RBrace)) expect(Tok::Semi);
  }

  RawPath path() {
    const Token& first = expect(Tok::Ident, "a path");
    if (first.text == "id" && accept(Tok::Colon)) return RawPath::identity(name());
    std::vector<std::string> edges{first.text};
    while (accept(Tok::Dot)) edges.push_back(name());
    return RawPath::of(std::move(edges));
  }

  SchemaBlock schema(Position pos) {
    SchemaBlock b;
    b.pos = pos;
    b.decl.name = name();
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) {
      const Token& section = expect(Tok::Ident, "a schema section");
      expect(Tok::Colon);
      if (section.text == "entities") {
        list([&] { b.decl.entities.push_back(name()); });
      } else if (section.text == "types") {
        list([&] { b.decl.types.push_back(name()); });
      } else if (section.text == "edges") {
        list([&] {
          EdgeDecl e;
          e.name = name();
          expect(Tok::Colon);
          e.source = name();
          expect(Tok::Arrow);
          e.target = name();
          b.decl.edges.push_back(std::move(e));
        });
      } else if (section.text == "equations") {
        list([&] {
          EquationDecl eq;
          eq.lhs = path();
          expect(Tok::Equals);
          eq.rhs = path();
          b.decl.equations.push_back(std::move(eq));
        });
      } else {
        fail(section, "unknown schema section '" + section.text + "' (expected entities, types, edges or equations)");
      }
      end_section();
    }
    return b;
  }

  InstanceBlock instance(Position pos) {
    InstanceBlock b;
    b.pos = pos;
    b.decl.name = name();
    keyword("on");
    b.schema_pos = cur().pos;
    b.decl.schema = name();
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) {
      std::string target = name();
      expect(Tok::Equals);
      expect(Tok::LBrace);
      std::vector<std::string> ids;
      std::vector<EdgeAssignment> entries;
      bool is_map = false;
      bool first = true;
      if (!at(Tok::RBrace)) {
        do {
          const Token& x = expect(Tok::Ident, "an element id");
          bool arrow = at(Tok::Arrow);
          if (first) {
            is_map = arrow;
            first = false;
          } else if (arrow != is_map) {
            fail(x, is_map ? "expected 'x -> value' in an edge map" : "unexpected '->' in a carrier");
          }
          if (is_map) {
            expect(Tok::Arrow);
            if (at(Tok::String)) {
              entries.push_back({x.text, RawValue::quoted(expect(Tok::String).text)});
            } else {
              entries.push_back({x.text, RawValue::bare(expect(Tok::Ident, "an element id or literal").text)});
            }
          } else {
            ids.push_back(x.text);
          }
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBrace);
      end_section();
      if (is_map) {
        b.decl.edges.push_back({std::move(target), std::move(entries)});
      } else {
        b.decl.carriers.push_back({std::move(target), std::move(ids)});
      }
    }
    return b;
  }

  MappingBlock mapping(Position pos) {
    MappingBlock b;
    b.pos = pos;
    b.decl.name = name();
    expect(Tok::Colon);
    b.source_pos = cur().pos;
    b.decl.source = name();
    expect(Tok::Arrow);
    b.target_pos = cur().pos;
    b.decl.target = name();
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) {
      const Token& section = expect(Tok::Ident, "a mapping section");
      expect(Tok::Colon);
      if (section.text == "nodes") {
        list([&] {
          NodeAssignment a;
          a.source = name();
          expect(Tok::Arrow);
          a.target = name();
          b.decl.nodes.push_back(std::move(a));
        });
      } else if (section.text == "edges") {
        list([&] {
          EdgeImage e;
          e.edge = name();
          expect(Tok::Arrow);
          e.path = path();
          b.decl.edges.push_back(std::move(e));
        });
      } else {
        fail(section, "unknown mapping section '" + section.text + "' (expected nodes or edges)");
      }
      end_section();
    }
    return b;
  }

  std::vector<Token> toks_;
  const std::string& path_;
  std::size_t i_ = 0;
};

const std::string& decl_name(const Declaration& d) {
  return std::visit([](const auto& b) -> const std::string& { return b.decl.name; }, d);
}

}  // namespace

SourceFile parse_source(std::string_view text, const std::string& path) {
  SourceFile file = Parser(Lexer(text, path).run(), path).run();
  std::set<std::pair<std::size_t, std::string>> seen;
  for (const auto& d : file.declarations) {
    if (!seen.emplace(d.index(), decl_name(d)).second) {
      Position pos = std::visit([](const auto& b) { return b.pos; }, d);
      throw Error(ErrorCode::DuplicateName, describe(path, pos) + ": duplicate declaration '" + decl_name(d) + "'");
    }
  }
  return file;
}

EquationDecl parse_equation(std::string_view text) {
  const std::string where = "equation";
  return Parser(Lexer(text, where).run(), where).equation_only();
}

bool is_bare_token(std::string_view id) {
  if (id.empty()) return false;
  std::size_t start = 0;
  if (id[0] == '-') {
    if (id.size() < 2 || !std::isdigit(static_cast<unsigned char>(id[1]))) return false;
    start = 1;
  }
  for (std::size_t k = start; k < id.size(); ++k) {
    if (!is_id_char(id[k])) return false;
  }
  return true;
}

namespace {

template <class Block>
const Block* find_block(const SourceFile& f, std::string_view name) {
  for (const auto& d : f.declarations) {
    if (const auto* b = std::get_if<Block>(&d); b && b->decl.name == name) return b;
  }
  return nullptr;
}

}  // namespace

const SchemaBlock* SourceFile::find_schema(std::string_view name) const { return find_block<SchemaBlock>(*this, name); }
const InstanceBlock* SourceFile::find_instance(std::string_view name) const {
  return find_block<InstanceBlock>(*this, name);
}
const MappingBlock* SourceFile::find_mapping(std::string_view name) const {
  return find_block<MappingBlock>(*this, name);
}

}  // namespace catmig::frontend
