#include <algorithm>
#include <cctype>
#include <set>

#include "ontotopic/error.hpp"
#include "ontotopic/rdf.hpp"
#include "ontotopic/sparql.hpp"

namespace ontotopic {

namespace {

std::string render_term(const SparqlTerm& t) {
  switch (t.kind) {
    case SparqlTerm::Kind::kVariable:
      return "?" + t.value;
    case SparqlTerm::Kind::kIri:
      return "<" + t.value + ">";
    case SparqlTerm::Kind::kLiteral: {
      std::string out = "\"";
      for (char c : t.value) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\r': out += "\\r"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      return out + "\"";
    }
  }
  return {};
}

std::string render_triple(const SparqlPattern& p) {
  return render_term(p.subject) + " " + render_term(p.predicate) + " " +
         render_term(p.object);
}

bool is_var_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

struct Token {
  enum class Kind { kWord, kVariable, kIri, kLiteral, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = pos_ - line_start_ + 1;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      char c = s_[pos_];
      if (c == '?' || c == '$') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < s_.size() && is_var_char(s_[pos_])) ++pos_;
        if (pos_ == start) fail(t, "empty variable name");
        t.kind = Token::Kind::kVariable;
        t.text = std::string(s_.substr(start, pos_ - start));
      } else if (c == '<') {
        std::size_t end = s_.find('>', pos_);
        if (end == std::string_view::npos) fail(t, "unterminated IRI");
        std::string_view body = s_.substr(pos_ + 1, end - pos_ - 1);
        if (body.empty()) fail(t, "empty IRI");
        for (char b : body) {
          if (static_cast<unsigned char>(b) <= 0x20 || b == '<' || b == '"') {
            fail(t, "character not allowed in IRI");
          }
        }
        t.kind = Token::Kind::kIri;
        t.text = std::string(body);
        pos_ = end + 1;
      } else if (c == '"') {
        t.kind = Token::Kind::kLiteral;
        t.text = read_literal(t);
      } else if (c == '{' || c == '}' || c == '.' || c == ',') {
        t.kind = Token::Kind::kPunct;
        t.text = std::string(1, c);
        ++pos_;
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
          ++pos_;
        }
        t.kind = Token::Kind::kWord;
        t.text = std::string(s_.substr(start, pos_ - start));
        std::transform(t.text.begin(), t.text.end(), t.text.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
      } else {
        fail(t, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw ParseError(msg, at.line, at.column);
  }

  void skip_space() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::string read_literal(const Token& at) {
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= s_.size() || s_[pos_] == '\n') fail(at, "unterminated literal");
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= s_.size()) fail(at, "dangling backslash");
      char e = s_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(at, "unsupported escape in literal");
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SelectQuery parse() {
    SelectQuery q;
    expect_word("select");
    q.distinct = accept_word("distinct");
    while (peek().kind == Token::Kind::kVariable) {
      q.projection.push_back(next().text);
      accept_punct(",");
    }
    if (q.projection.empty()) fail(peek(), "expected a projected variable");
    expect_word("where");
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind == Token::Kind::kWord && peek().text == "optional") {
        next();
        expect_punct("{");
        SparqlPattern p = triple();
        p.optional = true;
        accept_punct(".");
        expect_punct("}");
        q.patterns.push_back(std::move(p));
        accept_punct(".");
        continue;
      }
      q.patterns.push_back(triple());
      if (!accept_punct(".") && !is_punct("}")) fail(peek(), "expected '.' or '}'");
    }
    expect_punct("}");
    if (peek().kind != Token::Kind::kEnd) fail(peek(), "trailing content after '}'");
    if (q.patterns.empty()) fail(peek(), "empty WHERE block");

    std::set<std::string> bound;
    for (const auto& p : q.patterns) {
      for (const SparqlTerm* t : {&p.subject, &p.predicate, &p.object}) {
        if (t->kind == SparqlTerm::Kind::kVariable) bound.insert(t->value);
      }
    }
    for (const auto& v : q.projection) {
      if (!bound.contains(v)) {
        throw ParseError("projected variable ?" + v + " does not occur in WHERE",
                         1);
      }
    }
    return q;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw ParseError(msg + (at.kind == Token::Kind::kEnd ? " at end of input"
                                                         : " near '" + at.text + "'"),
                     at.line, at.column);
  }

  bool is_punct(const char* p) const {
    return peek().kind == Token::Kind::kPunct && peek().text == p;
  }
  bool accept_punct(const char* p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect_punct(const char* p) {
    if (!accept_punct(p)) fail(peek(), std::string("expected '") + p + "'");
  }
  bool accept_word(const char* w) {
    if (peek().kind != Token::Kind::kWord || peek().text != w) return false;
    next();
    return true;
  }
  void expect_word(const char* w) {
    if (!accept_word(w)) fail(peek(), std::string("expected '") + w + "'");
  }

  SparqlTerm term(bool predicate_position) {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::kVariable:
        return SparqlTerm::var(next().text);
      case Token::Kind::kIri:
        return SparqlTerm::iri(next().text);
      case Token::Kind::kLiteral:
        if (predicate_position) fail(t, "literal in predicate position");
        return SparqlTerm::literal(next().text);
      case Token::Kind::kWord:
        if (predicate_position && t.text == "a") {
          next();
          return SparqlTerm::iri(std::string(vocab::kRdfType));
        }
        [[fallthrough]];
      default:
        fail(t, "expected a variable, IRI or literal");
    }
  }

  SparqlPattern triple() {
    SparqlPattern p;
    if (peek().kind == Token::Kind::kLiteral) fail(peek(), "literal subject");
    p.subject = term(false);
    p.predicate = term(true);
    p.object = term(false);
    return p;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render_select(const SelectQuery& q) {
  std::string out = q.distinct ? "select distinct" : "select";
  for (const auto& v : q.projection) out += " ?" + v;
  out += " where {\n";
  for (const auto& p : q.patterns) {
    if (p.optional) {
      out += "  Optional { " + render_triple(p) + " } .\n";
    } else {
      out += "  " + render_triple(p) + " .\n";
    }
  }
  out += "}\n";
  return out;
}

SelectQuery parse_select(std::string_view text) {
  return Parser(Lexer(text).run()).parse();
}

}  // namespace ontotopic
