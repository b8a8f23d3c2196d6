#include <cstdint>
#include <fstream>
#include <sstream>

#include "ontotopic/error.hpp"
#include "ontotopic/rdf.hpp"

namespace ontotopic {

Term Term::iri(std::string value) {
  Term t;
  t.kind = Kind::kIri;
  t.value = std::move(value);
  return t;
}

Term Term::literal(std::string lexical, std::optional<std::string> datatype,
                   std::optional<std::string> language) {
  Term t;
  t.kind = Kind::kLiteral;
  t.value = std::move(lexical);
  t.datatype = std::move(datatype);
  t.language = std::move(language);
  return t;
}

TripleStore::TripleStore(std::vector<Triple> triples)
    : triples_(std::move(triples)) {
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    by_predicate_[t.predicate.value].push_back(i);
    if (t.predicate.value == vocab::kRdfType && t.object.is_iri()) {
      type_of_[t.subject.value].insert(t.object.value);
    }
  }
}

const std::set<std::string>& TripleStore::types(const std::string& node) const {
  static const std::set<std::string> kNone;
  auto it = type_of_.find(node);
  return it == type_of_.end() ? kNone : it->second;
}

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return i;
    }
    i += len;
  }
  return std::string_view::npos;
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no)
      : s_(line), line_no_(line_no) {}

  // Returns nullopt for blank and comment-only lines.
  std::optional<Triple> parse() {
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;
    Triple t;
    t.subject = parse_subject();
    skip_ws();
    t.predicate = Term::iri(parse_iriref());
    skip_ws();
    t.object = parse_object();
    skip_ws();
    expect('.');
    skip_ws();
    if (!at_end() && peek() != '#') fail("trailing content after '.'");
    return t;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_no_, pos_ + 1);
  }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term parse_subject() {
    if (at_end()) fail("missing subject");
    if (peek() == '<') return Term::iri(parse_iriref());
    if (peek() == '_') return Term::iri(parse_blank());
    fail("subject must be an IRI or blank node");
  }

  Term parse_object() {
    if (at_end()) fail("missing object");
    switch (peek()) {
      case '<':
        return Term::iri(parse_iriref());
      case '_':
        return Term::iri(parse_blank());
      case '"':
        return parse_literal();
      default:
        fail("object must be an IRI, blank node or literal");
    }
  }

  std::uint32_t parse_hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (std::size_t k = 0; k < digits; ++k) {
      char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') {
        cp |= static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        fail("invalid hex digit in unicode escape");
      }
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      fail("unicode escape is not a scalar value");
    }
    return cp;
  }

  // After a backslash: \uXXXX or \UXXXXXXXX.
  void parse_uchar(std::string& out) {
    if (at_end()) fail("dangling backslash");
    char c = s_[pos_++];
    if (c == 'u') {
      append_utf8(out, parse_hex(4));
    } else if (c == 'U') {
      append_utf8(out, parse_hex(8));
    } else {
      --pos_;
      fail("invalid escape in IRI");
    }
  }

  std::string parse_iriref() {
    expect('<');
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = s_[pos_];
      if (c == '>') break;
      auto uc = static_cast<unsigned char>(c);
      if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`') {
        fail("character not allowed in IRI");
      }
      ++pos_;
      if (c == '\\') {
        parse_uchar(out);
      } else {
        out += c;
      }
    }
    ++pos_;
    if (out.empty()) fail("empty IRI");
    return out;
  }

  std::string parse_blank() {
    if (s_.substr(pos_, 2) != "_:") fail("expected blank node label");
    std::size_t start = pos_;
    pos_ += 2;
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '<' || c == '"') break;
      // '.' may appear inside a label but not at its end.
      if (c == '.' && (pos_ + 1 >= s_.size() || s_[pos_ + 1] == ' ' ||
                       s_[pos_ + 1] == '\t' || s_[pos_ + 1] == '#')) {
        break;
      }
      ++pos_;
    }
    if (pos_ == start + 2) fail("empty blank node label");
    return std::string(s_.substr(start, pos_ - start));
  }

  Term parse_literal() {
    expect('"');
    std::string lexical;
    while (true) {
      if (at_end()) fail("unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\n' || c == '\r') fail("raw line break in literal");
      if (c != '\\') {
        lexical += c;
        continue;
      }
      if (at_end()) fail("dangling backslash");
      char e = s_[pos_++];
      switch (e) {
        case 't': lexical += '\t'; break;
        case 'b': lexical += '\b'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 'f': lexical += '\f'; break;
        case '"': lexical += '"'; break;
        case '\'': lexical += '\''; break;
        case '\\': lexical += '\\'; break;
        case 'u':
        case 'U':
          --pos_;
          parse_uchar(lexical);
          break;
        default:
          --pos_;
          fail("invalid escape in literal");
      }
    }
    if (!at_end() && peek() == '^') {
      if (s_.substr(pos_, 2) != "^^") fail("expected '^^'");
      pos_ += 2;
      return Term::literal(std::move(lexical), parse_iriref());
    }
    if (!at_end() && peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      bool segment_start = true;
      bool first_segment = true;
      while (!at_end()) {
        char c = peek();
        bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        bool digit = c >= '0' && c <= '9';
        if (c == '-' && !segment_start) {
          segment_start = true;
          first_segment = false;
          ++pos_;
        } else if (alpha || (digit && !first_segment)) {
          segment_start = false;
          ++pos_;
        } else {
          break;
        }
      }
      if (pos_ == start || segment_start) fail("malformed language tag");
      return Term::literal(std::move(lexical), std::nullopt,
                           std::string(s_.substr(start, pos_ - start)));
    }
    return Term::literal(std::move(lexical));
  }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

void check_encoding(std::string_view text) {
  std::size_t bad = find_invalid_utf8(text);
  if (bad == std::string_view::npos) return;
  std::size_t line = 1;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i < bad; ++i) {
    if (text[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  throw EncodingError("invalid UTF-8 byte sequence", line,
                      bad - line_start + 1);
}

std::string escape_iri(std::string_view iri) {
  std::string out;
  out.reserve(iri.size());
  for (char c : iri) {
    auto uc = static_cast<unsigned char>(c);
    if (uc <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' ||
        c == '}' || c == '|' || c == '^' || c == '`' || c == '\\') {
      static constexpr char kHex[] = "0123456789ABCDEF";
      out += "\\u00";
      out += kHex[uc >> 4];
      out += kHex[uc & 0xF];
    } else {
      out += c;
    }
  }
  return out;
}

std::string escape_literal(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size() + 2);
  for (char c : lexical) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

TripleStore parse_ntriples(std::string_view text) {
  check_encoding(text);
  std::vector<Triple> triples;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (auto t = LineParser(line, line_no).parse()) {
      triples.push_back(std::move(*t));
    }
    start = end + 1;
  }
  return TripleStore(std::move(triples));
}

TripleStore parse_ntriples(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ntriples(std::string_view(buf.str()));
}

TripleStore load_ntriples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_ntriples(in);
}

std::string to_ntriples(const Term& term) {
  if (term.is_iri()) {
    if (term.value.starts_with("_:")) return term.value;
    return "<" + escape_iri(term.value) + ">";
  }
  std::string out = "\"" + escape_literal(term.value) + "\"";
  if (term.datatype) {
    out += "^^<" + escape_iri(*term.datatype) + ">";
  } else if (term.language) {
    out += "@" + *term.language;
  }
  return out;
}

void write_ntriples(std::ostream& out, const std::vector<Triple>& triples) {
  for (const Triple& t : triples) {
    out << to_ntriples(t.subject) << ' ' << to_ntriples(t.predicate) << ' '
        << to_ntriples(t.object) << " .\n";
  }
}

}  // namespace ontotopic
