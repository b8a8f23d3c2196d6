#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ontotopic {

// The SELECT subset used by generated queries: DISTINCT, a projection list,
// and a WHERE block of triple patterns where each OPTIONAL group wraps a
// single pattern.
struct SparqlTerm {
  enum class Kind { kVariable, kIri, kLiteral };
  Kind kind = Kind::kVariable;
  std::string value;  // variable name without '?', IRI, or lexical form

  static SparqlTerm var(std::string name) { return {Kind::kVariable, std::move(name)}; }
  static SparqlTerm iri(std::string iri) { return {Kind::kIri, std::move(iri)}; }
  static SparqlTerm literal(std::string lex) { return {Kind::kLiteral, std::move(lex)}; }

  friend auto operator<=>(const SparqlTerm&, const SparqlTerm&) = default;
};

struct SparqlPattern {
  SparqlTerm subject;
  SparqlTerm predicate;
  SparqlTerm object;
  bool optional = false;

  friend auto operator<=>(const SparqlPattern&, const SparqlPattern&) = default;
};

struct SelectQuery {
  bool distinct = true;
  std::vector<std::string> projection;  // variable names without '?'
  std::vector<SparqlPattern> patterns;

  friend bool operator==(const SelectQuery&, const SelectQuery&) = default;
};

std::string render_select(const SelectQuery& q);

// Keywords are case-insensitive; commas between projected variables, the
// keyword 'a', and a missing '.' before '}' are accepted. Throws ParseError
// with the line and column of the offending token.
SelectQuery parse_select(std::string_view text);

}  // namespace ontotopic
