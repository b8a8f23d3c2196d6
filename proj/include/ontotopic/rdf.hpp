#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ontotopic {

namespace vocab {
inline constexpr std::string_view kRdf =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfsLabel =
    "http://www.w3.org/2000/01/rdf-schema#label";
// Pseudo-concept for plain (untyped or language-tagged) literals.
inline constexpr std::string_view kRdfsLiteral =
    "http://www.w3.org/2000/01/rdf-schema#Literal";
}  // namespace vocab

// An RDF term. Blank nodes are carried as iri terms whose value starts with
// "_:"; they are never given special treatment downstream.
struct Term {
  enum class Kind { kIri, kLiteral };

  Kind kind = Kind::kIri;
  std::string value;
  std::optional<std::string> datatype;
  std::optional<std::string> language;

  static Term iri(std::string value);
  static Term literal(std::string lexical,
                      std::optional<std::string> datatype = std::nullopt,
                      std::optional<std::string> language = std::nullopt);

  bool is_iri() const { return kind == Kind::kIri; }
  bool is_literal() const { return kind == Kind::kLiteral; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Immutable triple multiset with predicate and rdf:type indexes.
class TripleStore {
 public:
  TripleStore() = default;
  explicit TripleStore(std::vector<Triple> triples);

  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  // Positions in triples() for each predicate IRI.
  const std::map<std::string, std::vector<std::size_t>>& by_predicate() const {
    return by_predicate_;
  }
  // Node IRI -> classes asserted through rdf:type.
  const std::map<std::string, std::set<std::string>>& type_of() const {
    return type_of_;
  }
  const std::set<std::string>& types(const std::string& node) const;

 private:
  std::vector<Triple> triples_;
  std::map<std::string, std::vector<std::size_t>> by_predicate_;
  std::map<std::string, std::set<std::string>> type_of_;
};

// Parses N-Triples. Every well-formed statement becomes one triple, duplicates
// included. Throws EncodingError on invalid UTF-8 and ParseError on a
// malformed line.
TripleStore parse_ntriples(std::istream& in);
TripleStore parse_ntriples(std::string_view text);
TripleStore load_ntriples(const std::string& path);

// Canonical N-Triples output, one statement per line.
void write_ntriples(std::ostream& out, const std::vector<Triple>& triples);
std::string to_ntriples(const Term& term);

}  // namespace ontotopic
