#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ontotopic/clustering.hpp"
#include "ontotopic/ranking.hpp"
#include "ontotopic/schema.hpp"
#include "ontotopic/similarity.hpp"
#include "ontotopic/sparql.hpp"

namespace ontotopic {

struct QueryVariable {
  std::string name;         // without '?'
  std::string concept_iri;  // class, datatype, or rdfs:Literal
  std::string role;         // free-text note, e.g. "domain of <p>"
  bool literal = false;     // literal-valued: no type or label pattern
};

struct QueryPattern {
  enum class Kind { kType, kRelation, kLabel };
  Kind kind = Kind::kRelation;
  std::string subject;    // variable name
  std::string predicate;  // IRI
  std::string object;     // variable name, or the class IRI of a type pattern
  bool optional = false;
};

struct QueryGraph {
  std::vector<QueryVariable> variables;
  std::vector<QueryPattern> patterns;
  std::vector<std::string> projections;
  std::string source_topic;
  std::map<std::string, std::string> labels;  // IRI -> display label
  std::optional<std::string> share_hub;       // set by apply_share_template
  std::optional<std::string> share_clone;
  std::vector<std::string> notes;

  const QueryVariable* variable(const std::string& name) const;
  std::vector<std::string> relation_predicates() const;
  std::vector<std::string> concepts() const;
};

inline constexpr double kDefaultBeta = 0.2;
inline constexpr std::size_t kMaxQueriesPerTopic = 10;

// Member predicate with the highest in+out degree, lowest IRI on ties.
// Throws std::invalid_argument for an empty topic.
std::string seed_predicate(const TopicNode& topic, const DegreeIndex& idx);

// Breadth-first growth from `seed` over the topic's members. Each frontier
// predicate looks at its unvisited members in descending similarity (IRI on
// ties) and admits them while sm > beta; the first one at or below beta ends
// that frontier predicate's scan. Returns predicates in admission order.
std::vector<std::string> expand(const TopicNode& topic, const SimilarityMatrix& sm,
                                double beta, const std::string& seed);

// One relation pattern per predicate from its most frequent schema triple,
// one variable per concept (shared across predicates), plus rdf:type and
// rdfs:label patterns per non-literal variable. Predicates without schema
// triples are skipped with a note; when the relations fall apart into several
// components, only the one with the largest summed degree is kept.
QueryGraph bind_variables(const std::vector<std::string>& predicates,
                          const SchemaGraph& g);

// Clones the variable joined to the most relation patterns (at least two)
// and adds an optional copy of each of its patterns bound to the clone.
QueryGraph apply_share_template(QueryGraph qg, const SchemaGraph& g);

// False when a pattern names an undeclared variable, a projection is unbound,
// or the required relation patterns are disconnected.
bool is_valid(const QueryGraph& qg);

// Type patterns, required relations, optional relations, label patterns.
SelectQuery to_select(const QueryGraph& qg);
std::string render_sparql(const QueryGraph& qg);
std::string render_nl(const QueryGraph& qg);

struct GeneratedQuery {
  std::string topic_id;
  std::string nl_question;
  std::string sparql;
  double beta = kDefaultBeta;
  bool share_template = false;
  QueryGraph graph;
};

// Up to `limit` distinct queries: the requested beta first, then a sweep over
// 0.1..0.5, each without and with the share template.
std::vector<GeneratedQuery> generate_queries(const TopicNode& topic,
                                             const SchemaGraph& g,
                                             const SimilarityMatrix& sm,
                                             const DegreeIndex& idx,
                                             double beta = kDefaultBeta,
                                             std::size_t limit = kMaxQueriesPerTopic);

}  // namespace ontotopic
