#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ontotopic/clustering.hpp"
#include "ontotopic/schema.hpp"
#include "ontotopic/similarity.hpp"

namespace ontotopic {

struct PredicateDegree {
  std::size_t in = 0;   // distinct (concept, predicate) domain pairs
  std::size_t out = 0;  // distinct (predicate, concept) range pairs
  std::size_t pio() const { return in + out; }
};

struct DegreeIndex {
  std::map<std::string, PredicateDegree> predicates;
  std::map<std::string, std::size_t> concepts;  // incident pairs, either role

  std::size_t pio(const std::string& predicate) const;
};

DegreeIndex io_degrees(const SchemaGraph& g);

struct TopKEntry {
  std::string iri;
  std::size_t score = 0;
  std::vector<std::string> topics;  // leaves credited with this entry
};

struct TopKList {
  enum class Kind { kPredicate, kConcept };
  Kind kind = Kind::kPredicate;
  std::vector<TopKEntry> entries;
};

inline constexpr std::size_t kTopListLength = 20;

// Orders "T<depth>_<pos>" ids numerically; other strings sort after them.
bool topic_id_less(const std::string& a, const std::string& b);

// Highest-degree predicates or concepts, score descending then IRI. With
// leaves given, entries name the leaves containing them; with `dedup` a
// concept is credited only to the leaf where its degree inside the leaf's
// subgraph is highest (lowest topic id on ties).
TopKList top_k(const DegreeIndex& idx, TopKList::Kind kind,
               std::size_t k = kTopListLength,
               std::span<const TopicNode* const> leaves = {},
               const SchemaGraph* g = nullptr, bool dedup = false);

// Leaf ids whose induced subgraph contains each concept.
std::map<std::string, std::vector<std::string>> concept_topics(
    const SchemaGraph& g, std::span<const TopicNode* const> leaves);

struct TopicMeasures {
  double mean_similarity = 1.0;
  double mean_sw = 0.0;
  double density = 0.0;
};

// Mean sm over distinct member pairs (1 for a singleton), the node's mean
// silhouette, and the density of its induced subgraph (0 when that subgraph
// has fewer than two vertices).
TopicMeasures topic_measures(const TopicNode& topic, const SchemaGraph& g,
                             const SimilarityMatrix& sm);

enum Criterion : std::size_t {
  kTopConcepts = 0,
  kTopPredicates,
  kSimilarity,
  kSilhouetteWidth,
  kDensity,
  kCriterionCount,
};

struct TopicRankRow {
  std::string topic_id;
  std::array<std::size_t, kCriterionCount> ranks{};
  double overall = 0.0;
  std::size_t final_position = 0;

  // Raw criterion inputs.
  std::size_t top_concept_count = 0;
  std::size_t top_concept_degree = 0;
  std::size_t top_predicate_count = 0;
  std::size_t top_predicate_degree = 0;
  TopicMeasures measures;
};

// Competition ranks (1224) for each criterion, higher raw score is better.
// Rows come back ordered by final position: mean rank ascending, then the
// similarity rank, then topic id.
std::vector<TopicRankRow> rank_topics(std::span<const TopicNode* const> leaves,
                                      const SchemaGraph& g,
                                      const SimilarityMatrix& sm,
                                      const DegreeIndex& idx);

void write_rank_tsv(std::ostream& out, const std::vector<TopicRankRow>& rows);

}  // namespace ontotopic
