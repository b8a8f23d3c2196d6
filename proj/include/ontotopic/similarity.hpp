#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ontotopic/schema.hpp"

namespace ontotopic {

// Dense row-major n x n matrix of doubles.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), values_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Concepts touching a predicate in either role.
struct ConceptSet {
  std::string predicate;
  std::vector<std::string> members;  // sorted, distinct
};

ConceptSet concept_set(const SchemaGraph& g, const std::string& predicate);

// Hop distances in the predicate adjacency graph, where two predicates are
// adjacent when they share at least one concept.
class DistanceMatrix {
 public:
  static constexpr int kInfinity = std::numeric_limits<int>::max();

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, kInfinity) {}

  std::size_t size() const { return n_; }
  int operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  int& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  bool finite(std::size_t i, std::size_t j) const {
    return (*this)(i, j) != kInfinity;
  }

 private:
  std::size_t n_ = 0;
  std::vector<int> d_;
};

// Rows and columns follow g.predicates() order.
DistanceMatrix distance_matrix(const SchemaGraph& g);

// |A ∩ B|² / (|A| |B|); 1 for the same predicate; 0 when either set is empty.
double shared_similarity(const ConceptSet& a, const ConceptSet& b);

// All-pairs shared scores in g.predicates() order.
SquareMatrix shared_matrix(const SchemaGraph& g);

struct ConnectionScores {
  SquareMatrix score;  // non-zero only where 2 <= l < infinity
  // Decomposition point achieving the max (lowest index on ties); n when the
  // pair is not a connection pair.
  std::vector<std::size_t> via;
};

// Max-product scores over shortest-path decompositions, filled by increasing
// distance. For l = 2 the factors are shared scores through a common
// neighbour; for l > 2 they are previously computed scores of the two halves.
ConnectionScores connection_similarity(const DistanceMatrix& l,
                                       const SquareMatrix& shared);

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<std::string> predicates, SquareMatrix values,
                   std::vector<std::size_t> via = {});

  std::size_t size() const { return predicates_.size(); }
  const std::vector<std::string>& predicates() const { return predicates_; }
  const SquareMatrix& values() const { return values_; }

  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  double at(const std::string& a, const std::string& b) const;
  std::size_t index_of(const std::string& predicate) const;
  bool contains(const std::string& predicate) const {
    return index_.contains(predicate);
  }

  // Predicate indices from i to j along the path that produced sm(i, j).
  // Empty when no path exists or no witness was recorded.
  std::vector<std::size_t> witness_path(std::size_t i, std::size_t j) const;

 private:
  std::vector<std::string> predicates_;
  std::map<std::string, std::size_t> index_;
  SquareMatrix values_;
  std::vector<std::size_t> via_;
};

// sm = connection score where l >= 2, shared score otherwise.
SimilarityMatrix similarity_matrix(const SchemaGraph& g);

// Header row "predicate<TAB>iri..." then one row per predicate; 6 decimals.
void write_similarity_tsv(std::ostream& out, const SimilarityMatrix& sm);
SimilarityMatrix read_similarity_tsv(std::istream& in);

// How two predicates relate structurally. Share kinds are direction-aware
// labels of a distance-1 pair; scoring ignores direction.
enum class PatternKind {
  kSame,
  kShareSubjectAndObject,
  kShareSubject,
  kShareObject,
  kChain,  // object of one is the subject of the other
  kConnection,
  kUnreachable,
};

PatternKind classify_pattern(const SchemaGraph& g, const DistanceMatrix& l,
                             std::size_t i, std::size_t j);
std::string to_string(PatternKind kind);

}  // namespace ontotopic
