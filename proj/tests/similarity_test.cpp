#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ontotopic/error.hpp"
#include "ontotopic/similarity.hpp"

using namespace ontotopic;

namespace {

const std::string kEx = "http://ex.org/";

SchemaGraph graph(const std::vector<std::tuple<std::string, std::string, std::string>>& triples) {
  SchemaGraph g;
  for (const auto& [d, p, r] : triples) g.add({kEx + d, kEx + p, kEx + r});
  return g;
}

}  // namespace

TEST(ConceptSet, UnionOfRoles) {
  const auto g = graph({{"Drug", "target", "Target"}, {"Drug", "p", "Target"}, {"Drug", "p", "Enzyme"}});
  EXPECT_EQ(concept_set(g, kEx + "target").members,
            (std::vector<std::string>{kEx + "Drug", kEx + "Target"}));
  EXPECT_EQ(concept_set(g, kEx + "p").members,
            (std::vector<std::string>{kEx + "Drug", kEx + "Enzyme", kEx + "Target"}));
  EXPECT_THROW(concept_set(g, kEx + "missing"), LookupError);
  SchemaGraph declared = g;
  declared.declare_predicate(kEx + "empty");
  EXPECT_TRUE(concept_set(declared, kEx + "empty").members.empty());
}

TEST(Distance, ShareChainAndUnreachable) {
  // P1: A-B, P2: B-C, P3: C-D, Q: X-Y.
  const auto g = graph({{"A", "P1", "B"}, {"B", "P2", "C"}, {"C", "P3", "D"}, {"X", "Q", "Y"}});
  const auto l = distance_matrix(g);
  // Order: P1, P2, P3, Q.
  EXPECT_EQ(l(0, 0), 0);
  EXPECT_EQ(l(0, 1), 1);
  EXPECT_EQ(l(0, 2), 2);
  EXPECT_FALSE(l.finite(0, 3));
  EXPECT_FALSE(l.finite(3, 2));
}

TEST(Distance, MetricOnRandomGraphs) {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 300; ++n) {
    const auto g = oracle::random_schema(rng, 8, 12);
    const auto l = distance_matrix(g);
    for (std::size_t i = 0; i < l.size(); ++i) {
      EXPECT_EQ(l(i, i), 0);
      for (std::size_t j = 0; j < l.size(); ++j) {
        EXPECT_EQ(l(i, j), l(j, i));
        for (std::size_t k = 0; k < l.size(); ++k) {
          if (l.finite(i, k) && l.finite(k, j)) {
            ASSERT_TRUE(l.finite(i, j));
            EXPECT_LE(l(i, j), l(i, k) + l(k, j));
          }
        }
      }
    }
  }
}

TEST(SharedSimilarity, WorkedValues) {
  const ConceptSet a{"p1", {"A", "B"}};
  const ConceptSet b{"p2", {"B", "C"}};
  const ConceptSet c{"p3", {"D"}};
  EXPECT_DOUBLE_EQ(shared_similarity(a, b), 0.25);
  EXPECT_EQ(shared_similarity(a, c), 0.0);
  EXPECT_EQ(shared_similarity(a, a), 1.0);
  EXPECT_EQ(shared_similarity(a, ConceptSet{"p4", {}}), 0.0);
}

TEST(SharedSimilarity, NeverExceedsOne) {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 200; ++n) {
    const auto g = oracle::random_schema(rng, 8, 12);
    const auto s = shared_matrix(g);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        EXPECT_GE(s(i, j), 0.0);
        EXPECT_LE(s(i, j), 1.0);
      }
    }
  }
}

TEST(ConnectionSimilarity, SingleIntermediate) {
  DistanceMatrix l(3);
  SquareMatrix shared(3);
  const int dist[3][3] = {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) l(i, j) = dist[i][j];
    shared(i, i) = 1.0;
  }
  shared(0, 1) = shared(1, 0) = 0.5;
  shared(1, 2) = shared(2, 1) = 0.4;
  const auto c = connection_similarity(l, shared);
  EXPECT_DOUBLE_EQ(c.score(0, 2), 0.2);
  EXPECT_DOUBLE_EQ(c.score(2, 0), 0.2);
  EXPECT_EQ(c.via[0 * 3 + 2], 1u);
  EXPECT_EQ(c.score(0, 1), 0.0);
}

TEST(ConnectionSimilarity, MaxOverIntermediates) {
  // 0 -- 1 -- 3 and 0 -- 2 -- 3.
  DistanceMatrix l(4);
  SquareMatrix shared(4);
  const int dist[4][4] = {{0, 1, 1, 2}, {1, 0, 2, 1}, {1, 2, 0, 1}, {2, 1, 1, 0}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) l(i, j) = dist[i][j];
    shared(i, i) = 1.0;
  }
  shared(0, 1) = shared(1, 0) = 0.3;
  shared(1, 3) = shared(3, 1) = 0.2;
  shared(0, 2) = shared(2, 0) = 0.5;
  shared(2, 3) = shared(3, 2) = 0.4;
  const auto c = connection_similarity(l, shared);
  EXPECT_DOUBLE_EQ(c.score(0, 3), 0.2);
  EXPECT_EQ(c.via[0 * 4 + 3], 2u);

  // Equal products: the lower intermediate is the witness.
  shared(0, 1) = shared(1, 0) = 0.5;
  shared(1, 3) = shared(3, 1) = 0.4;
  EXPECT_EQ(connection_similarity(l, shared).via[0 * 4 + 3], 1u);
}

TEST(ConnectionSimilarity, UnreachableStaysZero) {
  DistanceMatrix l(2);
  l(0, 0) = l(1, 1) = 0;
  SquareMatrix shared(2);
  shared(0, 0) = shared(1, 1) = 1.0;
  const auto c = connection_similarity(l, shared);
  EXPECT_EQ(c.score(0, 1), 0.0);
}

TEST(SimilarityMatrix, ShareAndConnectionTopology) {
  // P1 and P2 share subject A; P3..P5 continue as a chain from P2.
  const auto g = graph({{"A", "P1", "B"}, {"A", "P2", "C"}, {"C", "P3", "D"}, {"D", "P4", "E"}, {"E", "P5", "F"}});
  const auto l = distance_matrix(g);
  const auto sm = similarity_matrix(g);
  EXPECT_EQ(classify_pattern(g, l, 0, 1), PatternKind::kShareSubject);
  EXPECT_EQ(classify_pattern(g, l, 1, 2), PatternKind::kChain);
  for (std::size_t j : {2u, 3u, 4u}) {
    EXPECT_EQ(classify_pattern(g, l, 0, j), PatternKind::kConnection);
    EXPECT_EQ(l(0, j), static_cast<int>(j));
  }
  EXPECT_EQ(classify_pattern(g, l, 2, 2), PatternKind::kSame);
  const auto oracle_sm = oracle::exhaustive_similarity(g);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(sm(i, j), oracle_sm[i][j], 1e-12);
  }
  EXPECT_DOUBLE_EQ(sm(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(sm(0, 4), 0.25 * 0.25 * 0.25 * 0.25);
  EXPECT_EQ(sm.witness_path(0, 4), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(SimilarityMatrix, ShareKindsAndUnreachable) {
  const auto g = graph({{"A", "P1", "B"}, {"C", "P2", "B"}, {"A", "P3", "B"}, {"X", "Q", "Y"}});
  const auto l = distance_matrix(g);
  EXPECT_EQ(classify_pattern(g, l, 0, 1), PatternKind::kShareObject);
  EXPECT_EQ(classify_pattern(g, l, 0, 2), PatternKind::kShareSubjectAndObject);
  EXPECT_EQ(classify_pattern(g, l, 0, 3), PatternKind::kUnreachable);
  EXPECT_EQ(to_string(PatternKind::kShareObject), "share-object");
  EXPECT_TRUE(similarity_matrix(g).witness_path(0, 3).empty());
}

TEST(SimilarityMatrix, MatchesOracleOnSixPredicateGraphs) {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 200; ++n) {
    const auto g = oracle::random_schema(rng, 6, 8);
    const auto sm = similarity_matrix(g);
    const auto want = oracle::exhaustive_similarity(g);
    for (std::size_t i = 0; i < sm.size(); ++i) {
      for (std::size_t j = 0; j < sm.size(); ++j) ASSERT_NEAR(sm(i, j), want[i][j], 1e-12);
    }
  }
}

TEST(SimilarityMatrix, DampingAndWitnessProducts) {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 300; ++n) {
    const auto g = oracle::random_schema(rng, 8, 12);
    const auto sm = similarity_matrix(g);
    const auto l = distance_matrix(g);
    const auto shared = shared_matrix(g);
    for (std::size_t i = 0; i < sm.size(); ++i) {
      for (std::size_t j = 0; j < sm.size(); ++j) {
        if (!l.finite(i, j) || l(i, j) < 2) continue;
        double best_share = 0.0;
        for (std::size_t k = 0; k < sm.size(); ++k) {
          if (k != i) best_share = std::max(best_share, shared(i, k));
        }
        EXPECT_LE(sm(i, j), best_share);
        const auto path = sm.witness_path(i, j);
        ASSERT_EQ(path.size(), static_cast<std::size_t>(l(i, j)) + 1);
        double product = 1.0;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
          EXPECT_EQ(l(path[s], path[s + 1]), 1);
          product *= shared(path[s], path[s + 1]);
        }
        EXPECT_NEAR(product, sm(i, j), 1e-12);
      }
    }
  }
}

TEST(SimilarityMatrix, LookupByName) {
  const auto g = graph({{"A", "P1", "B"}, {"B", "P2", "C"}});
  const auto sm = similarity_matrix(g);
  EXPECT_DOUBLE_EQ(sm.at(kEx + "P1", kEx + "P2"), 0.25);
  EXPECT_TRUE(sm.contains(kEx + "P2"));
  EXPECT_THROW(sm.index_of(kEx + "nope"), LookupError);
}

TEST(SimilarityMatrix, TsvUsesSixDecimalsAndRoundTrips) {
  const auto g = graph({{"A", "P1", "B"}, {"B", "P2", "C"}, {"C", "P3", "D"}});
  const auto sm = similarity_matrix(g);
  std::stringstream buf;
  write_similarity_tsv(buf, sm);
  const std::string text = buf.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "predicate\t" + kEx + "P1\t" + kEx + "P2\t" + kEx + "P3");
  EXPECT_NE(text.find("\t0.062500\t"), std::string::npos);
  const auto back = read_similarity_tsv(buf);
  EXPECT_EQ(back.predicates(), sm.predicates());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(back(i, j), sm(i, j), 5e-7);
  }
}
