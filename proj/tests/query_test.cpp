#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "query_fixtures.hpp"
#include "ontotopic/query.hpp"

using namespace ontotopic;
using fixtures::kDrug;
using fixtures::kDv;
using fixtures::kOrganism;
using fixtures::kPubchem;

namespace {

std::size_t count_kind(const QueryGraph& qg, QueryPattern::Kind kind, bool optional = false) {
  std::size_t n = 0;
  for (const auto& p : qg.patterns) n += p.kind == kind && p.optional == optional;
  return n;
}

// Drug joined to three concepts, as in the share-template example.
SchemaGraph drug_hub() {
  SchemaGraph g;
  g.add({kDv + "Drug", kDv + "target", kDv + "Target"}, 5);
  g.add({kDv + "Drug", kDv + "enzyme", kDv + "Enzyme"}, 4);
  g.add({kDv + "Drug", kDv + "carrier", kDv + "Carrier"}, 2);
  g.add({kDv + "Drug", kDv + "name", std::string(vocab::kRdfsLiteral)}, 9);
  return g;
}

}  // namespace

TEST(Expand, WalkthroughAdmitsOnlyAboveBeta) {
  const auto w = fixtures::walkthrough();
  EXPECT_EQ(expand(w.topic, w.sm, 0.2, kDrug), (std::vector<std::string>{kDrug, kPubchem}));
  EXPECT_EQ(expand(w.topic, w.sm, 0.09, kDrug), (std::vector<std::string>{kDrug, kPubchem, kOrganism}));
  // Strictly greater: a link at exactly beta is not followed.
  EXPECT_EQ(expand(w.topic, w.sm, 0.5, kDrug), std::vector<std::string>{kDrug});
  // From organism, 0.1 to drug is the best link; pubchem follows through drug.
  EXPECT_EQ(expand(w.topic, w.sm, 0.06, kOrganism), (std::vector<std::string>{kOrganism, kDrug, kPubchem}));
}

TEST(Expand, RejectsBadArguments) {
  const auto w = fixtures::walkthrough();
  EXPECT_THROW(expand(w.topic, w.sm, 1.0, kDrug), std::invalid_argument);
  EXPECT_THROW(expand(w.topic, w.sm, -0.1, kDrug), std::invalid_argument);
  EXPECT_THROW(expand(w.topic, w.sm, 0.2, kDv + "enzyme"), std::invalid_argument);
  EXPECT_THROW(seed_predicate(TopicNode{}, io_degrees(w.schema)), std::invalid_argument);
}

TEST(Expand, MonotoneInBeta) {
  const auto g = extract_schema(load_ntriples(oracle::fixture("medkg.nt")));
  const auto sm = similarity_matrix(g);
  const auto h = build_hierarchy(sm);
  const auto idx = io_degrees(g);
  for (const TopicNode* leaf : h.leaves()) {
    const auto seed = seed_predicate(*leaf, idx);
    std::set<std::string> prev;
    for (double beta : {0.9, 0.5, 0.3, 0.1, 0.0}) {
      const auto got = expand(*leaf, sm, beta, seed);
      const std::set<std::string> cur(got.begin(), got.end());
      EXPECT_EQ(cur.size(), got.size());
      EXPECT_EQ(got.front(), seed);
      for (const auto& p : prev) EXPECT_TRUE(cur.contains(p)) << p;
      for (const auto& p : got) {
        EXPECT_TRUE(std::find(leaf->predicates.begin(), leaf->predicates.end(), p) != leaf->predicates.end());
      }
      prev = cur;
    }
  }
}

TEST(Bind, WalkthroughReusesDrugVariable) {
  const auto w = fixtures::walkthrough();
  const auto qg = bind_variables({kDrug, kPubchem}, w.schema);
  ASSERT_EQ(qg.variables.size(), 3u);
  EXPECT_EQ(count_kind(qg, QueryPattern::Kind::kRelation), 2u);
  EXPECT_EQ(count_kind(qg, QueryPattern::Kind::kType), 3u);
  EXPECT_EQ(count_kind(qg, QueryPattern::Kind::kLabel), 3u);
  std::set<std::string> concepts;
  for (const auto& v : qg.variables) concepts.insert(v.concept_iri);
  EXPECT_EQ(concepts, (std::set<std::string>{kDv + "Drug", kDv + "Target-Relation", kDv + "Resource"}));
  std::string drug_var;
  for (const auto& p : qg.patterns) {
    if (p.kind == QueryPattern::Kind::kRelation && p.predicate == kDrug) drug_var = p.object;
  }
  for (const auto& p : qg.patterns) {
    if (p.kind == QueryPattern::Kind::kRelation && p.predicate == kPubchem) EXPECT_EQ(p.subject, drug_var);
  }
  EXPECT_TRUE(is_valid(qg));
  EXPECT_EQ(qg.projections.size(), 3u);
}

TEST(Bind, LiteralsAndSelfLoops) {
  SchemaGraph g = drug_hub();
  g.add({kDv + "Drug", kDv + "ddi", kDv + "Drug"});
  const auto qg = bind_variables({kDv + "name", kDv + "ddi"}, g);
  ASSERT_EQ(qg.variables.size(), 3u);
  const QueryVariable* lit = nullptr;
  for (const auto& v : qg.variables) {
    if (v.literal) lit = &v;
  }
  ASSERT_NE(lit, nullptr);
  for (const auto& p : qg.patterns) {
    if (p.kind != QueryPattern::Kind::kRelation) EXPECT_NE(p.subject, lit->name);
  }
  EXPECT_NE(std::find(qg.projections.begin(), qg.projections.end(), lit->name), qg.projections.end());
  for (const auto& p : qg.patterns) {
    if (p.predicate == kDv + "ddi") EXPECT_NE(p.subject, p.object);
  }
  EXPECT_TRUE(is_valid(qg));
}

TEST(Bind, KeepsLargestComponent) {
  SchemaGraph g = drug_hub();
  g.add({kDv + "Gene", kDv + "encodes", kDv + "Protein"});
  const auto qg = bind_variables({kDv + "target", kDv + "enzyme", kDv + "encodes", kDv + "absent"}, g);
  EXPECT_EQ(qg.relation_predicates(), (std::vector<std::string>{kDv + "target", kDv + "enzyme"}));
  EXPECT_EQ(qg.notes.size(), 2u);
  EXPECT_TRUE(is_valid(qg));
}

TEST(ShareTemplate, ClonesTheHubWithOptionalCopies) {
  const auto g = drug_hub();
  const auto base = bind_variables({kDv + "target", kDv + "enzyme", kDv + "carrier"}, g);
  const auto qg = apply_share_template(base, g);
  ASSERT_TRUE(qg.share_hub && qg.share_clone);
  EXPECT_EQ(*qg.share_hub, "drug");
  EXPECT_EQ(*qg.share_clone, "drug2");
  EXPECT_EQ(count_kind(qg, QueryPattern::Kind::kRelation, true), 3u);
  EXPECT_EQ(count_kind(qg, QueryPattern::Kind::kRelation), 3u);
  for (const auto& p : qg.patterns) {
    if (p.optional) {
      EXPECT_EQ(p.subject, "drug2");
      EXPECT_NE(p.object, "drug");
    }
  }
  EXPECT_EQ(qg.variables.size(), base.variables.size() + 1);
  EXPECT_TRUE(is_valid(qg));
  EXPECT_EQ(render_nl(qg),
            "For any two drugs which share the common target, enzyme and carrier, "
            "what are all the possible combinations?");

  const auto parsed = parse_select(render_sparql(qg));
  EXPECT_EQ(parsed, to_select(qg));
  std::size_t optional = 0;
  for (const auto& p : parsed.patterns) optional += p.optional;
  EXPECT_EQ(optional, 3u);
}

TEST(ShareTemplate, NoHubLeavesGraphUnchanged) {
  const auto g = drug_hub();
  const auto single = bind_variables({kDv + "target"}, g);
  const auto after = apply_share_template(single, g);
  EXPECT_FALSE(after.share_hub);
  EXPECT_EQ(after.patterns.size(), single.patterns.size());
  EXPECT_EQ(after.variables.size(), single.variables.size());
  EXPECT_EQ(render_nl(after), "For any Drug, what are its target?");
}

TEST(ShareTemplate, PluralForms) {
  SchemaGraph g;
  g.add({"http://ex/Country", "http://ex/border", "http://ex/Sea"});
  g.add({"http://ex/Country", "http://ex/capital", "http://ex/City"});
  g.set_label("http://ex/Country", "Country");
  const auto qg = apply_share_template(bind_variables({"http://ex/border", "http://ex/capital"}, g), g);
  EXPECT_EQ(render_nl(qg), "For any two countries which share the common sea and city, what are all the possible combinations?");
}

TEST(Validity, DetectsBrokenGraphs) {
  const auto g = drug_hub();
  const auto good = bind_variables({kDv + "target", kDv + "enzyme"}, g);
  ASSERT_TRUE(is_valid(good));

  auto unbound = good;
  unbound.projections.push_back("nowhere");
  EXPECT_FALSE(is_valid(unbound));

  auto undeclared = good;
  undeclared.patterns.push_back({QueryPattern::Kind::kRelation, "ghost", kDv + "target", "target", false});
  EXPECT_FALSE(is_valid(undeclared));

  auto split = good;
  split.variables.push_back({"x", kDv + "A", "", false});
  split.variables.push_back({"y", kDv + "B", "", false});
  split.patterns.push_back({QueryPattern::Kind::kRelation, "x", kDv + "p", "y", false});
  EXPECT_FALSE(is_valid(split));

  QueryGraph empty;
  EXPECT_FALSE(is_valid(empty));
}

TEST(Generate, BoundedDistinctAndValid) {
  const auto g = extract_schema(load_ntriples(oracle::fixture("medkg.nt")));
  const auto sm = similarity_matrix(g);
  const auto h = build_hierarchy(sm);
  const auto idx = io_degrees(g);
  std::size_t total = 0;
  for (const TopicNode* leaf : h.leaves()) {
    const auto qs = generate_queries(*leaf, g, sm, idx);
    EXPECT_LE(qs.size(), kMaxQueriesPerTopic);
    std::set<std::string> texts;
    for (const auto& q : qs) {
      EXPECT_TRUE(texts.insert(q.sparql).second);
      EXPECT_EQ(q.topic_id, leaf->id);
      EXPECT_TRUE(is_valid(q.graph));
      EXPECT_EQ(q.sparql, render_sparql(q.graph));
      EXPECT_EQ(q.share_template, q.graph.share_hub.has_value());
      EXPECT_FALSE(q.nl_question.empty());
      EXPECT_NO_THROW(parse_select(q.sparql));
      for (const auto& p : q.graph.relation_predicates()) {
        EXPECT_NE(std::find(leaf->predicates.begin(), leaf->predicates.end(), p), leaf->predicates.end());
      }
    }
    EXPECT_EQ(generate_queries(*leaf, g, sm, idx).size(), qs.size());
    EXPECT_LE(generate_queries(*leaf, g, sm, idx, kDefaultBeta, 1).size(), 1u);
    total += qs.size();
  }
  EXPECT_GT(total, 0u);
}
