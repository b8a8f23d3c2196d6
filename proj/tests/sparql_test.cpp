#include <gtest/gtest.h>

#include <random>

#include "query_fixtures.hpp"
#include "ontotopic/error.hpp"
#include "ontotopic/sparql.hpp"

using namespace ontotopic;

TEST(Sparql, ParsesTheListedQuery) {
  const auto q = parse_select(fixtures::kQuery1Listing);
  EXPECT_TRUE(q.distinct);
  EXPECT_EQ(q.projection.size(), 6u);
  ASSERT_EQ(q.patterns.size(), 16u);
  EXPECT_EQ(q.patterns[0].predicate, SparqlTerm::iri(std::string(vocab::kRdfType)));
  EXPECT_EQ(q.patterns[2].subject, SparqlTerm::var("drug"));
  EXPECT_EQ(parse_select(render_select(q)), q);
}

TEST(Sparql, AcceptsLooseSyntax) {
  const auto q = parse_select(
      "SeLeCt ?a ?b WHERE {\n"
      "  ?a a <http://ex/C> .\n"
      "  OPTIONAL { ?a <http://ex/p> ?b }\n"
      "  ?a <http://ex/name> \"x\\\"y\"\n"
      "}");
  EXPECT_FALSE(q.distinct);
  ASSERT_EQ(q.patterns.size(), 3u);
  EXPECT_EQ(q.patterns[0].predicate, SparqlTerm::iri(std::string(vocab::kRdfType)));
  EXPECT_TRUE(q.patterns[1].optional);
  EXPECT_EQ(q.patterns[2].object, SparqlTerm::literal("x\"y"));
}

TEST(Sparql, ErrorsCarryPosition) {
  struct Case {
    const char* text;
    std::size_t line, column;
  };
  const Case cases[] = {
      {"select ?a where {\n  ?a <http://p> ?b ?c }", 2, 20},
      {"select where { ?a <http://p> ?b }", 1, 8},
      {"select ?a where { ?a <http://p> ?b", 1, 35},
      {"select ?a from { ?a <http://p> ?b }", 1, 11},
      {"select ?a where { ?a <http://p> ?b } extra", 1, 38},
  };
  for (const auto& c : cases) {
    try {
      parse_select(c.text);
      ADD_FAILURE() << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text << ": " << e.what();
      EXPECT_EQ(e.column(), c.column) << c.text << ": " << e.what();
    }
  }
}

TEST(Sparql, RejectsUnboundProjectionAndEmptyWhere) {
  EXPECT_THROW(parse_select("select ?z where { ?a <http://p> ?b }"), ParseError);
  EXPECT_THROW(parse_select("select ?a where { }"), ParseError);
  EXPECT_THROW(parse_select("select ?a where { ?a <http://p> \"open }"), ParseError);
  EXPECT_THROW(parse_select("select ?a where { ?a <http://p ?b }"), ParseError);
}

namespace {

SparqlTerm random_term(std::mt19937_64& rng, bool allow_literal, std::vector<std::string>& vars) {
  const int kind = std::uniform_int_distribution<int>(0, allow_literal ? 2 : 1)(rng);
  const std::string n = std::to_string(rng() % 6);
  if (kind == 0) {
    vars.push_back("v" + n);
    return SparqlTerm::var("v" + n);
  }
  if (kind == 1) return SparqlTerm::iri("http://ex.org/r" + n);
  static const std::vector<std::string> texts = {"", "plain", "tab\there", "q\"uote", "back\\slash", "caf\xC3\xA9"};
  return SparqlTerm::literal(texts[rng() % texts.size()]);
}

}  // namespace

TEST(Sparql, RenderParseRoundTrip) {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 300; ++round) {
    SelectQuery q;
    q.distinct = rng() % 2;
    std::vector<std::string> vars;
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int i = 0; i < n; ++i) {
      SparqlPattern p;
      p.subject = random_term(rng, false, vars);
      p.predicate = rng() % 4 ? SparqlTerm::iri("http://ex.org/p" + std::to_string(rng() % 5))
                              : random_term(rng, false, vars);
      p.object = random_term(rng, true, vars);
      p.optional = rng() % 3 == 0;
      q.patterns.push_back(p);
    }
    if (vars.empty()) {
      q.patterns.front().subject = SparqlTerm::var("only");
      vars.push_back("only");
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (const auto& v : vars) {
      if (rng() % 2 || q.projection.empty()) q.projection.push_back(v);
    }
    const std::string text = render_select(q);
    EXPECT_EQ(parse_select(text), q) << text;
    EXPECT_EQ(render_select(parse_select(text)), text);
  }
}
