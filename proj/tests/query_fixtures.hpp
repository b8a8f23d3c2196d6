#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ontotopic/clustering.hpp"
#include "ontotopic/query.hpp"
#include "ontotopic/rdf.hpp"
#include "ontotopic/schema.hpp"
#include "ontotopic/similarity.hpp"
#include "ontotopic/sparql.hpp"

namespace fixtures {

inline const std::string kDv = "http://bio2rdf.org/drugbank_vocabulary:";
inline const std::string kDrug = kDv + "drug";
inline const std::string kPubchem = kDv + "x-pubchem-substance";
inline const std::string kOrganism = kDv + "affected-organism";

struct Walkthrough {
  ontotopic::SchemaGraph schema;
  ontotopic::SimilarityMatrix sm;
  ontotopic::TopicNode topic;
};

// Three predicates around Drug with sm(drug, x-pubchem-substance) = 0.5 and
// sm(drug, affected-organism) = 0.1.
inline Walkthrough walkthrough() {
  Walkthrough w;
  w.schema.add({kDv + "Target-Relation", kDrug, kDv + "Drug"}, 3);
  w.schema.add({kDv + "Drug", kPubchem, kDv + "Resource"}, 2);
  w.schema.add({kDv + "Drug", kOrganism, kDv + "Organism"}, 1);
  // Rows: affected-organism, drug, x-pubchem-substance.
  ontotopic::SquareMatrix v(3, 0.0);
  const double cells[3][3] = {{1.0, 0.1, 0.05}, {0.1, 1.0, 0.5}, {0.05, 0.5, 1.0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) v(i, j) = cells[i][j];
  }
  w.sm = ontotopic::SimilarityMatrix({kOrganism, kDrug, kPubchem}, v);
  w.topic.id = "T1_1";
  w.topic.depth = 1;
  w.topic.members = {0, 1, 2};
  w.topic.predicates = {kOrganism, kDrug, kPubchem};
  return w;
}

inline const char* kQuery1Listing = R"(
select distinct ?druglabel, ?targetlabel, ?erlabel, ?trlabel, ?drug2label, ?enzymelabel where {
  ?drug <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://bio2rdf.org/drugbank_vocabulary:Drug> .
  ?target <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://bio2rdf.org/drugbank_vocabulary:Target> .
  ?drug <http://bio2rdf.org/drugbank_vocabulary:target> ?target .
  ?drug <http://bio2rdf.org/drugbank_vocabulary:transporter> ?enzyme .
  ?er <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://bio2rdf.org/drugbank_vocabulary:Enzyme-Relation> .
  ?tr <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://bio2rdf.org/drugbank_vocabulary:Target-Relation> .
  ?er <http://bio2rdf.org/drugbank_vocabulary:enzyme> ?enzyme .
  ?tr <http://bio2rdf.org/drugbank_vocabulary:enzyme> ?target .
  ?drug2 <http://bio2rdf.org/drugbank_vocabulary:target> ?target .
  ?drug2 <http://bio2rdf.org/drugbank_vocabulary:transporter> ?enzyme .
  ?drug <http://www.w3.org/2000/01/rdf-schema#label> ?druglabel .
  ?target <http://www.w3.org/2000/01/rdf-schema#label> ?targetlabel .
  ?er <http://www.w3.org/2000/01/rdf-schema#label> ?erlabel .
  ?tr <http://www.w3.org/2000/01/rdf-schema#label> ?trlabel .
  ?drug2 <http://www.w3.org/2000/01/rdf-schema#label> ?drug2label .
  ?enzyme <http://www.w3.org/2000/01/rdf-schema#label> ?enzymelabel . }
)";

// Query graph of the same shape with our own variable names.
inline ontotopic::QueryGraph query1_graph() {
  using ontotopic::QueryPattern;
  namespace vocab = ontotopic::vocab;
  ontotopic::QueryGraph qg;
  qg.variables = {{"d", kDv + "Drug", "", false},        {"t", kDv + "Target", "", false},
                  {"e", kDv + "Enzyme", "", false},      {"rel_e", kDv + "Enzyme-Relation", "", false},
                  {"rel_t", kDv + "Target-Relation", "", false}, {"d2", kDv + "Drug", "", false}};
  auto type = [&](const std::string& v, const std::string& c) {
    qg.patterns.push_back({QueryPattern::Kind::kType, v, std::string(vocab::kRdfType), kDv + c, false});
  };
  auto rel = [&](const std::string& s, const std::string& p, const std::string& o) {
    qg.patterns.push_back({QueryPattern::Kind::kRelation, s, kDv + p, o, false});
  };
  type("d", "Drug");
  type("t", "Target");
  type("rel_e", "Enzyme-Relation");
  type("rel_t", "Target-Relation");
  rel("d", "target", "t");
  rel("d", "transporter", "e");
  rel("rel_e", "enzyme", "e");
  rel("rel_t", "enzyme", "t");
  rel("d2", "target", "t");
  rel("d2", "transporter", "e");
  for (const char* v : {"d", "t", "rel_e", "rel_t", "d2", "e"}) {
    qg.patterns.push_back({QueryPattern::Kind::kLabel, v, std::string(vocab::kRdfsLabel),
                           std::string(v) + "_label", false});
    qg.projections.push_back(std::string(v) + "_label");
  }
  return qg;
}

// True when some bijection between the variables of `a` and `b` maps the
// pattern multiset of `a` onto that of `b`.
inline bool same_up_to_renaming(const std::vector<ontotopic::SparqlPattern>& a,
                                const std::vector<ontotopic::SparqlPattern>& b) {
  using ontotopic::SparqlPattern;
  using ontotopic::SparqlTerm;
  if (a.size() != b.size()) return false;
  auto vars_of = [](const std::vector<SparqlPattern>& ps) {
    std::vector<std::string> out;
    for (const auto& p : ps) {
      for (const SparqlTerm* t : {&p.subject, &p.predicate, &p.object}) {
        if (t->kind == SparqlTerm::Kind::kVariable &&
            std::find(out.begin(), out.end(), t->value) == out.end()) {
          out.push_back(t->value);
        }
      }
    }
    return out;
  };
  const auto va = vars_of(a);
  const auto vb = vars_of(b);
  if (va.size() != vb.size()) return false;
  const std::multiset<SparqlPattern> target(b.begin(), b.end());

  std::map<std::string, std::string> map;
  std::set<std::string> used;
  auto mapped = [&](const SparqlPattern& p, SparqlPattern& out) {
    out = p;
    for (SparqlTerm* t : {&out.subject, &out.predicate, &out.object}) {
      if (t->kind != SparqlTerm::Kind::kVariable) continue;
      auto it = map.find(t->value);
      if (it == map.end()) return false;
      t->value = it->second;
    }
    return true;
  };
  auto consistent = [&]() {
    std::multiset<SparqlPattern> seen;
    for (const auto& p : a) {
      SparqlPattern m;
      if (!mapped(p, m)) continue;
      seen.insert(m);
      if (seen.count(m) > target.count(m)) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == va.size()) return true;
    for (const auto& candidate : vb) {
      if (used.contains(candidate)) continue;
      map[va[i]] = candidate;
      used.insert(candidate);
      if (consistent() && self(self, i + 1)) return true;
      used.erase(candidate);
      map.erase(va[i]);
    }
    return false;
  };
  return search(search, 0);
}

}  // namespace fixtures
