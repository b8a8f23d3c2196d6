#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include "ontotopic/error.hpp"
#include "ontotopic/ranking.hpp"

namespace ontotopic {

std::size_t DegreeIndex::pio(const std::string& predicate) const {
  auto it = predicates.find(predicate);
  if (it == predicates.end()) throw LookupError("unknown predicate " + predicate);
  return it->second.pio();
}

DegreeIndex io_degrees(const SchemaGraph& g) {
  DegreeIndex idx;
  for (const auto& p : g.predicates()) idx.predicates[p];
  for (const auto& c : g.concepts()) idx.concepts[c];
  for (const auto& [edge, n] : g.domain_edges()) {
    ++idx.predicates[edge.second].in;
    ++idx.concepts[edge.first];
  }
  for (const auto& [edge, n] : g.range_edges()) {
    ++idx.predicates[edge.first].out;
    ++idx.concepts[edge.second];
  }
  return idx;
}

bool topic_id_less(const std::string& a, const std::string& b) {
  auto parse = [](const std::string& id) -> std::tuple<int, long, long, std::string> {
    long depth = 0;
    long pos = 0;
    if (std::sscanf(id.c_str(), "T%ld_%ld", &depth, &pos) == 2) {
      return {0, depth, pos, id};
    }
    return {1, 0, 0, id};
  };
  return parse(a) < parse(b);
}

namespace {

// Within-leaf degree of every concept the leaf touches.
std::map<std::string, std::size_t> leaf_concept_degrees(const SchemaGraph& g,
                                                        const TopicNode& leaf) {
  std::set<std::string> members(leaf.predicates.begin(), leaf.predicates.end());
  std::map<std::string, std::size_t> deg;
  for (const auto& [edge, n] : g.domain_edges()) {
    if (members.contains(edge.second)) ++deg[edge.first];
  }
  for (const auto& [edge, n] : g.range_edges()) {
    if (members.contains(edge.first)) ++deg[edge.second];
  }
  return deg;
}

std::vector<const TopicNode*> sorted_leaves(std::span<const TopicNode* const> leaves) {
  std::vector<const TopicNode*> out(leaves.begin(), leaves.end());
  std::sort(out.begin(), out.end(), [](const TopicNode* a, const TopicNode* b) {
    return topic_id_less(a->id, b->id);
  });
  return out;
}

}  // namespace

std::map<std::string, std::vector<std::string>> concept_topics(
    const SchemaGraph& g, std::span<const TopicNode* const> leaves) {
  std::map<std::string, std::vector<std::string>> out;
  for (const TopicNode* leaf : sorted_leaves(leaves)) {
    for (const auto& [c, d] : leaf_concept_degrees(g, *leaf)) {
      out[c].push_back(leaf->id);
    }
  }
  return out;
}

TopKList top_k(const DegreeIndex& idx, TopKList::Kind kind, std::size_t k,
               std::span<const TopicNode* const> leaves, const SchemaGraph* g,
               bool dedup) {
  TopKList list;
  list.kind = kind;
  if (kind == TopKList::Kind::kPredicate) {
    for (const auto& [p, d] : idx.predicates) list.entries.push_back({p, d.pio(), {}});
  } else {
    for (const auto& [c, d] : idx.concepts) list.entries.push_back({c, d, {}});
  }
  std::sort(list.entries.begin(), list.entries.end(),
            [](const TopKEntry& a, const TopKEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.iri < b.iri;
            });
  if (list.entries.size() > k) list.entries.resize(k);
  if (leaves.empty()) return list;

  const auto ordered = sorted_leaves(leaves);
  if (kind == TopKList::Kind::kPredicate) {
    std::map<std::string, std::string> owner;
    for (const TopicNode* leaf : ordered) {
      for (const auto& p : leaf->predicates) owner[p] = leaf->id;
    }
    for (auto& e : list.entries) {
      if (auto it = owner.find(e.iri); it != owner.end()) e.topics = {it->second};
    }
    return list;
  }

  if (g == nullptr) {
    throw std::invalid_argument("concept topics need the schema graph");
  }
  std::vector<std::map<std::string, std::size_t>> degrees;
  for (const TopicNode* leaf : ordered) degrees.push_back(leaf_concept_degrees(*g, *leaf));
  for (auto& e : list.entries) {
    std::size_t best_degree = 0;
    std::string best_topic;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      auto it = degrees[i].find(e.iri);
      if (it == degrees[i].end()) continue;
      if (!dedup) e.topics.push_back(ordered[i]->id);
      if (best_topic.empty() || it->second > best_degree) {
        best_degree = it->second;
        best_topic = ordered[i]->id;
      }
    }
    if (dedup && !best_topic.empty()) e.topics = {best_topic};
  }
  return list;
}

TopicMeasures topic_measures(const TopicNode& topic, const SchemaGraph& g,
                             const SimilarityMatrix& sm) {
  TopicMeasures m;
  const auto& members = topic.members;
  if (members.size() > 1) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        sum += sm(members[a], members[b]);
        ++pairs;
      }
    }
    m.mean_similarity = sum / static_cast<double>(pairs);
  }
  m.mean_sw = topic.mean_sw;
  SchemaGraph sub = induced_subgraph(g, topic.predicates);
  if (sub.concepts().size() + sub.predicates().size() >= 2) {
    m.density = schema_stats(sub).density;
  }
  return m;
}

namespace {

// 1 + number of strictly better scores.
template <typename Score>
std::vector<std::size_t> competition_ranks(const std::vector<Score>& scores) {
  std::vector<std::size_t> ranks(scores.size(), 1);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (scores[j] > scores[i]) ++ranks[i];
    }
  }
  return ranks;
}

}  // namespace

std::vector<TopicRankRow> rank_topics(std::span<const TopicNode* const> leaves,
                                      const SchemaGraph& g,
                                      const SimilarityMatrix& sm,
                                      const DegreeIndex& idx) {
  if (leaves.empty()) throw std::invalid_argument("rank_topics needs a leaf");
  const auto ordered = sorted_leaves(leaves);
  const TopKList top_predicates =
      top_k(idx, TopKList::Kind::kPredicate, kTopListLength, ordered, &g);
  const TopKList top_concepts =
      top_k(idx, TopKList::Kind::kConcept, kTopListLength, ordered, &g, true);

  std::vector<TopicRankRow> rows;
  for (const TopicNode* leaf : ordered) {
    TopicRankRow row;
    row.topic_id = leaf->id;
    for (const auto& e : top_predicates.entries) {
      if (!e.topics.empty() && e.topics.front() == leaf->id) {
        ++row.top_predicate_count;
        row.top_predicate_degree += e.score;
      }
    }
    for (const auto& e : top_concepts.entries) {
      if (!e.topics.empty() && e.topics.front() == leaf->id) {
        ++row.top_concept_count;
        row.top_concept_degree += e.score;
      }
    }
    row.measures = topic_measures(*leaf, g, sm);
    rows.push_back(std::move(row));
  }

  using Pair = std::pair<std::size_t, std::size_t>;
  std::vector<Pair> concept_scores, predicate_scores;
  std::vector<double> similarity, silhouette_width, density;
  for (const auto& r : rows) {
    concept_scores.emplace_back(r.top_concept_count, r.top_concept_degree);
    predicate_scores.emplace_back(r.top_predicate_count, r.top_predicate_degree);
    similarity.push_back(r.measures.mean_similarity);
    silhouette_width.push_back(r.measures.mean_sw);
    density.push_back(r.measures.density);
  }
  const auto r0 = competition_ranks(concept_scores);
  const auto r1 = competition_ranks(predicate_scores);
  const auto r2 = competition_ranks(similarity);
  const auto r3 = competition_ranks(silhouette_width);
  const auto r4 = competition_ranks(density);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].ranks = {r0[i], r1[i], r2[i], r3[i], r4[i]};
    std::size_t sum = 0;
    for (std::size_t r : rows[i].ranks) sum += r;
    rows[i].overall = static_cast<double>(sum) / static_cast<double>(kCriterionCount);
  }

  std::sort(rows.begin(), rows.end(), [](const TopicRankRow& a, const TopicRankRow& b) {
    if (a.overall != b.overall) return a.overall < b.overall;
    if (a.ranks[kSimilarity] != b.ranks[kSimilarity]) {
      return a.ranks[kSimilarity] < b.ranks[kSimilarity];
    }
    return topic_id_less(a.topic_id, b.topic_id);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].final_position = i + 1;
  return rows;
}

void write_rank_tsv(std::ostream& out, const std::vector<TopicRankRow>& rows) {
  out << "topicId\ttopConcepts\ttopPredicates\tsimilarity\tsilhouetteWidth\t"
         "density\toverall\tfinalPosition\n";
  char buf[32];
  for (const auto& r : rows) {
    out << r.topic_id;
    for (std::size_t rank : r.ranks) out << '\t' << rank;
    std::snprintf(buf, sizeof buf, "%.2f", r.overall);
    out << '\t' << buf << '\t' << r.final_position << '\n';
  }
}

}  // namespace ontotopic
