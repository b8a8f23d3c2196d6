#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>

#include "ontotopic/error.hpp"
#include "ontotopic/similarity.hpp"

namespace ontotopic {

ConceptSet concept_set(const SchemaGraph& g, const std::string& predicate) {
  if (!g.predicates().contains(predicate)) {
    throw LookupError("unknown predicate " + predicate);
  }
  std::set<std::string> members;
  for (const auto& [t, n] : g.triples_of(predicate)) {
    members.insert(t.domain);
    members.insert(t.range);
  }
  return {predicate, {members.begin(), members.end()}};
}

namespace {

std::vector<ConceptSet> all_concept_sets(const SchemaGraph& g) {
  std::map<std::string, std::set<std::string>> members;
  for (const auto& p : g.predicates()) members[p];
  for (const auto& [t, n] : g.schema_triples()) {
    members[t.predicate].insert(t.domain);
    members[t.predicate].insert(t.range);
  }
  std::vector<ConceptSet> out;
  out.reserve(members.size());
  for (auto& [p, cs] : members) out.push_back({p, {cs.begin(), cs.end()}});
  return out;
}

std::size_t intersection_size(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

std::vector<std::vector<std::size_t>> adjacency(
    const std::vector<ConceptSet>& sets) {
  const std::size_t n = sets.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (intersection_size(sets[i].members, sets[j].members) > 0) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return adj;
}

}  // namespace

DistanceMatrix distance_matrix(const SchemaGraph& g) {
  const auto sets = all_concept_sets(g);
  const auto adj = adjacency(sets);
  const std::size_t n = sets.size();
  DistanceMatrix l(n);
  for (std::size_t src = 0; src < n; ++src) {
    l(src, src) = 0;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (l.finite(src, v)) continue;
        l(src, v) = l(src, u) + 1;
        queue.push_back(v);
      }
    }
  }
  return l;
}

double shared_similarity(const ConceptSet& a, const ConceptSet& b) {
  if (a.predicate == b.predicate) return 1.0;
  if (a.members.empty() || b.members.empty()) return 0.0;
  const double common =
      static_cast<double>(intersection_size(a.members, b.members));
  return common * common / (static_cast<double>(a.members.size()) *
                            static_cast<double>(b.members.size()));
}

SquareMatrix shared_matrix(const SchemaGraph& g) {
  const auto sets = all_concept_sets(g);
  const std::size_t n = sets.size();
  SquareMatrix ps(n);
  for (std::size_t i = 0; i < n; ++i) {
    ps(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      ps(i, j) = ps(j, i) = shared_similarity(sets[i], sets[j]);
    }
  }
  return ps;
}

ConnectionScores connection_similarity(const DistanceMatrix& l,
                                       const SquareMatrix& shared) {
  const std::size_t n = l.size();
  ConnectionScores out{SquareMatrix(n), std::vector<std::size_t>(n * n, n)};

  int max_distance = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_distance;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!l.finite(i, j) || l(i, j) < 2) continue;
      const int d = l(i, j);
      max_distance = std::max(max_distance, d);
      if (by_distance.size() <= static_cast<std::size_t>(d)) {
        by_distance.resize(d + 1);
      }
      by_distance[d].emplace_back(i, j);
    }
  }

  // Score of a sub-pair: shared score at distance <= 1, else the connection
  // score already filled in for the shorter distance.
  auto part = [&](std::size_t a, std::size_t b) {
    return l(a, b) <= 1 ? shared(a, b) : out.score(a, b);
  };

  for (int d = 2; d <= max_distance; ++d) {
    for (auto [i, j] : by_distance[d]) {
      double best = 0.0;
      std::size_t best_k = n;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j || !l.finite(i, k) || !l.finite(k, j)) continue;
        if (l(i, k) + l(k, j) != d) continue;
        const double value = part(i, k) * part(k, j);
        if (best_k == n || value > best) {
          best = value;
          best_k = k;
        }
      }
      out.score(i, j) = out.score(j, i) = best;
      out.via[i * n + j] = out.via[j * n + i] = best_k;
    }
  }
  return out;
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> predicates,
                                   SquareMatrix values,
                                   std::vector<std::size_t> via)
    : predicates_(std::move(predicates)),
      values_(std::move(values)),
      via_(std::move(via)) {
  if (values_.size() != predicates_.size()) {
    throw std::invalid_argument("similarity matrix size mismatch");
  }
  for (std::size_t i = 0; i < predicates_.size(); ++i) {
    if (!index_.emplace(predicates_[i], i).second) {
      throw std::invalid_argument("duplicate predicate " + predicates_[i]);
    }
  }
}

std::size_t SimilarityMatrix::index_of(const std::string& predicate) const {
  auto it = index_.find(predicate);
  if (it == index_.end()) throw LookupError("unknown predicate " + predicate);
  return it->second;
}

double SimilarityMatrix::at(const std::string& a, const std::string& b) const {
  return values_(index_of(a), index_of(b));
}

std::vector<std::size_t> SimilarityMatrix::witness_path(std::size_t i,
                                                        std::size_t j) const {
  const std::size_t n = size();
  if (i == j) return {i};
  if (values_(i, j) <= 0.0) return {};
  if (via_.empty() || via_[i * n + j] == n) return {i, j};
  const std::size_t k = via_[i * n + j];
  auto left = witness_path(i, k);
  auto right = witness_path(k, j);
  if (left.empty() || right.empty()) return {};
  left.insert(left.end(), right.begin() + 1, right.end());
  return left;
}

SimilarityMatrix similarity_matrix(const SchemaGraph& g) {
  const DistanceMatrix l = distance_matrix(g);
  const SquareMatrix shared = shared_matrix(g);
  ConnectionScores conn = connection_similarity(l, shared);
  const std::size_t n = l.size();
  SquareMatrix sm(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!l.finite(i, j)) continue;
      sm(i, j) = l(i, j) >= 2 ? conn.score(i, j) : shared(i, j);
    }
  }
  return SimilarityMatrix({g.predicates().begin(), g.predicates().end()},
                          std::move(sm), std::move(conn.via));
}

void write_similarity_tsv(std::ostream& out, const SimilarityMatrix& sm) {
  out << "predicate";
  for (const auto& p : sm.predicates()) out << '\t' << p;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < sm.size(); ++i) {
    out << sm.predicates()[i];
    for (std::size_t j = 0; j < sm.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.6f", sm(i, j));
      out << '\t' << buf;
    }
    out << '\n';
  }
}

SimilarityMatrix read_similarity_tsv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return fields;
  };
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row", 1);
  auto header = split(line);
  if (header.empty() || header[0] != "predicate") {
    throw ParseError("header must start with 'predicate'", 1);
  }
  std::vector<std::string> predicates(header.begin() + 1, header.end());
  const std::size_t n = predicates.size();
  SquareMatrix values(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError("missing row", i + 2);
    auto fields = split(line);
    if (fields.size() != n + 1 || fields[0] != predicates[i]) {
      throw ParseError("row does not match header", i + 2);
    }
    for (std::size_t j = 0; j < n; ++j) {
      try {
        values(i, j) = std::stod(fields[j + 1]);
      } catch (const std::exception&) {
        throw ParseError("invalid number '" + fields[j + 1] + "'", i + 2);
      }
    }
  }
  return SimilarityMatrix(std::move(predicates), std::move(values));
}

PatternKind classify_pattern(const SchemaGraph& g, const DistanceMatrix& l,
                             std::size_t i, std::size_t j) {
  if (i == j) return PatternKind::kSame;
  if (!l.finite(i, j)) return PatternKind::kUnreachable;
  if (l(i, j) >= 2) return PatternKind::kConnection;

  std::vector<std::string> preds(g.predicates().begin(), g.predicates().end());
  auto roles = [&](const std::string& p) {
    std::pair<std::set<std::string>, std::set<std::string>> r;
    for (const auto& [t, n] : g.triples_of(p)) {
      r.first.insert(t.domain);
      r.second.insert(t.range);
    }
    return r;
  };
  auto [si, oi] = roles(preds.at(i));
  auto [sj, oj] = roles(preds.at(j));
  auto meets = [](const std::set<std::string>& a,
                  const std::set<std::string>& b) {
    return std::any_of(a.begin(), a.end(),
                       [&](const std::string& c) { return b.contains(c); });
  };
  const bool subject = meets(si, sj);
  const bool object = meets(oi, oj);
  if (subject && object) return PatternKind::kShareSubjectAndObject;
  if (subject) return PatternKind::kShareSubject;
  if (object) return PatternKind::kShareObject;
  return PatternKind::kChain;
}

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::kSame: return "same";
    case PatternKind::kShareSubjectAndObject: return "share-subject-object";
    case PatternKind::kShareSubject: return "share-subject";
    case PatternKind::kShareObject: return "share-object";
    case PatternKind::kChain: return "chain";
    case PatternKind::kConnection: return "connection";
    case PatternKind::kUnreachable: return "unreachable";
  }
  return "unknown";
}

}  // namespace ontotopic
