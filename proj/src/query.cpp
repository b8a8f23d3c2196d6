#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ontotopic/query.hpp"

namespace ontotopic {

const QueryVariable* QueryGraph::variable(const std::string& name) const {
  for (const auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::vector<std::string> QueryGraph::relation_predicates() const {
  std::vector<std::string> out;
  for (const auto& p : patterns) {
    if (p.kind == QueryPattern::Kind::kRelation &&
        std::find(out.begin(), out.end(), p.predicate) == out.end()) {
      out.push_back(p.predicate);
    }
  }
  return out;
}

std::vector<std::string> QueryGraph::concepts() const {
  std::vector<std::string> out;
  for (const auto& v : variables) {
    if (std::find(out.begin(), out.end(), v.concept_iri) == out.end()) {
      out.push_back(v.concept_iri);
    }
  }
  return out;
}

std::string seed_predicate(const TopicNode& topic, const DegreeIndex& idx) {
  if (topic.predicates.empty()) {
    throw std::invalid_argument("cannot pick a seed from an empty topic");
  }
  const std::string* best = nullptr;
  std::size_t best_pio = 0;
  for (const auto& p : topic.predicates) {
    const std::size_t pio = idx.pio(p);
    if (best == nullptr || pio > best_pio || (pio == best_pio && p < *best)) {
      best = &p;
      best_pio = pio;
    }
  }
  return *best;
}

std::vector<std::string> expand(const TopicNode& topic, const SimilarityMatrix& sm,
                                double beta, const std::string& seed) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1)");
  }
  if (std::find(topic.predicates.begin(), topic.predicates.end(), seed) ==
      topic.predicates.end()) {
    throw std::invalid_argument("seed " + seed + " is not in topic " + topic.id);
  }
  std::set<std::string> visited{seed};
  std::vector<std::string> order{seed};
  std::deque<std::string> frontier{seed};
  while (!frontier.empty()) {
    const std::string current = frontier.front();
    frontier.pop_front();
    const std::size_t ci = sm.index_of(current);

    std::vector<std::pair<double, std::string>> candidates;
    for (const auto& p : topic.predicates) {
      if (!visited.contains(p)) candidates.emplace_back(sm(ci, sm.index_of(p)), p);
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto& [score, p] : candidates) {
      if (!(score > beta)) break;
      visited.insert(p);
      order.push_back(p);
      frontier.push_back(p);
    }
  }
  return order;
}

namespace {

bool is_literal_concept(const std::string& iri) {
  return iri == vocab::kRdfsLiteral || iri.starts_with(vocab::kXsd) ||
         iri == std::string(vocab::kRdf) + "langString" ||
         iri == std::string(vocab::kRdf) + "HTML" ||
         iri == std::string(vocab::kRdf) + "XMLLiteral";
}

std::string sanitize(const std::string& label) {
  std::string out;
  for (char c : label) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      out += static_cast<char>(std::tolower(uc));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) {
    out = "v" + out;
  }
  return out;
}

class NamePool {
 public:
  explicit NamePool(const QueryGraph& qg) {
    for (const auto& v : qg.variables) taken_.insert(v.name);
    for (const auto& p : qg.patterns) {
      if (p.kind == QueryPattern::Kind::kLabel) taken_.insert(p.object);
    }
  }

  // A name such that both it and its "<name>label" companion are free.
  std::string take(const std::string& base) {
    std::string name = base;
    for (int n = 2; taken_.contains(name) || taken_.contains(name + "label"); ++n) {
      name = base + std::to_string(n);
    }
    taken_.insert(name);
    taken_.insert(name + "label");
    return name;
  }

 private:
  std::set<std::string> taken_;
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Variables of the required relation patterns grouped into components.
std::vector<std::size_t> relation_components(const QueryGraph& qg,
                                             std::vector<std::size_t>& parent) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < qg.variables.size(); ++i) index[qg.variables[i].name] = i;
  parent.resize(qg.variables.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::size_t> pattern_roots;
  for (const auto& p : qg.patterns) {
    if (p.kind != QueryPattern::Kind::kRelation || p.optional) continue;
    std::size_t a = find_root(parent, index.at(p.subject));
    std::size_t b = find_root(parent, index.at(p.object));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  for (const auto& p : qg.patterns) {
    if (p.kind != QueryPattern::Kind::kRelation || p.optional) continue;
    pattern_roots.push_back(find_root(parent, index.at(p.subject)));
  }
  return pattern_roots;
}

void add_type_and_label(QueryGraph& qg, const QueryVariable& v) {
  if (v.literal) {
    qg.projections.push_back(v.name);
    return;
  }
  qg.patterns.push_back({QueryPattern::Kind::kType, v.name,
                         std::string(vocab::kRdfType), v.concept_iri, false});
  qg.patterns.push_back({QueryPattern::Kind::kLabel, v.name,
                         std::string(vocab::kRdfsLabel), v.name + "label", false});
  qg.projections.push_back(v.name + "label");
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
    out += items[i];
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string label_of(const QueryGraph& qg, const std::string& iri) {
  auto it = qg.labels.find(iri);
  if (it != qg.labels.end() && !it->second.empty()) return it->second;
  return local_name(iri);
}

// Variable with the most required relation patterns, first declared on ties.
std::optional<std::string> busiest_variable(const QueryGraph& qg,
                                            std::size_t minimum) {
  std::optional<std::string> best;
  std::size_t best_count = 0;
  for (const auto& v : qg.variables) {
    if (v.literal) continue;
    std::size_t count = 0;
    for (const auto& p : qg.patterns) {
      if (p.kind == QueryPattern::Kind::kRelation && !p.optional &&
          (p.subject == v.name || p.object == v.name)) {
        ++count;
      }
    }
    if (count >= minimum && count > best_count) {
      best = v.name;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

QueryGraph bind_variables(const std::vector<std::string>& predicates,
                          const SchemaGraph& g) {
  QueryGraph qg;
  NamePool names(qg);
  std::map<std::string, std::string> concept_var;
  std::vector<QueryPattern> relations;

  auto new_var = [&](const std::string& concept_iri, const std::string& base,
                     std::string role, bool literal) {
    QueryVariable v{names.take(sanitize(base)), concept_iri, std::move(role), literal};
    qg.variables.push_back(v);
    return v.name;
  };
  auto var_for = [&](const std::string& concept_iri, const std::string& role) {
    auto it = concept_var.find(concept_iri);
    if (it != concept_var.end()) return it->second;
    std::string name = new_var(concept_iri, g.label(concept_iri), role, false);
    concept_var.emplace(concept_iri, name);
    return name;
  };

  for (const auto& p : predicates) {
    const auto triples = g.triples_of(p);
    if (triples.empty()) {
      qg.notes.push_back("skipped " + p + ": no schema triple");
      continue;
    }
    auto best = triples.begin();
    for (auto it = triples.begin(); it != triples.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    const SchemaTriple& t = best->first;
    std::string subject = var_for(t.domain, "domain of <" + p + ">");
    std::string object;
    if (is_literal_concept(t.range)) {
      object = new_var(t.range, g.label(p), "value of <" + p + ">", true);
    } else if (t.range == t.domain) {
      object = new_var(t.range, g.label(t.range), "range of <" + p + ">", false);
    } else {
      object = var_for(t.range, "range of <" + p + ">");
    }
    relations.push_back({QueryPattern::Kind::kRelation, subject, p, object, false});
    qg.labels[p] = g.label(p);
  }
  qg.patterns = relations;

  std::vector<std::size_t> parent;
  auto roots = relation_components(qg, parent);
  std::set<std::size_t> distinct_roots(roots.begin(), roots.end());
  if (distinct_roots.size() > 1) {
    const DegreeIndex idx = io_degrees(g);
    std::map<std::size_t, std::size_t> degree;
    for (std::size_t i = 0; i < relations.size(); ++i) {
      degree[roots[i]] += idx.pio(relations[i].predicate);
    }
    std::size_t keep = roots.front();
    for (std::size_t r : roots) {
      if (degree[r] > degree[keep]) keep = r;
    }
    std::vector<QueryPattern> kept;
    for (std::size_t i = 0; i < relations.size(); ++i) {
      if (roots[i] == keep) {
        kept.push_back(relations[i]);
      } else {
        qg.notes.push_back("dropped " + relations[i].predicate +
                           ": disconnected from the main component");
      }
    }
    std::set<std::string> used;
    for (const auto& p : kept) {
      used.insert(p.subject);
      used.insert(p.object);
    }
    std::erase_if(qg.variables,
                  [&](const QueryVariable& v) { return !used.contains(v.name); });
    relations = std::move(kept);
  }

  qg.patterns.clear();
  std::vector<QueryPattern> labels;
  for (const auto& v : qg.variables) {
    qg.labels[v.concept_iri] = g.label(v.concept_iri);
    add_type_and_label(qg, v);
  }
  // add_type_and_label interleaves; regroup as types, relations, labels.
  std::vector<QueryPattern> types;
  for (auto& p : qg.patterns) {
    (p.kind == QueryPattern::Kind::kType ? types : labels).push_back(std::move(p));
  }
  qg.patterns = std::move(types);
  qg.patterns.insert(qg.patterns.end(), relations.begin(), relations.end());
  qg.patterns.insert(qg.patterns.end(), labels.begin(), labels.end());
  return qg;
}

QueryGraph apply_share_template(QueryGraph qg, const SchemaGraph& g) {
  auto hub = busiest_variable(qg, 2);
  if (!hub) {
    qg.notes.push_back("share template: no variable joins two relations");
    return qg;
  }
  const QueryVariable hub_var = *qg.variable(*hub);
  NamePool names(qg);
  const std::string clone = names.take(hub_var.name);
  qg.variables.push_back({clone, hub_var.concept_iri,
                          "second " + g.label(hub_var.concept_iri), false});

  std::vector<QueryPattern> added;
  added.push_back({QueryPattern::Kind::kType, clone, std::string(vocab::kRdfType),
                   hub_var.concept_iri, false});
  for (const auto& p : qg.patterns) {
    if (p.kind != QueryPattern::Kind::kRelation || p.optional) continue;
    if (p.subject != hub_var.name && p.object != hub_var.name) continue;
    QueryPattern copy = p;
    if (copy.subject == hub_var.name) copy.subject = clone;
    if (copy.object == hub_var.name) copy.object = clone;
    copy.optional = true;
    added.push_back(copy);
  }
  added.push_back({QueryPattern::Kind::kLabel, clone, std::string(vocab::kRdfsLabel),
                   clone + "label", false});
  qg.patterns.insert(qg.patterns.end(), added.begin(), added.end());

  auto at = std::find(qg.projections.begin(), qg.projections.end(),
                      hub_var.name + "label");
  qg.projections.insert(at == qg.projections.end() ? at : at + 1, clone + "label");
  qg.share_hub = hub_var.name;
  qg.share_clone = clone;
  return qg;
}

bool is_valid(const QueryGraph& qg) {
  std::set<std::string> declared;
  for (const auto& v : qg.variables) declared.insert(v.name);
  std::set<std::string> bound;
  bool any_relation = false;
  for (const auto& p : qg.patterns) {
    if (!declared.contains(p.subject)) return false;
    bound.insert(p.subject);
    switch (p.kind) {
      case QueryPattern::Kind::kRelation:
        if (!declared.contains(p.object)) return false;
        bound.insert(p.object);
        any_relation = any_relation || !p.optional;
        break;
      case QueryPattern::Kind::kLabel:
        bound.insert(p.object);
        break;
      case QueryPattern::Kind::kType:
        break;
    }
  }
  if (!any_relation) return false;
  for (const auto& v : qg.projections) {
    if (!bound.contains(v)) return false;
  }
  std::vector<std::size_t> parent;
  auto roots = relation_components(qg, parent);
  return std::set<std::size_t>(roots.begin(), roots.end()).size() == 1;
}

SelectQuery to_select(const QueryGraph& qg) {
  SelectQuery q;
  q.distinct = true;
  q.projection = qg.projections;
  auto emit = [&](QueryPattern::Kind kind, bool optional) {
    for (const auto& p : qg.patterns) {
      if (p.kind != kind || (kind == QueryPattern::Kind::kRelation && p.optional != optional)) {
        continue;
      }
      SparqlPattern sp;
      sp.subject = SparqlTerm::var(p.subject);
      sp.predicate = SparqlTerm::iri(p.predicate);
      sp.object = kind == QueryPattern::Kind::kType ? SparqlTerm::iri(p.object)
                                                    : SparqlTerm::var(p.object);
      sp.optional = p.optional;
      q.patterns.push_back(std::move(sp));
    }
  };
  emit(QueryPattern::Kind::kType, false);
  emit(QueryPattern::Kind::kRelation, false);
  emit(QueryPattern::Kind::kRelation, true);
  emit(QueryPattern::Kind::kLabel, false);
  return q;
}

std::string render_sparql(const QueryGraph& qg) { return render_select(to_select(qg)); }

namespace {

std::string plural(const std::string& noun) {
  auto ends = [&](std::string_view suffix) { return noun.ends_with(suffix); };
  if (noun.size() >= 2 && noun.back() == 'y' &&
      std::string_view("aeiou").find(noun[noun.size() - 2]) == std::string_view::npos) {
    return noun.substr(0, noun.size() - 1) + "ies";
  }
  if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh")) return noun + "es";
  return noun + "s";
}

}  // namespace

std::string render_nl(const QueryGraph& qg) {
  if (qg.share_hub) {
    const QueryVariable* hub = qg.variable(*qg.share_hub);
    std::vector<std::string> shared;
    for (const auto& p : qg.patterns) {
      if (p.kind != QueryPattern::Kind::kRelation || p.optional) continue;
      std::string other;
      if (p.subject == hub->name) other = p.object;
      else if (p.object == hub->name) other = p.subject;
      else continue;
      std::string label = lower(label_of(qg, qg.variable(other)->concept_iri));
      if (std::find(shared.begin(), shared.end(), label) == shared.end()) {
        shared.push_back(label);
      }
    }
    return "For any two " + plural(lower(label_of(qg, hub->concept_iri))) +
           " which share the common " + join_list(shared) +
           ", what are all the possible combinations?";
  }

  auto hub_name = busiest_variable(qg, 1);
  std::vector<std::string> predicate_labels;
  for (const auto& p : qg.relation_predicates()) predicate_labels.push_back(label_of(qg, p));
  if (!hub_name) return "What are the " + join_list(predicate_labels) + "?";
  const QueryVariable* hub = qg.variable(*hub_name);
  return "For any " + label_of(qg, hub->concept_iri) + ", what are its " +
         join_list(predicate_labels) + "?";
}

std::vector<GeneratedQuery> generate_queries(const TopicNode& topic,
                                             const SchemaGraph& g,
                                             const SimilarityMatrix& sm,
                                             const DegreeIndex& idx, double beta,
                                             std::size_t limit) {
  std::vector<GeneratedQuery> out;
  if (topic.predicates.empty() || limit == 0) return out;
  const std::string seed = seed_predicate(topic, idx);

  std::vector<double> betas{beta};
  for (double b : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    if (std::abs(b - beta) > 1e-12) betas.push_back(b);
  }
  std::set<std::string> seen;
  auto push = [&](QueryGraph qg, double b, bool share) {
    if (out.size() >= limit || !is_valid(qg)) return;
    std::string sparql = render_sparql(qg);
    if (!seen.insert(sparql).second) return;
    GeneratedQuery q{topic.id, render_nl(qg), std::move(sparql), b, share, std::move(qg)};
    out.push_back(std::move(q));
  };
  for (double b : betas) {
    QueryGraph qg = bind_variables(expand(topic, sm, b, seed), g);
    qg.source_topic = topic.id;
    QueryGraph shared = apply_share_template(qg, g);
    push(std::move(qg), b, false);
    if (shared.share_hub) push(std::move(shared), b, true);
  }
  return out;
}

}  // namespace ontotopic
