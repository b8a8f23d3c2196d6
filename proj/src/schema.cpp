#include <fstream>
#include <sstream>

#include "ontotopic/error.hpp"
#include "ontotopic/schema.hpp"

namespace ontotopic {

bool NamespaceFilter::excludes(const std::string& iri) const {
  for (const auto& prefix : prefixes) {
    if (iri.starts_with(prefix)) return true;
  }
  return false;
}

void SchemaGraph::add(const SchemaTriple& t, std::size_t count) {
  predicates_.insert(t.predicate);
  if (count == 0) return;
  concepts_.insert(t.domain);
  concepts_.insert(t.range);
  domain_edges_[{t.domain, t.predicate}] += count;
  range_edges_[{t.predicate, t.range}] += count;
  schema_triples_[t] += count;
}

void SchemaGraph::declare_predicate(const std::string& predicate) {
  predicates_.insert(predicate);
}

void SchemaGraph::set_label(const std::string& iri, std::string label) {
  labels_[iri] = std::move(label);
}

std::vector<std::pair<SchemaTriple, std::size_t>> SchemaGraph::triples_of(
    const std::string& predicate) const {
  std::vector<std::pair<SchemaTriple, std::size_t>> out;
  for (const auto& [t, n] : schema_triples_) {
    if (t.predicate == predicate) out.emplace_back(t, n);
  }
  return out;
}

std::string SchemaGraph::label(const std::string& iri) const {
  auto it = labels_.find(iri);
  if (it != labels_.end() && !it->second.empty()) return it->second;
  return local_name(iri);
}

std::string local_name(const std::string& iri) {
  std::string_view s = iri;
  while (!s.empty() && (s.back() == '/' || s.back() == '#' || s.back() == ':')) {
    s.remove_suffix(1);
  }
  std::size_t cut = s.find_last_of("#/:");
  if (cut == std::string_view::npos) return std::string(s);
  return std::string(s.substr(cut + 1));
}

SchemaGraph extract_schema(const TripleStore& store,
                           const NamespaceFilter& filter,
                           ExtractDiagnostics* diagnostics) {
  ExtractDiagnostics diag;
  SchemaGraph g;
  for (const Triple& t : store.triples()) {
    const std::string& p = t.predicate.value;
    if (filter.excludes(p)) {
      ++diag.builtin_filtered;
      continue;
    }
    const auto& subject_types = store.types(t.subject.value);
    if (subject_types.empty()) {
      ++diag.untyped_subject;
      continue;
    }
    if (t.object.is_literal()) {
      ++diag.literal_objects;
      std::string range = t.object.datatype ? *t.object.datatype
                                            : std::string(vocab::kRdfsLiteral);
      for (const auto& d : subject_types) g.add({d, p, range});
      continue;
    }
    const auto& object_types = store.types(t.object.value);
    if (object_types.empty()) {
      ++diag.untyped_object;
      continue;
    }
    for (const auto& d : subject_types) {
      for (const auto& r : object_types) g.add({d, p, r});
    }
  }

  // Labels for schema-level IRIs only. When several exist, untagged and
  // English labels win, then the lexicographically smallest.
  std::map<std::string, std::pair<int, std::string>> best;
  auto it = store.by_predicate().find(std::string(vocab::kRdfsLabel));
  if (it != store.by_predicate().end()) {
    for (std::size_t i : it->second) {
      const Triple& t = store.triples()[i];
      if (!t.object.is_literal()) continue;
      const std::string& s = t.subject.value;
      if (!g.concepts().contains(s) && !g.predicates().contains(s)) continue;
      int rank = (!t.object.language || *t.object.language == "en") ? 0 : 1;
      std::pair<int, std::string> candidate{rank, t.object.value};
      auto [pos, inserted] = best.emplace(s, candidate);
      if (!inserted && candidate < pos->second) pos->second = candidate;
    }
  }
  for (auto& [iri, label] : best) g.set_label(iri, std::move(label.second));

  if (diagnostics) *diagnostics = diag;
  return g;
}

SchemaGraph read_schema_tsv(std::istream& in) {
  SchemaGraph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() == 3 && fields[0] == "@label") {
      g.set_label(fields[1], fields[2]);
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError("expected 4 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (fields[i].empty()) throw ParseError("empty IRI field", line_no);
    }
    std::size_t count = 0;
    try {
      std::size_t used = 0;
      long long parsed = std::stoll(fields[3], &used);
      if (used != fields[3].size() || parsed < 0) throw std::invalid_argument("");
      count = static_cast<std::size_t>(parsed);
    } catch (const std::exception&) {
      throw ParseError("invalid count '" + fields[3] + "'", line_no);
    }
    g.add({fields[0], fields[1], fields[2]}, count);
  }
  return g;
}

SchemaGraph load_schema_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_schema_tsv(in);
}

void write_schema_tsv(std::ostream& out, const SchemaGraph& g) {
  out << "# domain\tpredicate\trange\tcount\n";
  for (const auto& [t, n] : g.schema_triples()) {
    out << t.domain << '\t' << t.predicate << '\t' << t.range << '\t' << n
        << '\n';
  }
  // Predicates without any schema triple.
  for (const auto& p : g.predicates()) {
    if (g.triples_of(p).empty()) out << p << '\t' << p << '\t' << p << "\t0\n";
  }
  for (const auto& [iri, label] : g.labels()) {
    out << "@label\t" << iri << '\t' << label << '\n';
  }
}

double graph_density(std::size_t edges, std::size_t concepts,
                     std::size_t predicates) {
  const std::size_t v = concepts + predicates;
  if (v < 2) {
    throw DegenerateGraphError("density needs at least two vertices, got " +
                               std::to_string(v));
  }
  return 2.0 * static_cast<double>(edges) /
         (static_cast<double>(v) * static_cast<double>(v - 1));
}

StatsReport schema_stats(const SchemaGraph& g) {
  StatsReport r;
  r.concept_count = g.concepts().size();
  r.predicate_count = g.predicates().size();
  r.edge_sum = g.domain_edges().size() + g.range_edges().size();
  r.schema_triple_count = g.schema_triples().size();
  r.density = graph_density(r.edge_sum, r.concept_count, r.predicate_count);
  return r;
}

SchemaGraph induced_subgraph(const SchemaGraph& g,
                             const std::vector<std::string>& predicates) {
  SchemaGraph sub;
  for (const auto& p : predicates) {
    if (!g.predicates().contains(p)) {
      throw LookupError("unknown predicate " + p);
    }
    sub.declare_predicate(p);
    for (const auto& [t, n] : g.triples_of(p)) sub.add(t, n);
  }
  for (const auto& [iri, label] : g.labels()) {
    if (sub.concepts().contains(iri) || sub.predicates().contains(iri)) {
      sub.set_label(iri, label);
    }
  }
  return sub;
}

}  // namespace ontotopic
