#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ontotopic/error.hpp"
#include "ontotopic/rdf.hpp"
#include "ontotopic/snapshot.hpp"

namespace ontotopic {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const TopicRankRow* Snapshot::rank_of(const std::string& topic_id) const {
  for (const auto& r : ranks) {
    if (r.topic_id == topic_id) return &r;
  }
  return nullptr;
}

std::vector<std::string> Snapshot::leaf_ids() const {
  std::vector<std::string> out;
  for (const TopicNode* n : hierarchy.leaves()) out.push_back(n->id);
  return out;
}

SchemaGraph load_input(const fs::path& path, ExtractDiagnostics* diagnostics) {
  if (!fs::exists(path)) throw std::runtime_error("no such file: " + path.string());
  if (path.extension() == ".nt") {
    return extract_schema(load_ntriples(path.string()), {}, diagnostics);
  }
  if (diagnostics) *diagnostics = {};
  return load_schema_tsv(path.string());
}

Snapshot analyze(SchemaGraph schema, std::string dataset_id,
                 const AnalysisParams& params, std::string created_at) {
  Snapshot s;
  s.dataset_id = std::move(dataset_id);
  s.created_at = std::move(created_at);
  s.params = params;
  s.schema = std::move(schema);
  s.stats = schema_stats(s.schema);
  s.sm = similarity_matrix(s.schema);
  s.hierarchy = build_hierarchy(s.sm, params.alpha, params.seed);
  s.degrees = io_degrees(s.schema);
  const auto leaves = s.hierarchy.leaves();
  s.ranks = rank_topics(leaves, s.schema, s.sm, s.degrees);
  for (const TopicNode* leaf : leaves) {
    auto& records = s.queries[leaf->id];
    for (auto& q : generate_queries(*leaf, s.schema, s.sm, s.degrees, params.beta)) {
      records.push_back({q.topic_id, q.nl_question, q.sparql, q.beta, q.share_template,
                         q.graph.relation_predicates(), q.graph.concepts()});
    }
  }
  return s;
}

std::string snapshot_timestamp(const fs::path& input) {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    auto ftime = fs::last_write_time(input);
    auto sys = std::chrono::time_point_cast<std::chrono::seconds>(
        ftime - fs::file_time_type::clock::now() + std::chrono::system_clock::now());
    t = std::chrono::system_clock::to_time_t(sys);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string stats_to_json(const StatsReport& s) {
  ordered_json j;
  j["concepts"] = s.concept_count;
  j["predicates"] = s.predicate_count;
  j["edges"] = s.edge_sum;
  j["schemaTriples"] = s.schema_triple_count;
  j["density"] = s.density;
  return j.dump(2) + "\n";
}

std::string queries_to_json(const std::map<std::string, std::vector<QueryRecord>>& q) {
  auto arr = ordered_json::array();
  for (const auto& [topic, records] : q) {
    for (const auto& r : records) {
      ordered_json j;
      j["topicId"] = r.topic_id;
      j["nlQuestion"] = r.nl_question;
      j["sparql"] = r.sparql;
      j["beta"] = r.beta;
      j["shareTemplate"] = r.share_template;
      j["predicates"] = r.predicates;
      j["concepts"] = r.concepts;
      arr.push_back(std::move(j));
    }
  }
  return arr.dump(2) + "\n";
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Labels must stay on one TSV line.
SchemaGraph with_flat_labels(const SchemaGraph& g) {
  SchemaGraph copy = g;
  for (const auto& [iri, label] : g.labels()) {
    std::string flat = label;
    for (char& c : flat) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    copy.set_label(iri, flat);
  }
  return copy;
}

}  // namespace

void write_snapshot(const Snapshot& s, const fs::path& dir) {
  fs::create_directories(dir);

  ordered_json manifest;
  manifest["datasetId"] = s.dataset_id;
  manifest["createdAt"] = s.created_at;
  manifest["params"] = {{"alpha", s.params.alpha}, {"beta", s.params.beta},
                        {"seed", s.params.seed}};
  manifest["levelShape"] = s.hierarchy.level_shape();
  manifest["leafCount"] = s.hierarchy.leaves().size();
  write_file(dir / snapshot_files::kManifest, manifest.dump(2) + "\n");
  write_file(dir / snapshot_files::kStats, stats_to_json(s.stats));

  std::ostringstream schema;
  write_schema_tsv(schema, with_flat_labels(s.schema));
  write_file(dir / snapshot_files::kSchema, schema.str());

  std::ostringstream sm;
  write_similarity_tsv(sm, s.sm);
  write_file(dir / snapshot_files::kSimilarity, sm.str());

  write_file(dir / snapshot_files::kHierarchy, hierarchy_to_json(s.hierarchy));

  std::ostringstream ranks;
  write_rank_tsv(ranks, s.ranks);
  write_file(dir / snapshot_files::kRanks, ranks.str());

  write_file(dir / snapshot_files::kQueries, queries_to_json(s.queries));
}

Snapshot load_snapshot(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("no snapshot at " + dir.string());
  Snapshot s;
  try {
    auto manifest = ordered_json::parse(read_file(dir / snapshot_files::kManifest));
    s.dataset_id = manifest.at("datasetId").get<std::string>();
    s.created_at = manifest.at("createdAt").get<std::string>();
    const auto& p = manifest.at("params");
    s.params = {p.at("alpha").get<double>(), p.at("beta").get<double>(),
                p.at("seed").get<std::uint64_t>()};

    s.schema = load_schema_tsv((dir / snapshot_files::kSchema).string());
    s.stats = schema_stats(s.schema);
    s.sm = similarity_matrix(s.schema);
    s.hierarchy = hierarchy_from_json(read_file(dir / snapshot_files::kHierarchy), s.sm);
    s.degrees = io_degrees(s.schema);
    s.ranks = rank_topics(s.hierarchy.leaves(), s.schema, s.sm, s.degrees);

    for (const auto& j : ordered_json::parse(read_file(dir / snapshot_files::kQueries))) {
      QueryRecord r;
      r.topic_id = j.at("topicId").get<std::string>();
      r.nl_question = j.at("nlQuestion").get<std::string>();
      r.sparql = j.at("sparql").get<std::string>();
      r.beta = j.at("beta").get<double>();
      r.share_template = j.at("shareTemplate").get<bool>();
      r.predicates = j.at("predicates").get<std::vector<std::string>>();
      r.concepts = j.at("concepts").get<std::vector<std::string>>();
      s.queries[r.topic_id].push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("snapshot ") + dir.string() + ": " + e.what(), 1);
  }
  for (const auto& id : s.leaf_ids()) s.queries[id];
  return s;
}

}  // namespace ontotopic
