#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ontotopic/clustering.hpp"
#include "ontotopic/query.hpp"
#include "ontotopic/ranking.hpp"
#include "ontotopic/schema.hpp"
#include "ontotopic/similarity.hpp"

namespace ontotopic {

struct AnalysisParams {
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
  std::uint64_t seed = kDefaultSeed;
};

// One generated query as stored on disk.
struct QueryRecord {
  std::string topic_id;
  std::string nl_question;
  std::string sparql;
  double beta = kDefaultBeta;
  bool share_template = false;
  std::vector<std::string> predicates;
  std::vector<std::string> concepts;
};

// Everything derived from one schema graph. Immutable once built.
struct Snapshot {
  std::string dataset_id;
  std::string created_at;  // ISO-8601 UTC
  AnalysisParams params;
  SchemaGraph schema;
  StatsReport stats;
  SimilarityMatrix sm;
  TopicHierarchy hierarchy;
  DegreeIndex degrees;
  std::vector<TopicRankRow> ranks;  // by final position
  std::map<std::string, std::vector<QueryRecord>> queries;  // leaf id -> queries

  const TopicRankRow* rank_of(const std::string& topic_id) const;
  std::vector<std::string> leaf_ids() const;
};

// Reads an N-Triples file (".nt") or a pre-extracted schema TSV (anything
// else).
SchemaGraph load_input(const std::filesystem::path& path,
                       ExtractDiagnostics* diagnostics = nullptr);

// Similarity, hierarchy, ranking and per-leaf queries for a schema graph.
Snapshot analyze(SchemaGraph schema, std::string dataset_id,
                 const AnalysisParams& params, std::string created_at);

// Timestamp for a snapshot of `input`: SOURCE_DATE_EPOCH when set, otherwise
// the input's modification time, so reruns on the same file are identical.
std::string snapshot_timestamp(const std::filesystem::path& input);

// Files written into the snapshot directory.
namespace snapshot_files {
inline constexpr const char* kManifest = "snapshot.json";
inline constexpr const char* kStats = "stats.json";
inline constexpr const char* kSchema = "schema.tsv";
inline constexpr const char* kSimilarity = "similarity.tsv";
inline constexpr const char* kHierarchy = "hierarchy.json";
inline constexpr const char* kRanks = "ranks.tsv";
inline constexpr const char* kQueries = "queries.json";
}  // namespace snapshot_files

void write_snapshot(const Snapshot& s, const std::filesystem::path& dir);

// Rebuilds a snapshot from its directory. The similarity matrix and ranks are
// recomputed from the stored schema, which reproduces them exactly.
Snapshot load_snapshot(const std::filesystem::path& dir);

std::string stats_to_json(const StatsReport& s);
std::string queries_to_json(const std::map<std::string, std::vector<QueryRecord>>& q);

}  // namespace ontotopic
