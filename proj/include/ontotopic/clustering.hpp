#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ontotopic/similarity.hpp"

namespace ontotopic {

// Members are row indices into a SimilarityMatrix.
struct ClusterAssignment {
  std::vector<std::size_t> members;
  std::vector<std::size_t> assignment;  // parallel to members, ids 0..k-1
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double wcss = 0.0;

  // Member indices per cluster id.
  std::vector<std::vector<std::size_t>> groups() const;
};

inline constexpr int kKMeansRestarts = 10;
inline constexpr int kKMeansMaxIterations = 100;

// Lloyd's k-means on SM rows restricted to the member columns. Each of the
// restarts seeds centroids by D²-weighted sampling of members; the restart
// with the lowest within-cluster sum of squares wins. Cluster ids are
// renumbered in order of first appearance along `members`, so cluster 0
// always holds members[0].
// Throws std::invalid_argument unless 2 <= k <= members.size().
ClusterAssignment kmeans_assign(const SimilarityMatrix& sm,
                                const std::vector<std::size_t>& members,
                                std::size_t k, std::uint64_t seed);

struct PredicateSilhouette {
  std::size_t predicate = 0;  // SM row index
  std::size_t cluster = 0;
  double a = 0.0;  // mean dissimilarity to co-members
  double b = 0.0;  // lowest mean dissimilarity to a sibling cluster
  double width = 0.0;
};

struct SilhouetteReport {
  std::vector<PredicateSilhouette> predicates;  // in group order
  std::vector<double> cluster_mean;
  std::vector<std::size_t> cluster_size;
};

// Silhouette widths with dissimilarity 1 - sm. Members of singleton clusters
// get width 0. Throws std::invalid_argument for fewer than two groups or an
// empty group.
SilhouetteReport silhouette(const SimilarityMatrix& sm,
                            const std::vector<std::vector<std::size_t>>& groups);

struct ChildScore {
  double mean_sw = 0.0;
  std::size_t predicate_count = 0;
};

// Size-weighted mean silhouette of sibling topics.
double neighborhood_sw(std::span<const ChildScore> children);

struct Split {
  std::size_t k = 0;
  double nsw = 0.0;
  ClusterAssignment assignment;
  SilhouetteReport silhouette;
};

inline constexpr std::size_t kMinSplittable = 4;

// Sweeps k over 2..k_max (0 selects min(10, |members| - 1)) and keeps the k
// with the highest neighbourhood silhouette, the smallest k on ties. Returns
// nullopt when the node has fewer than kMinSplittable members.
std::optional<Split> optimal_k(const SimilarityMatrix& sm,
                               const std::vector<std::size_t>& members,
                               std::size_t k_max, std::uint64_t seed);

struct TopicNode {
  std::string id;  // "T<depth>_<position in that level>"
  std::size_t depth = 0;
  std::vector<std::size_t> members;     // SM indices, ascending
  std::vector<std::string> predicates;  // parallel to members
  std::vector<TopicNode> children;
  double mean_sw = 0.0;       // mean width within the parent's split; 0 at root
  std::optional<double> nsw;  // best neighbourhood silhouette tried here
  std::size_t chosen_k = 0;   // 0 for leaves
  double contribution = 1.0;  // |this| / |parent|

  bool is_leaf() const { return children.empty(); }
};

inline constexpr double kDefaultAlpha = 0.5;
inline constexpr std::uint64_t kDefaultSeed = 42;

class TopicHierarchy {
 public:
  TopicHierarchy() = default;
  TopicHierarchy(TopicNode root, double alpha, std::uint64_t seed);

  const TopicNode& root() const { return root_; }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }

  // Topics visible at each depth, left to right; a leaf stays visible at all
  // deeper levels. levels()[0] is the root.
  const std::vector<std::vector<std::string>>& levels() const {
    return levels_;
  }
  // Level sizes from depth 1 down, e.g. "2:7:8"; "1" for a lone root.
  std::string level_shape() const;

  std::vector<const TopicNode*> leaves() const;
  const TopicNode* find(const std::string& id) const;

  friend bool operator==(const TopicHierarchy& a, const TopicHierarchy& b);

 private:
  TopicNode root_;
  double alpha_ = kDefaultAlpha;
  std::uint64_t seed_ = kDefaultSeed;
  std::vector<std::vector<std::string>> levels_;
};

// Divisive clustering: a node is split into its optimal_k clusters when it
// has enough members and the split's neighbourhood silhouette reaches alpha.
TopicHierarchy build_hierarchy(const SimilarityMatrix& sm,
                               double alpha = kDefaultAlpha,
                               std::uint64_t seed = kDefaultSeed);

// Nested JSON with stable field order.
std::string hierarchy_to_json(const TopicHierarchy& h);
TopicHierarchy hierarchy_from_json(const std::string& text,
                                   const SimilarityMatrix& sm);

}  // namespace ontotopic
