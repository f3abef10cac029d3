#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "freezetree/rng.hpp"
#include "freezetree/seqgen.hpp"
#include "freezetree/stats.hpp"
#include "freezetree/tree.hpp"

namespace freezetree {

enum class Builder { attach, coalescent };

std::string to_string(Builder b);
Builder builder_from_string(const std::string& s);

// Statistics a manifest may request.
//   height    tree height
//   depth     depth of a uniform active vertex
//   distance  distance between two independent uniform vertices
//   hplus     sum of 1/S_i over plus steps (a property of the sequence)
//   vertices  vertex count
//   coal      coalescence time of two uniform vertices (coalescent builder)
//   canonical frequency of each canonical tree (small n only)
inline const std::vector<std::string>& known_statistics() {
  static const std::vector<std::string> names{"height", "depth", "distance", "hplus",
                                              "vertices", "coal", "canonical"};
  return names;
}

struct RunManifest {
  std::string experiment_id;
  SequenceSpec sequence;
  Builder builder = Builder::attach;
  std::int64_t replications = 1;
  std::uint64_t master_seed = 0;
  std::vector<std::string> statistics{"height"};
  std::string output_dir;  // empty: FREEZETREE_OUT_DIR or "out"
  unsigned threads = 0;    // 0: one per hardware thread; never affects results

  void validate() const;
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// Output directory for a manifest: its own field, then FREEZETREE_OUT_DIR,
// then ./out.
std::filesystem::path resolve_output_dir(const RunManifest& m);

struct ReplicationRecord {
  std::int64_t index = 0;
  std::vector<double> values;  // one per numeric statistic, NaN if undefined
  std::string canonical;       // empty unless requested
};

struct ExperimentResult {
  RunManifest manifest;
  std::vector<std::string> numeric_statistics;
  std::vector<ReplicationRecord> records;
  nlohmann::json stats;  // sorted keys, no timing or thread information

  std::string stats_json() const { return stats.dump(2) + "\n"; }
};

// Runs every replication with its own stream (master_seed, index). The
// result is identical for every thread count.
ExperimentResult run_experiment(const RunManifest& m);

// Writes stats.json and replications.csv under <dir>/<experiment_id>/.
// Refuses to replace an existing experiment unless `overwrite`.
std::filesystem::path write_experiment(const ExperimentResult& r, const std::filesystem::path& dir,
                                       bool overwrite = false);

// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

// Per-tree draws: depth of a uniform active vertex (NaN when the tree has
// none), distance between two independent uniform vertices, and height.
struct TreeDraw {
  double active_depth = 0.0;
  double distance = 0.0;
  double height = 0.0;
};

TreeDraw draw_tree_stats(const FreezeTree& t, Rng& rng);

struct DepthDistanceSummary {
  Summary active_depth;
  Summary distance;
  Summary height;

  nlohmann::json to_json() const;
};

// One draw per tree with streams derived from `seed`. Throws
// PreconditionError if a tree has no active vertex and require_active.
DepthDistanceSummary depth_distance_stats(const std::vector<FreezeTree>& trees, std::uint64_t seed,
                                          bool require_active = true);

// Uniform vertex with active status, or kNoVertex.
VertexId uniform_active_vertex(const FreezeTree& t, Rng& rng);

}  // namespace freezetree
