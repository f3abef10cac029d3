#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "freezetree/attach.hpp"
#include "freezetree/rational.hpp"
#include "freezetree/rng.hpp"
#include "freezetree/sequence.hpp"
#include "freezetree/tree.hpp"

namespace freezetree {

struct MergeRecord {
  std::int32_t step;  // i, the label of the new edge
  VertexId root1;     // stays the root
  VertexId root2;
};

// Output of the time-reversed growth-coalescent construction.
//
// Vertex ids follow order of appearance: the S_n initial active vertices
// a_1..a_{S_n} are 0..S_n-1 (slot j-1 for a_j), then frozen vertices in the
// order they are inserted, i.e. by decreasing label.
struct CoalescentBuild {
  FreezeTree tree;
  std::vector<std::int32_t> birth;
  std::vector<MergeRecord> merge_log;  // in processing order, i = n down to 1
};

// Reads x_n, ..., x_1 starting from S_n one-vertex trees. A minus step i
// inserts a one-vertex tree labelled i; a plus step i picks an ordered pair
// of distinct trees uniformly among the S_i (S_i - 1) possibilities and adds
// an edge labelled i from the first root to the second. Requires tau > n.
CoalescentBuild build_coalescent(const SignSequence& x, Count n, Rng& rng);

// P(b_n(V) < m) for V uniform over the vertex labels: (m + 1 - S_m) / (n + 1 + S_n).
Rational birth_time_cdf(const WalkProfile& w, Count n, Count m);

// Birth times are deterministic: n for active vertices, u - 1 for the
// vertex frozen at time u.
inline Count birth_of_frozen(std::int32_t label) { return label - 1; }

// Law of the coalescence time of two vertices born at bu and bv. Zero when
// x_{c+1} = -1 or c is outside [0, min(bu, bv)).
Rational coalescence_pmf(const WalkProfile& w, Count n, Count bu, Count bv, Count c);

// Depth of every vertex in the final tree.
std::vector<std::int32_t> heights(const CoalescentBuild& b);

// Draws sum_{i <= birth, x_i = +1} Y_i with independent Y_i ~ Bernoulli(1/S_i),
// which has the law of the height of any vertex born at `birth`.
std::int32_t height_oracle_sample(const WalkProfile& w, Count birth, Rng& rng);

// Largest i such that u and v share a tree of the forest after processing
// down to step i + 1, recovered by replaying the merge log through a
// union-find. For u == v this is the birth time.
Count coalescence_time(const CoalescentBuild& b, VertexId u, VertexId v);

struct CoalescentOutcome {
  std::string labelled_key;   // labelled_form, active slots kept
  std::string canonical_key;  // canonical_form
  Rational probability;
};

// Exhaustive expansion of every ordered-pair choice, one entry per branch.
// `cap` bounds the number of branches.
std::vector<CoalescentOutcome> enumerate_coalescent(const SignSequence& x, Count n,
                                                    std::int64_t cap = kDefaultEnumerationCap);

// Calls `visit` with every branch's build; only valid during the call.
void for_each_coalescent_outcome(const SignSequence& x, Count n,
                                 const std::function<void(const CoalescentBuild&)>& visit,
                                 std::int64_t cap = kDefaultEnumerationCap);

}  // namespace freezetree
