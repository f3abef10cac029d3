#pragma once

#include <cstdint>
#include <string>
#include <span>
#include <string_view>
#include <vector>

#include "freezetree/sequence.hpp"

namespace freezetree {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

// Active(slot) or Frozen(time). Active vertices carry their index among the
// active vertices of the finished tree; frozen ones carry their freeze time.
class VertexStatus {
 public:
  static constexpr VertexStatus active(std::int32_t slot) { return VertexStatus(~slot); }
  static constexpr VertexStatus frozen(std::int32_t time) { return VertexStatus(time); }

  constexpr bool is_frozen() const { return value_ >= 0; }
  constexpr bool is_active() const { return value_ < 0; }
  constexpr std::int32_t slot() const { return ~value_; }
  constexpr std::int32_t freeze_time() const { return value_; }

  constexpr bool operator==(const VertexStatus&) const = default;

 private:
  // Freeze times (>= 0) as is, slots bitwise complemented, so the status
  // packs into four bytes.
  constexpr explicit VertexStatus(std::int32_t value) : value_(value) {}
  std::int32_t value_ = -1;
};

// Rooted tree with frozen/active vertices and time-labelled edges.
// edge_time[v] labels the edge from v to its parent (0 for the root).
struct FreezeTree {
  Count n = 0;
  VertexId root = 0;
  std::vector<VertexId> parent;
  std::vector<VertexStatus> status;
  std::vector<std::int32_t> edge_time;

  VertexId size() const { return static_cast<VertexId>(parent.size()); }
  Count active_count() const;
  Count frozen_count() const { return size() - active_count(); }

  static FreezeTree single_active();
};

// Children lists in compressed form, each sorted by edge label.
struct ChildIndex {
  std::vector<VertexId> offset;
  std::vector<VertexId> child;

  std::span<const VertexId> of(VertexId v) const {
    return {child.data() + offset[v], child.data() + offset[v + 1]};
  }
};

ChildIndex child_index(const FreezeTree& t);

// Depth of each vertex below the root.
std::vector<std::int32_t> vertex_depths(const FreezeTree& t);
std::int32_t tree_height(const FreezeTree& t);

// Graph distance between u and v given precomputed depths.
std::int32_t tree_distance(const FreezeTree& t, std::span<const std::int32_t> depth,
                           VertexId u, VertexId v);

// Single root, parents in range, no cycles.
bool is_well_formed(const FreezeTree& t);

// Membership in the increasing double-labelled family: edge labels strictly
// increase away from the root, every frozen label exceeds the labels of
// its adjacent edges, and all integer labels are distinct and positive.
bool has_increasing_labels(const FreezeTree& t);

// Key invariant under renaming of vertex ids and of active slots. Children
// are listed in increasing edge-label order, e.g. "2(1:a(3:5,4:a))" for a
// frozen root labelled 2 whose active child (edge 1) has a frozen child 5
// and an active child.
std::string canonical_form(const FreezeTree& t);

// Same as canonical_form but active vertices keep their slot ("a1", "a2",
// ...), which distinguishes the S_n! relabellings of a coalescent output.
std::string labelled_form(const FreezeTree& t);

// Inverse of canonical_form/labelled_form. Vertex ids follow preorder.
FreezeTree tree_from_canonical(std::string_view key);

}  // namespace freezetree
