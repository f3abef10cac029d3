#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "freezetree/attach.hpp"
#include "freezetree/rational.hpp"
#include "freezetree/tree.hpp"

namespace freezetree {

// Binary plane tree whose vertices carry either a positive integer or the
// letter a (stored as 0). Node ids follow preorder, so two trees are equal
// exactly when their node arrays are.
struct IncreasingBinaryTree {
  struct Node {
    std::int32_t label = 0;  // 0 means "a"
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool is_leaf() const { return left < 0; }
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;  // nodes[0] is the root

  std::int32_t size() const { return static_cast<std::int32_t>(nodes.size()); }
  std::int32_t leaf_count() const { return (size() + 1) / 2; }
  std::int32_t active_leaf_count() const;

  bool operator==(const IncreasingBinaryTree&) const = default;
};

// Every vertex has zero or two children, only leaves may be "a", integer
// labels are distinct, positive, and increase away from the root.
bool is_increasing_binary(const IncreasingBinaryTree& b);

// Root edge with the smallest label becomes the root; the subtree hanging
// from it goes left and the remainder right. Throws PreconditionError unless
// t has increasing labels.
IncreasingBinaryTree phi(const FreezeTree& t);

// Inverse of phi: the right spine leaf of each subtree is its root, and the
// left subtree is attached below it by an edge carrying the node's label.
// Active vertices get slots in vertex-id order.
FreezeTree psi(const IncreasingBinaryTree& b);

// "1(2,a)" style: a label, then "(left,right)" for internal nodes.
std::string to_string(const IncreasingBinaryTree& b);
IncreasingBinaryTree binary_tree_from_string(std::string_view s);

// {root: 0, nodes: [{id, label: int | "a", left: id | null, right: id | null}]}
nlohmann::json binary_tree_to_json(const IncreasingBinaryTree& b);
IncreasingBinaryTree binary_tree_from_json(const nlohmann::json& j);

// Every increasing binary plane tree with `leaves` leaves, `actives` of them
// labelled a, and integer labels 1..2*leaves-actives-1.
std::vector<IncreasingBinaryTree> enumerate_increasing_binary(std::int32_t leaves, std::int32_t actives);

// Every member of the increasing double-labelled family with `vertices`
// vertices, `actives` of them active, as canonical keys in sorted order.
// Obtained by running the forward construction over every sign sequence
// that produces such trees.
std::vector<std::string> enumerate_increasing_trees(std::int32_t vertices, std::int32_t actives,
                                                    std::int64_t cap = kDefaultEnumerationCap);

// Sign sequences of length m whose walk stays positive before m (and may
// hit zero at m), ending at height k.
std::vector<SignSequence> sequences_ending_at(std::int32_t m, std::int32_t k);

// Number of fully frozen increasing trees with n vertices, by exhaustive
// union over every sequence of length 2n-1 absorbed exactly at 2n-1.
// Requires 1 <= n <= max_n (at most 8).
BigInt count_t0n_exhaustive(std::int32_t n, std::int32_t max_n = 7);

// Tangent numbers T_1..T_count (1, 2, 16, 272, ...) from the Seidel-Entringer
// boustrophedon triangle.
std::vector<BigInt> tangent_numbers(std::int32_t count);

// T_n alone; equals count_t0n_exhaustive(n).
BigInt count_t0n(std::int32_t n);

}  // namespace freezetree
