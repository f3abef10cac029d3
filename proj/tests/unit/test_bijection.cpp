#include <doctest.h>

#include <set>

#include "freezetree/attach.hpp"
#include "freezetree/bijection.hpp"
#include "freezetree/rng.hpp"
#include "freezetree/seqgen.hpp"

using namespace freezetree;

namespace {
const char* kLeft = "a(1:8(2:4,6:a(9:11)),3:a(5:7,10:a))";
const char* kRight = "1(2(4,6(9(11,a),8)),3(5(7,10(a,a)),a))";
}

TEST_CASE("worked example in both directions") {
  const auto t = tree_from_canonical(kLeft);
  REQUIRE(has_increasing_labels(t));
  const auto b = phi(t);
  CHECK(to_string(b) == kRight);
  CHECK(is_increasing_binary(b));
  CHECK(b.leaf_count() == 8);
  CHECK(b.active_leaf_count() == 4);
  CHECK(canonical_form(psi(binary_tree_from_string(kRight))) == kLeft);
}

TEST_CASE("single vertex trees") {
  CHECK(to_string(phi(tree_from_canonical("a"))) == "a");
  CHECK(to_string(phi(tree_from_canonical("1"))) == "1");
  CHECK(canonical_form(psi(binary_tree_from_string("a"))) == "a");
  CHECK(canonical_form(psi(binary_tree_from_string("1(a,2)"))) == "2(1:a)");
}

TEST_CASE("phi rejects trees without increasing labels") {
  CHECK_THROWS_AS(phi(tree_from_canonical("5(1:a(3:2,4:a))")), PreconditionError);
}

TEST_CASE("binary parsing and json") {
  const auto b = binary_tree_from_string(kRight);
  CHECK(b.size() == 15);
  CHECK(binary_tree_from_json(binary_tree_to_json(b)) == b);
  CHECK_THROWS(binary_tree_from_string("1(2)"));
  CHECK_THROWS(binary_tree_from_string("1(2,a"));
  CHECK_FALSE(is_increasing_binary(binary_tree_from_string("2(1,a)")));
  CHECK_FALSE(is_increasing_binary(binary_tree_from_string("a(1,2)")));
}

TEST_CASE("round trips on random forward trees") {
  Rng r(12);
  for (int s = 0; s < 300; ++s) {
    const auto x = gen_iid(0.6, 40, r);
    const auto t = build_attach(x, x.size(), r);
    const auto key = canonical_form(t);
    const auto b = phi(t);
    CHECK(is_increasing_binary(b));
    CHECK(b.leaf_count() == t.size());
    CHECK(b.active_leaf_count() == t.active_count());
    CHECK(canonical_form(psi(b)) == key);
  }
}

TEST_CASE("family sizes agree on both sides") {
  for (int v = 1; v <= 5; ++v) {
    for (int k = 0; k <= v; ++k) {
      const auto trees = enumerate_increasing_trees(v, k);
      const auto bins = enumerate_increasing_binary(v, k);
      CHECK(trees.size() == bins.size());
      std::set<std::string> images;
      for (const auto& key : trees) images.insert(to_string(phi(tree_from_canonical(key))));
      std::set<std::string> all;
      for (const auto& b : bins) all.insert(to_string(b));
      CHECK(images == all);
    }
  }
}

TEST_CASE("tangent numbers") {
  const auto t = tangent_numbers(7);
  const std::vector<BigInt> expected{1, 2, 16, 272, 7936, 353792, 22368256};
  CHECK(t == expected);
  // first four by enumeration of fully frozen trees
  for (int n = 1; n <= 4; ++n) {
    CHECK(BigInt(enumerate_increasing_trees(n, 0).size()) == expected[static_cast<std::size_t>(n - 1)]);
    CHECK(count_t0n_exhaustive(n) == expected[static_cast<std::size_t>(n - 1)]);
  }
  CHECK(count_t0n(10) == BigInt("29088885112832"));
  CHECK_THROWS_AS(count_t0n_exhaustive(8), CapExceeded);
  CHECK_THROWS_AS(count_t0n_exhaustive(3, 9), PreconditionError);
}

TEST_CASE("sequences ending at a given height") {
  const auto seqs = sequences_ending_at(3, 0);
  // +1 -1 -1 is the only length-3 walk from 1 that first hits 0 at step 3
  REQUIRE(seqs.size() == 1);
  CHECK(seqs[0] == SignSequence{+1, -1, -1});
  for (const auto& x : sequences_ending_at(6, 2)) {
    const auto w = compute_walk(x);
    CHECK(w.at(6) == 2);
    CHECK(w.survives(6));
  }
}
