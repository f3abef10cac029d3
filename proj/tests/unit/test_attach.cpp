#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "freezetree/attach.hpp"
#include "freezetree/rng.hpp"
#include "freezetree/tree.hpp"
#include "freezetree/tree_io.hpp"

using namespace freezetree;

namespace {
const SignSequence kExample{+1, -1, +1, +1, -1};
// Frozen root (label 2), active child by edge 1 which holds a vertex frozen
// at 5 (edge 3) and an active vertex (edge 4).
const char* kT5 = "2(1:a(3:5,4:a))";
}

TEST_CASE("trivial builds") {
  Rng r(1);
  const auto t0 = build_attach(SignSequence{}, 0, r);
  CHECK(t0.size() == 1);
  CHECK(t0.active_count() == 1);
  const auto t1 = build_attach(SignSequence{-1}, 1, r);
  CHECK(t1.size() == 1);
  CHECK(t1.status[0] == VertexStatus::frozen(1));
  CHECK(canonical_form(t1) == "1");
}

TEST_CASE("build stops evolving once every vertex is frozen") {
  Rng r(2);
  const auto t = build_attach(SignSequence{-1, +1, +1}, 3, r);
  CHECK(t.size() == 1);
  CHECK(t.n == 1);
}

TEST_CASE("example tree probability and attainability") {
  CHECK(tree_probability(kExample, 5) == Rational(1, 12));
  CHECK(tree_probability(SignSequence{+1}, 1) == 1);
  CHECK(tree_probability(SignSequence::constant_plus(3), 3) == Rational(1, 6));
  CHECK(attainable_count(kExample, 5) == 12);
  CHECK_THROWS_AS(tree_probability(SignSequence{-1, +1}, 2), PreconditionError);

  const auto t5 = tree_from_canonical(kT5);
  CHECK(is_attainable(t5, kExample, 5));
  // frozen labels 2 and 5 exchanged: 2 now sits below edges 1 and 3
  const auto swapped = tree_from_canonical("5(1:a(3:2,4:a))");
  CHECK_FALSE(is_attainable(swapped, kExample, 5));
  CHECK_FALSE(has_increasing_labels(swapped));
  CHECK(canonical_form(swapped) != kT5);
  // count mismatch: one active vertex too many
  CHECK_FALSE(is_attainable(tree_from_canonical("a"), SignSequence{-1}, 1));
}

TEST_CASE("enumeration examples") {
  const auto e1 = enumerate_trees(SignSequence{+1, -1, -1}, 3);
  REQUIRE(e1.size() == 2);
  for (const auto& e : e1) CHECK(e.probability == Rational(1, 2));
  CHECK(enumerate_trees(SignSequence{+1}, 1).size() == 1);
  const auto e2 = enumerate_trees(SignSequence{+1, +1}, 2);
  REQUIRE(e2.size() == 2);
  CHECK(e2[0].key != e2[1].key);
  CHECK_THROWS_AS(enumerate_trees(SignSequence::constant_plus(12), 12, 1000), CapExceeded);
}

TEST_CASE("exhaustive law: equal probabilities summing to one") {
  // every admissible sequence of length <= 8 with prod S_{i-1} <= 5040
  for (int n = 1; n <= 8; ++n) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      SignSequence x;
      for (int i = 0; i < n; ++i) x.push_back(mask >> i & 1 ? 1 : -1);
      const auto w = compute_walk(x);
      if (!w.survives(n - 1)) continue;
      if (attainable_count(x, n) > 5040) continue;
      const auto trees = enumerate_trees(x, n);
      Rational total = 0;
      for (const auto& e : trees) {
        CHECK(e.probability == tree_probability(x, n));
        total += e.probability;
        CHECK(is_attainable(tree_from_canonical(e.key), x, n));
      }
      CHECK(total == 1);
      CHECK(BigInt(trees.size()) == attainable_count(x, n));
    }
  }
}

TEST_CASE("monte carlo frequencies within 4 sigma of the exact law") {
  const SignSequence y{+1, +1, -1, -1, +1, -1};  // 1*2*3*2*1*2 = 24
  const Count n = y.size();
  const auto exact = enumerate_trees(y, n);
  std::map<std::string, std::int64_t> counts;
  Rng r(99);
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) {
    const auto t = build_attach(y, n, r);
    CHECK(is_attainable(t, y, n));
    ++counts[canonical_form(t)];
  }
  CHECK(counts.size() == exact.size());
  const double p = 1.0 / 24;
  const double sigma = std::sqrt(samples * p * (1 - p));
  for (const auto& e : exact) CHECK(std::abs(counts[e.key] - samples * p) < 4 * sigma);
}

TEST_CASE("canonical form is idempotent and ignores active slots") {
  Rng r(4);
  const SignSequence x{+1, +1, -1, +1, +1, -1, -1, +1};
  for (int s = 0; s < 50; ++s) {
    const auto t = build_attach(x, x.size(), r);
    const auto key = canonical_form(t);
    CHECK(canonical_form(tree_from_canonical(key)) == key);
    CHECK(is_well_formed(t));
    CHECK(has_increasing_labels(t));
  }
  CHECK(canonical_form(tree_from_canonical("a1(1:a2)")) == canonical_form(tree_from_canonical("a2(1:a1)")));
}

TEST_CASE("depths, height and distance") {
  const auto t = tree_from_canonical(kT5);
  const auto d = vertex_depths(t);
  CHECK(tree_height(t) == 2);
  CHECK(d[static_cast<std::size_t>(t.root)] == 0);
  VertexId a = -1, b = -1;
  for (VertexId v = 0; v < t.size(); ++v) {
    if (d[v] == 2 && a < 0) a = v;
    else if (d[v] == 2) b = v;
  }
  REQUIRE(b >= 0);
  CHECK(tree_distance(t, d, a, b) == 2);
  CHECK(tree_distance(t, d, a, t.root) == 2);
  CHECK(tree_distance(t, d, a, a) == 0);
}

TEST_CASE("json, tsv and dot export") {
  const auto t = tree_from_canonical(kT5);
  const auto j = tree_to_json(t);
  CHECK(j.at("vertices").size() == 4);
  CHECK(canonical_form(tree_from_json(j)) == kT5);
  std::ostringstream tsv;
  write_edge_tsv(tsv, t);
  const auto lines = tsv.str();
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 3);
  std::ostringstream dot;
  write_dot(dot, t);
  CHECK(dot.str().find("digraph") != std::string::npos);
}

TEST_CASE("outcome callback visits every branch") {
  std::int64_t branches = 0;
  for_each_attach_outcome(kExample, 5, [&](const FreezeTree&) { ++branches; });
  CHECK(branches == 12);
}
