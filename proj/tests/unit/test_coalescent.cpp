#include <doctest.h>

#include <map>

#include "freezetree/attach.hpp"
#include "freezetree/coalescent.hpp"
#include "freezetree/rng.hpp"
#include "freezetree/seqgen.hpp"
#include "freezetree/stats.hpp"

using namespace freezetree;

namespace {
const SignSequence kExample{+1, -1, +1, +1, -1};

Count birth_of(const FreezeTree& t, VertexId v) {
  return t.status[v].is_active() ? t.n : birth_of_frozen(t.status[v].freeze_time());
}
}  // namespace

TEST_CASE("reverse build shape") {
  Rng r(3);
  const auto b = build_coalescent(kExample, 5, r);
  CHECK(b.tree.size() == 4);
  CHECK(b.tree.active_count() == 2);
  CHECK(b.merge_log.size() == 3);
  CHECK(b.merge_log.front().step == 4);
  CHECK(b.merge_log.back().step == 1);
  CHECK(is_well_formed(b.tree));
  CHECK(is_attainable(b.tree, kExample, 5));
  for (VertexId v = 0; v < b.tree.size(); ++v) CHECK(b.birth[v] == birth_of(b.tree, v));
  CHECK_THROWS_AS(build_coalescent(SignSequence{-1}, 1, r), PreconditionError);
}

TEST_CASE("birth-time cdf example and direct count") {
  const auto w = compute_walk(kExample);
  CHECK(birth_time_cdf(w, 5, 2) == Rational(1, 4));
  // births: actives 5, 5; frozen 2 -> 1, frozen 5 -> 4; N = 4
  const std::vector<Count> births{5, 5, 1, 4};
  for (Count m = 1; m <= 5; ++m) {
    Count below = 0;
    for (auto b : births) below += b < m;
    CHECK(birth_time_cdf(w, 5, m) == Rational(below, 4));
  }
}

TEST_CASE("coalescence pmf sums to one and vanishes off its support") {
  const SignSequence x{+1, +1, -1, +1, -1, +1, +1, -1};
  const auto w = compute_walk(x);
  const Count n = x.size();
  for (Count bu = 0; bu <= n; ++bu) {
    for (Count bv = 0; bv <= n; ++bv) {
      if ((bu < n && x.is_plus(bu + 1)) || (bv < n && x.is_plus(bv + 1))) continue;
      if (std::min(bu, bv) == 0) continue;
      Rational total = 0;
      for (Count c = 0; c < std::min(bu, bv); ++c) {
        const auto p = coalescence_pmf(w, n, bu, bv, c);
        if (!x.is_plus(c + 1)) CHECK(p == 0);
        total += p;
      }
      CHECK(total == 1);
      CHECK(coalescence_pmf(w, n, bu, bv, std::min(bu, bv)) == 0);
      CHECK(coalescence_pmf(w, n, bu, bv, -1) == 0);
    }
  }
}

TEST_CASE("coalescence times match the pmf by simulation") {
  const SignSequence x{+1, +1, -1, +1, +1, -1, +1, -1, +1, -1};
  const auto w = compute_walk(x);
  const Count n = x.size();
  std::map<std::pair<Count, Count>, std::map<std::string, std::int64_t>> seen;
  Rng r(17);
  const int samples = 40000;
  for (int s = 0; s < samples; ++s) {
    const auto b = build_coalescent(x, n, r);
    // two fixed actives, and the vertex frozen at 10 with an active
    VertexId f10 = kNoVertex;
    for (VertexId v = 0; v < b.tree.size(); ++v)
      if (b.tree.status[v].is_frozen() && b.tree.status[v].freeze_time() == 10) f10 = v;
    ++seen[{n, n}][std::to_string(coalescence_time(b, 0, 1))];
    ++seen[{9, n}][std::to_string(coalescence_time(b, f10, 0))];
  }
  for (auto& [births, counts] : seen) {
    std::map<std::string, double> exact;
    for (Count c = 0; c < std::min(births.first, births.second); ++c) {
      const auto p = coalescence_pmf(w, n, births.first, births.second, c);
      if (p != 0) exact[std::to_string(c)] = static_cast<double>(p);
    }
    const auto cmp = compare_tv(counts, exact, 0.02);
    CHECK_MESSAGE(cmp.pass, "tv " << cmp.value);
  }
}

TEST_CASE("heights agree with the Bernoulli sum oracle") {
  Rng seq_rng(8);
  const auto x = gen_iid(0.8, 400, seq_rng, true);
  const auto w = compute_walk(x);
  const Count n = x.size();
  std::vector<std::int64_t> sim(64), oracle(64);
  Rng r(21);
  for (int s = 0; s < 20000; ++s) {
    const auto b = build_coalescent(x, n, r);
    const auto h = heights(b);
    ++sim[static_cast<std::size_t>(h[0])];  // active a_1, born at n
    ++oracle[static_cast<std::size_t>(height_oracle_sample(w, n, r))];
  }
  const auto res = chi_square_two_sample(sim, oracle);
  CHECK_MESSAGE(res.p_value > 1e-3, "p " << res.p_value);
}

TEST_CASE("exhaustive reverse law on a small sequence") {
  const auto out = enumerate_coalescent(kExample, 5);
  // prod over plus steps of S_i (S_i - 1) = 2*1 * 2*1 * 3*2 = 24 branches
  CHECK(out.size() == 24);
  std::map<std::string, Rational> labelled, canon;
  for (const auto& o : out) {
    labelled[o.labelled_key] += o.probability;
    canon[o.canonical_key] += o.probability;
  }
  for (const auto& [k, p] : labelled) CHECK(p == Rational(1, 2) * tree_probability(kExample, 5));
  std::map<std::string, Rational> forward;
  for (const auto& e : enumerate_trees(kExample, 5)) forward[e.key] = e.probability;
  CHECK(canon == forward);
}

TEST_CASE("coalescence time of a vertex with itself is its birth") {
  Rng r(5);
  const auto b = build_coalescent(kExample, 5, r);
  for (VertexId v = 0; v < b.tree.size(); ++v) CHECK(coalescence_time(b, v, v) == b.birth[v]);
}
