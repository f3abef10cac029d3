#include <doctest.h>

#include <sstream>

#include "freezetree/rng.hpp"
#include "freezetree/seqgen.hpp"
#include "freezetree/sequence.hpp"

using namespace freezetree;

namespace {
const SignSequence kExample{+1, -1, +1, +1, -1};
}

TEST_CASE("walk of the five-step example") {
  const auto w = compute_walk(kExample);
  CHECK(w.s == std::vector<std::int32_t>{1, 2, 1, 2, 3, 2});
  CHECK_FALSE(w.tau.has_value());
  CHECK(w.vertex_count(5) == 4);
  CHECK(w.survives(5));
}

TEST_CASE("walk absorption") {
  const auto w = compute_walk(SignSequence{+1, -1, -1, +1});
  CHECK(w.tau == 3);
  CHECK_FALSE(w.survives(3));
  CHECK(w.survives(2));
  CHECK(compute_walk(SignSequence{-1}).tau == 1);
  CHECK(compute_walk(SignSequence{}).s == std::vector<std::int32_t>{1});
}

TEST_CASE("h_plus and h_minus by direct summation") {
  const auto w = compute_walk(kExample);
  // plus steps 1, 3, 4 at heights 2, 2, 3; minus steps 2, 5 at heights 1, 2
  CHECK(h_plus(w, 5) == doctest::Approx(1.0 / 2 + 1.0 / 2 + 1.0 / 3));
  CHECK(h_minus(w, 5) == doctest::Approx(1.0 + 1.0 / 2));
  CHECK(h_plus(w, 0) == 0.0);
  const auto all = compute_walk(SignSequence::constant_plus(4));
  CHECK(h_plus(all, 4) == doctest::Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5));
  CHECK_THROWS_AS(h_plus(compute_walk(SignSequence{-1}), 1), PreconditionError);
}

TEST_CASE("local limit diagnostic") {
  const auto d = local_limit_criterion(kExample, 5);
  CHECK(d.partial_sum == doctest::Approx(1.5));
  CHECK(local_limit_criterion(SignSequence::constant_plus(10), 10).partial_sum == 0.0);
  CHECK_FALSE(local_limit_criterion(SignSequence::constant_plus(10), 10).still_growing);
}

TEST_CASE("prefix and equality") {
  CHECK(kExample.prefix(2) == SignSequence{+1, -1});
  CHECK(kExample.is_plus(1));
  CHECK_FALSE(kExample.is_plus(2));
  CHECK_THROWS(SignSequence{2});
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng d(7, 3);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += d.next() == c.next();
  CHECK(same == 0);
}

TEST_CASE("rng below is unbiased on a small bound") {
  Rng r(11);
  std::array<int, 3> hist{};
  const int draws = 300000;
  for (int i = 0; i < draws; ++i) ++hist[r.below(3)];
  for (int h : hist) CHECK(std::abs(h - draws / 3) < 5 * std::sqrt(draws * 2.0 / 9));
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("iid generator") {
  Rng r(5);
  const auto x = gen_iid(0.75, 2000, r, true);
  CHECK(x.size() == 2000);
  CHECK(compute_walk(x).survives(2000));
  Rng r2(5);
  CHECK(gen_iid(0.75, 2000, r2, true) == x);
  Rng r3(1);
  CHECK_THROWS_AS(gen_iid(0.501, 100000, r3, true, 2), ConditioningError);
  CHECK_THROWS(gen_iid(0.5, 10, r3, true));
  CHECK_THROWS(gen_iid(1.0, 10, r3));
  Rng r4(2);
  const auto y = gen_iid(0.0, 50, r4);
  CHECK(compute_walk(y).tau == 1);
  CHECK(gen_constant_plus(3) == SignSequence{+1, +1, +1});
  CHECK(compute_walk(gen_constant_plus(5)).at(5) == 6);
}

TEST_CASE("iid sign mean") {
  Rng r(8);
  const Count n = 1'000'000;
  const auto x = gen_iid(0.75, n, r);
  double sum = 0;
  for (auto s : x.raw()) sum += s;
  CHECK(std::abs(sum / static_cast<double>(n) - 0.5) < 3e-3);
}

TEST_CASE("sir chain identity I_k = 2(n - H_k) - k + 1") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    const Count n = 500;
    auto [x, traj] = gen_sir(n, 2.0 / n, r);
    REQUIRE(traj.h.size() == traj.i.size());
    CHECK(traj.i.back() == 0);
    for (std::size_t k = 0; k < traj.i.size(); ++k) {
      CHECK(traj.i[k] == 2 * (n - traj.h[k]) - static_cast<std::int32_t>(k) + 1);
    }
    const auto w = compute_walk(x);
    CHECK(w.tau == x.size());
    for (Count k = 0; k <= x.size(); ++k) CHECK(w.at(k) == traj.infectives(k));
  }
}

TEST_CASE("sir with zero rate recovers at once") {
  Rng r(1);
  auto [x, traj] = gen_sir(100, 0.0, r);
  CHECK(x == SignSequence{-1});
  CHECK(traj.absorption() == 1);
}

TEST_CASE("sequence file round trip") {
  Rng r(3);
  const auto x = gen_iid(0.6, 40, r);
  std::stringstream ss;
  write_sequence(ss, x, "header line");
  CHECK(ss.str().rfind("# header line", 0) == 0);
  CHECK(read_sequence(ss) == x);
  std::stringstream bad("+1\n0\n");
  CHECK_THROWS(read_sequence(bad));
}

TEST_CASE("SequenceSpec validation") {
  SequenceSpec s;
  s.kind = SequenceKind::iid;
  s.horizon = 10;
  s.p = 1.5;
  CHECK_THROWS(s.validate());
  s.p = 0.4;
  s.condition_survival = true;
  CHECK_THROWS(s.validate());
  CHECK(sequence_kind_from_string("sir") == SequenceKind::sir);
  CHECK_THROWS(sequence_kind_from_string("bogus"));
}
