#include <doctest.h>

#include <cmath>
#include <thread>

#include "freezetree/parallel.hpp"
#include "freezetree/rng.hpp"
#include "freezetree/sequence.hpp"
#include "freezetree/stats.hpp"

using namespace freezetree;

TEST_CASE("total variation") {
  const std::map<std::string, double> p{{"a", 0.5}, {"b", 0.5}};
  const std::map<std::string, double> q{{"a", 0.25}, {"c", 0.75}};
  CHECK(tv_distance(p, q) == doctest::Approx(0.75));
  CHECK(tv_distance(p, p) == 0.0);
  const std::vector<double> u{0.2, 0.8}, v{0.5, 0.5, 0.0};
  CHECK(tv_distance(u, v) == doctest::Approx(0.3));
  const auto freq = normalize({{"x", 3}, {"y", 1}});
  CHECK(freq.at("x") == doctest::Approx(0.75));
}

TEST_CASE("chi-square tail") {
  CHECK(chi_square_sf(0.0, 3) == doctest::Approx(1.0));
  // P(chi2_1 > 3.841459) = 0.05
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_sf(2.0, 2) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("goodness of fit pools the tail") {
  const std::vector<double> pmf{0.5, 0.25, 0.125, 0.0625, 0.03125};
  const std::vector<std::int64_t> counts{50, 25, 12, 7, 3, 2, 1};
  const auto r = chi_square_gof(counts, pmf);
  CHECK(r.cells.back().back() == '+');
  std::int64_t total = 0;
  for (auto o : r.observed) total += o;
  CHECK(total == 100);
  double expected = 0;
  for (auto e : r.expected) {
    CHECK(e >= 5.0);
    expected += e;
  }
  CHECK(expected == doctest::Approx(100.0));
  CHECK(r.dof == static_cast<int>(r.cells.size()) - 1);
  CHECK(r.p_value > 0.5);
  const std::vector<std::int64_t> tiny{3};
  CHECK_THROWS_AS(chi_square_gof(tiny, pmf), PreconditionError);
}

TEST_CASE("goodness of fit detects a wrong law") {
  Rng r(1);
  std::vector<std::int64_t> counts(2);
  for (int i = 0; i < 10000; ++i) ++counts[r.bernoulli(0.55) ? 1 : 0];
  const std::vector<double> fair{0.5, 0.5};
  CHECK(chi_square_gof(counts, fair).p_value < 1e-3);
}

TEST_CASE("two-sample homogeneity") {
  Rng r(2);
  std::vector<std::int64_t> a(10), b(10);
  for (int i = 0; i < 5000; ++i) {
    ++a[r.below(10)];
    ++b[r.below(10)];
  }
  CHECK(chi_square_two_sample(a, b).p_value > 1e-3);
}

TEST_CASE("summaries") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  CHECK(s.count == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(s.min == 1.0);
  CHECK(s.max == 4.0);
  CHECK(fraction_within(v, 2.0, 3.0) == doctest::Approx(0.5));
  const auto cmp = compare_tv({{"a", 60}, {"b", 40}}, {{"a", 0.5}, {"b", 0.5}}, 0.2);
  CHECK(cmp.pass);
  CHECK(cmp.value == doctest::Approx(0.1));
  CHECK(cmp.to_json().at("kind") == "total-variation");
}

TEST_CASE("parallel map keeps index order for any thread count") {
  auto square = [](std::int64_t i) { return i * i; };
  const auto one = parallel_map(1000, 1, square);
  const auto four = parallel_map(1000, 4, square);
  CHECK(one == four);
  CHECK(one[999] == 999 * 999);
  CHECK(parallel_map(0, 3, square).empty());
  CHECK_THROWS(parallel_map(10, 3, [](std::int64_t i) -> int {
    if (i == 7) throw std::runtime_error("boom");
    return 0;
  }));
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
