#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "freezetree/asymptotics.hpp"
#include "freezetree/sequence.hpp"
#include "freezetree/verify.hpp"

using namespace freezetree;

namespace {
// f(c) by plain bisection on the increasing branch f > 1, to 1e-15.
double bisect_fc(double c) {
  const double rhs = (c - 1) / (c + 1);
  double lo = 1.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * (std::log(mid) - 1) < rhs ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("f(c) anchors") {
  CHECK(std::abs(solve_fc(1.0) - std::numbers::e) < 1e-12);
  // values from a 50-digit root finder
  CHECK(std::abs(solve_fc(0.5) - 2.36026230491334228) < 1e-12);
  CHECK(std::abs(solve_fc(0.2) - 1.92133141358270496) < 1e-12);
  CHECK(std::abs(solve_fc(0.5) - kFcHalf) < 1e-12);
  CHECK_THROWS_AS(solve_fc(0.0), PreconditionError);
  CHECK_THROWS_AS(solve_fc(1.5), PreconditionError);
}

TEST_CASE("f(c) agrees with bisection and keeps a tiny residual") {
  for (int i = 0; i < 100; ++i) {
    const double c = std::pow(10.0, -3.0 + 3.0 * i / 99.0);
    const double f = solve_fc(c);
    CHECK(f > 1.0);
    CHECK(std::abs(fc_residual(c, f)) < 1e-12);
    CHECK(std::abs(f - bisect_fc(c)) < 1e-9);
  }
}

TEST_CASE("linear constants") {
  const auto k = linear_constants(0.5);
  CHECK(k.depth == doctest::Approx(1.5));
  CHECK(k.distance == doctest::Approx(3.0));
  CHECK(k.height == doctest::Approx(3.5403934573700134).epsilon(1e-12));
  const auto one = linear_constants(1.0);
  CHECK(one.depth == doctest::Approx(1.0));
  CHECK(one.height == doctest::Approx(std::numbers::e));
}

TEST_CASE("bennett bound") {
  CHECK(bennett_g(0.0) == 0.0);
  CHECK(bennett_g(1.0) == doctest::Approx(2 * std::log(2.0) - 1));
  CHECK(bennett_tail(10.0, 10.0) == doctest::Approx(0.021006074709707943).epsilon(1e-12));
  CHECK(bennett_g(1e-9) == doctest::Approx(0.5e-18).epsilon(1e-6));
}

TEST_CASE("height envelope and curve export") {
  const auto [lo, hi] = height_envelope(10.0, 0.05);
  CHECK(lo == doctest::Approx(9.5));
  CHECK(hi == doctest::Approx(10 * (std::numbers::e + 0.05)));
  const auto curve = constants_curve(200);
  REQUIRE(curve.size() == 200);
  CHECK(curve.front().c == doctest::Approx(0.005));
  CHECK(curve.back().c == doctest::Approx(1.0));
  CHECK(curve.back().height == doctest::Approx(std::numbers::e));
  std::ostringstream os;
  write_constants_csv(os, curve);
  const auto text = os.str();
  CHECK(text.rfind("c,depth,distance,f_c,height\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 201);
}
