#include <doctest.h>

#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <sstream>

#include "freezetree/attach.hpp"
#include "freezetree/sir.hpp"

using namespace freezetree;

namespace {
// Closed form of the fluid ODE: g(t) = W(lambda e^{lambda (1 - t)}) / lambda.
double g_exact(double lambda, double t) {
  return boost::math::lambert_w0(lambda * std::exp(lambda * (1.0 - t))) / lambda;
}
}  // namespace

TEST_CASE("fluid solution against the Lambert W closed form") {
  for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
    const auto sol = fluid_solve(lambda, 2.5, 1e-4);
    double worst = 0.0;
    for (double t = 0.0; t <= 2.5; t += 0.01237) worst = std::max(worst, std::abs(sol.g_at(t) - g_exact(lambda, t)));
    CHECK_MESSAGE(worst < 1e-10, "lambda " << lambda << " error " << worst);
  }
}

TEST_CASE("fluid end point for lambda = 2") {
  const auto sol = fluid_solve(2.0);
  CHECK(sol.t0 == doctest::Approx(1.5936242600400401).epsilon(1e-9));
  CHECK(sol.g_at(sol.t0) == doctest::Approx(0.20318786997997995).epsilon(1e-9));
  CHECK(std::abs(sol.i_fluid(sol.t0)) < 1e-9);
  CHECK(sol.i_fluid(0.5) > 0.0);
  CHECK(sol.i_fluid(2.0) == 0.0);
  CHECK(fluid_solve(0.8).t0 == 0.0);
  CHECK(fluid_rhs(2.0, 1.0) == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("fluid and trajectory csv") {
  std::ostringstream os;
  write_fluid_csv(os, fluid_solve(2.0, 2.0, 0.01), 10);
  CHECK(os.str().rfind("t,g,i_fluid\n", 0) == 0);
  Rng r(3);
  auto [x, traj] = gen_sir(50, 0.04, r);
  std::ostringstream ts;
  write_trajectory_csv(ts, traj);
  const auto text = ts.str();
  CHECK(text.rfind("k,H,I\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == traj.absorption() + 2);
}

TEST_CASE("infection tree") {
  Rng r(9);
  const auto st = sir_tree(200, 2.0 / 200, r);
  CHECK(st.tree.active_count() == 0);
  CHECK(is_well_formed(st.tree));
  CHECK(is_attainable(st.tree, st.signs, st.signs.size()));
  CHECK(st.tree.size() == 1 + (st.trajectory.n - st.trajectory.h.back()));
}

TEST_CASE("survival threshold") {
  CHECK(default_survival_threshold(100000) == 316);
  SirTrajectory t;
  t.i = {1, 0};
  CHECK_FALSE(survival_filter(t, 1));
  CHECK(survival_filter(t, 0));
}

TEST_CASE("geometric root degree") {
  const auto pmf = geometric_offspring_pmf(2.0, 3);
  CHECK(pmf[0] == doctest::Approx(1.0 / 3));
  CHECK(pmf[1] == doctest::Approx(2.0 / 9));
  CHECK(pmf[3] == doctest::Approx(8.0 / 81));
  const auto c = geometric_offspring_check(2.0, 2000, 4000, 77, 2);
  CHECK(c.replications == 4000);
  CHECK(c.chi_square.p_value > 1e-3);
  const auto zero = geometric_offspring_check(0.0, 100, 50, 1, 1);
  CHECK(zero.degree_counts == std::vector<std::int64_t>{50});
  CHECK(zero.chi_square.p_value == 1.0);
}

TEST_CASE("root degree sampler matches the full tree") {
  // same seed: the joint chain and the full build agree on the root
  const Count n = 300;
  const double lam = 1.5 / n;
  std::vector<std::int64_t> direct(40), full(40);
  Rng a(5), b(6);
  for (int s = 0; s < 20000; ++s) {
    ++direct[std::min<std::size_t>(39, static_cast<std::size_t>(sample_root_degree(n, lam, a)))];
    const auto st = sir_tree(n, lam, b);
    std::int64_t deg = 0;
    for (VertexId v = 0; v < st.tree.size(); ++v) deg += st.tree.parent[v] == st.tree.root;
    ++full[std::min<std::size_t>(39, static_cast<std::size_t>(deg))];
  }
  CHECK(chi_square_two_sample(direct, full).p_value > 1e-3);
}

TEST_CASE("profile distances") {
  SirTrajectory t;
  t.n = 2;
  t.i = {1, 2, 1, 0};
  t.h = {2, 1, 1, 1};
  // k/n - min(k/n, 2 - k/n) at k = 0..4 against I = 1, 2, 1, 0, 0
  CHECK(recursive_profile_distance(t) == doctest::Approx(0.5));
}
