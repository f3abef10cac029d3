#include "freezetree/sir.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "freezetree/attach.hpp"
#include "freezetree/parallel.hpp"

namespace freezetree {

double fluid_rhs(double lambda, double g) { return -lambda * g / (1.0 + lambda * g); }

double FluidSolution::g_at(double t) const {
  if (t <= 0.0) return g.front();
  if (t >= t_max()) return g.back();
  const auto k = std::min(static_cast<std::size_t>(t / dt), g.size() - 2);
  const double h = t_grid[k + 1] - t_grid[k];
  const double s = (t - t_grid[k]) / h;
  const double g0 = g[k], g1 = g[k + 1];
  const double d0 = fluid_rhs(lambda, g0) * h, d1 = fluid_rhs(lambda, g1) * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * g0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * g1 + (s3 - s2) * d1;
}

double FluidSolution::i_fluid(double t) const { return std::max(2.0 - 2.0 * g_at(t) - t, 0.0); }

FluidSolution fluid_solve(double lambda, double t_max, double dt) {
  if (!(lambda > 0.0)) throw PreconditionError("fluid_solve: lambda must be positive");
  if (!(t_max > 0.0) || !(dt > 0.0) || dt > t_max) throw PreconditionError("fluid_solve: need 0 < dt <= t_max");
  FluidSolution sol;
  sol.lambda = lambda;
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt));
  sol.dt = t_max / static_cast<double>(steps);
  const double h = sol.dt;
  sol.t_grid.reserve(steps + 1);
  sol.g.reserve(steps + 1);
  double g = 1.0;
  sol.t_grid.push_back(0.0);
  sol.g.push_back(g);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double k1 = fluid_rhs(lambda, g);
    const double k2 = fluid_rhs(lambda, g + 0.5 * h * k1);
    const double k3 = fluid_rhs(lambda, g + 0.5 * h * k2);
    const double k4 = fluid_rhs(lambda, g + h * k3);
    g += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    sol.t_grid.push_back(static_cast<double>(k) * h);
    sol.g.push_back(g);
  }

  // 2 - 2g(t) - t starts at 0 with slope (lambda - 1)/(lambda + 1) and is
  // concave, so it has a positive zero only when lambda > 1.
  if (lambda > 1.0) {
    auto phi = [&](double t) { return 2.0 - 2.0 * sol.g_at(t) - t; };
    std::size_t k = 1;
    while (k <= steps && phi(sol.t_grid[k]) > 0.0) ++k;
    if (k > steps) throw PreconditionError("fluid_solve: t_max too small to reach the end of the epidemic");
    double lo = sol.t_grid[k - 1], hi = sol.t_grid[k];
    if (k == 1) lo = 0.5 * hi;  // skip the trivial zero at t = 0
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) > 0.0 ? lo : hi) = mid;
    }
    sol.t0 = 0.5 * (lo + hi);
  }
  return sol;
}

void write_fluid_csv(std::ostream& os, const FluidSolution& sol, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  const auto old = os.precision(12);
  os << "t,g,i_fluid\n";
  for (std::size_t k = 0; k < sol.g.size(); k += stride) {
    const double t = sol.t_grid[k];
    os << t << ',' << sol.g[k] << ',' << std::max(2.0 - 2.0 * sol.g[k] - t, 0.0) << '\n';
  }
  os.precision(old);
}

void write_trajectory_csv(std::ostream& os, const SirTrajectory& traj) {
  os << "k,H,I\n";
  for (std::size_t k = 0; k < traj.i.size(); ++k) os << k << ',' << traj.h[k] << ',' << traj.i[k] << '\n';
}

SirTree sir_tree(Count n, double lambda_n, Rng& rng) {
  auto [x, traj] = gen_sir(n, lambda_n, rng);
  SirTree out;
  out.tree = build_attach(x, x.size(), rng);
  out.trajectory = std::move(traj);
  out.signs = std::move(x);
  return out;
}

Count default_survival_threshold(Count n) {
  return static_cast<Count>(std::floor(std::sqrt(static_cast<double>(n))));
}

std::int64_t sample_root_degree(Count n, double lambda_n, Rng& rng) {
  if (n < 1) throw PreconditionError("sample_root_degree: n must be at least 1");
  std::int64_t h = n;
  std::int64_t inf = 1;
  std::int64_t degree = 0;
  for (;;) {
    const double rate = lambda_n * static_cast<double>(h);
    const bool infect = rng.uniform() * (1.0 + rate) < rate;
    // The acting vertex is uniform among the inf active ones.
    const bool root = rng.below(static_cast<std::uint64_t>(inf)) == 0;
    if (infect) {
      --h;
      ++inf;
      if (root) ++degree;
    } else {
      if (root) return degree;
      --inf;
    }
  }
}

std::vector<double> geometric_offspring_pmf(double lambda, std::size_t kmax) {
  if (!(lambda >= 0.0)) throw PreconditionError("geometric_offspring_pmf: lambda must be non-negative");
  std::vector<double> pmf(kmax + 1);
  const double q = lambda / (1.0 + lambda);
  double term = 1.0 / (1.0 + lambda);
  for (auto& p : pmf) {
    p = term;
    term *= q;
  }
  return pmf;
}

OffspringCheck geometric_offspring_check(double lambda, Count n, std::int64_t replications,
                                         std::uint64_t master_seed, unsigned threads) {
  if (!(lambda >= 0.0)) throw PreconditionError("geometric_offspring_check: lambda must be non-negative");
  if (replications < 1) throw PreconditionError("geometric_offspring_check: need replications >= 1");
  OffspringCheck out;
  out.lambda = lambda;
  out.n = n;
  out.replications = replications;
  const double lambda_n = lambda_n_from_total(lambda, n);
  const auto degrees = parallel_map(replications, threads, [&](std::int64_t r) {
    Rng rng = replication_stream(master_seed, static_cast<std::uint64_t>(r));
    return sample_root_degree(n, lambda_n, rng);
  });
  for (auto d : degrees) {
    if (static_cast<std::size_t>(d) >= out.degree_counts.size()) out.degree_counts.resize(static_cast<std::size_t>(d) + 1, 0);
    ++out.degree_counts[static_cast<std::size_t>(d)];
  }
  if (lambda == 0.0) {
    out.chi_square.cells = {"0"};
    out.chi_square.observed = {out.degree_counts.empty() ? 0 : out.degree_counts[0]};
    out.chi_square.expected = {static_cast<double>(replications)};
    out.chi_square.statistic = static_cast<double>(replications - out.chi_square.observed[0]);
    out.chi_square.p_value = out.chi_square.observed[0] == replications ? 1.0 : 0.0;
    return out;
  }
  const auto pmf = geometric_offspring_pmf(lambda, std::max<std::size_t>(out.degree_counts.size(), 64));
  out.chi_square = chi_square_gof(out.degree_counts, pmf);
  return out;
}

double fluid_comparison(const SirTrajectory& traj, const FluidSolution& sol) {
  const double n = static_cast<double>(traj.n);
  const auto kmax = static_cast<Count>(std::floor(sol.t_max() * n));
  double sup = 0.0;
  for (Count k = 0; k <= kmax; ++k) {
    const double t = static_cast<double>(k) / n;
    sup = std::max(sup, std::abs(traj.infectives(k) / n - sol.i_fluid(t)));
  }
  return sup;
}

double recursive_profile_distance(const SirTrajectory& traj) {
  const double n = static_cast<double>(traj.n);
  double sup = 0.0;
  for (Count k = 0; k <= 2 * traj.n; ++k) {
    const double t = static_cast<double>(k) / n;
    sup = std::max(sup, std::abs(traj.infectives(k) / n - std::min(t, 2.0 - t)));
  }
  return sup;
}

}  // namespace freezetree
