#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "freezetree/rng.hpp"
#include "freezetree/seqgen.hpp"
#include "freezetree/stats.hpp"
#include "freezetree/tree.hpp"

namespace freezetree {

// Fixed-step RK4 solution of g' = -lambda g / (1 + lambda g), g(0) = 1, and
// the rescaled infective profile max(2 - 2g(t) - t, 0).
struct FluidSolution {
  double lambda = 0.0;
  double dt = 0.0;
  std::vector<double> t_grid;
  std::vector<double> g;
  double t0 = 0.0;  // first positive zero of 2 - 2g(t) - t; 0 when lambda <= 1

  double t_max() const { return t_grid.back(); }
  // Cubic Hermite interpolation between grid points using the known slope.
  double g_at(double t) const;
  double i_fluid(double t) const;
};

double fluid_rhs(double lambda, double g);

FluidSolution fluid_solve(double lambda, double t_max = 2.5, double dt = 1e-4);

// Writes t,g,i_fluid on the solver grid, keeping every `stride`-th point.
void write_fluid_csv(std::ostream& os, const FluidSolution& sol, std::size_t stride = 1);

// k,H,I for every step of the chain.
void write_trajectory_csv(std::ostream& os, const SirTrajectory& traj);

struct SirTree {
  FreezeTree tree;
  SirTrajectory trajectory;
  SignSequence signs;
};

// The chain from (n, 1) followed by the forward construction over the whole
// induced sequence: the infection tree at absorption.
SirTree sir_tree(Count n, double lambda_n, Rng& rng);

// Proxy for survival: the epidemic lasts more than threshold_steps.
inline bool survival_filter(const SirTrajectory& traj, Count threshold_steps) {
  return traj.absorption() > threshold_steps;
}

Count default_survival_threshold(Count n);

// Number of children of the root in the infection tree. Runs the chain and
// follows only the root, stopping once it recovers.
std::int64_t sample_root_degree(Count n, double lambda_n, Rng& rng);

// mu(k) = (1/(1+lambda)) (lambda/(1+lambda))^k for k = 0..kmax.
std::vector<double> geometric_offspring_pmf(double lambda, std::size_t kmax);

struct OffspringCheck {
  double lambda = 0.0;
  Count n = 0;
  std::int64_t replications = 0;
  std::vector<std::int64_t> degree_counts;  // index = root degree
  ChiSquareResult chi_square;
};

// Root degree over `replications` runs with lambda_n = lambda / n, compared
// with the geometric law. For lambda = 0 the degree is always zero and the
// result carries statistic 0, p-value 1.
OffspringCheck geometric_offspring_check(double lambda, Count n, std::int64_t replications,
                                         std::uint64_t master_seed, unsigned threads = 0);

// sup over 0 <= k <= t_max n of |I_k / n - i_fluid(k / n)|.
double fluid_comparison(const SirTrajectory& traj, const FluidSolution& sol);

// sup over 0 <= k <= 2n of |I_k / n - min(k/n, 2 - k/n)|.
double recursive_profile_distance(const SirTrajectory& traj);

}  // namespace freezetree
