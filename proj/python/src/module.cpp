#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "freezetree/asymptotics.hpp"
#include "freezetree/attach.hpp"
#include "freezetree/bijection.hpp"
#include "freezetree/coalescent.hpp"
#include "freezetree/harness.hpp"
#include "freezetree/seqgen.hpp"
#include "freezetree/sir.hpp"
#include "freezetree/tree_io.hpp"
#include "freezetree/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace freezetree;

namespace {

SignSequence to_signs(const std::vector<int>& v) { return SignSequence(std::span<const int>(v)); }

std::vector<int> from_signs(const SignSequence& x) { return {x.raw().begin(), x.raw().end()}; }

// Exact rationals cross the boundary as (numerator, denominator) strings so
// that Python can rebuild a Fraction without loss.
std::pair<std::string, std::string> to_pair(const Rational& r) {
  return {numerator(r).str(), denominator(r).str()};
}

std::string coalescent_json(const CoalescentBuild& b) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& m : b.merge_log) log.push_back({m.step, m.root1, m.root2});
  return nlohmann::json{{"tree", tree_to_json(b.tree)}, {"birth", b.birth}, {"merge_log", log}}.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "uniform attachment trees with freezing";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_OverflowError);
  py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_RuntimeError);

  m.def("walk", [](const std::vector<int>& x) {
    const auto w = compute_walk(to_signs(x));
    return py::make_tuple(w.s, w.tau ? py::cast(*w.tau) : py::none());
  }, "x"_a, "walk(x) -> (S_0..S_n, tau or None)");

  m.def("h_plus", [](const std::vector<int>& x, Count n) { return h_plus(compute_walk(to_signs(x)), n); }, "x"_a,
        "n"_a);
  m.def("h_minus", [](const std::vector<int>& x, Count n) { return h_minus(compute_walk(to_signs(x)), n); }, "x"_a,
        "n"_a);

  m.def("gen_iid", [](double p, Count n, std::uint64_t seed, bool conditioned, std::int64_t max_attempts) {
    Rng rng(seed);
    return from_signs(gen_iid(p, n, rng, conditioned, max_attempts));
  }, "p"_a, "n"_a, "seed"_a, "conditioned"_a = false, "max_attempts"_a = 1'000'000);

  m.def("gen_sir", [](Count n, double lambda_n, std::uint64_t seed) {
    Rng rng(seed);
    auto [x, traj] = gen_sir(n, lambda_n, rng);
    return py::make_tuple(from_signs(x), traj.h, traj.i);
  }, "n"_a, "lambda_n"_a, "seed"_a, "gen_sir(n, lambda_n, seed) -> (signs, H, I)");

  m.def("build_attach", [](const std::vector<int>& x, Count n, std::uint64_t seed) {
    Rng rng(seed);
    py::gil_scoped_release release;
    return tree_to_json(build_attach(to_signs(x), n, rng)).dump();
  }, "x"_a, "n"_a, "seed"_a, "forward construction; returns the tree as JSON text");

  m.def("build_coalescent", [](const std::vector<int>& x, Count n, std::uint64_t seed) {
    Rng rng(seed);
    py::gil_scoped_release release;
    return coalescent_json(build_coalescent(to_signs(x), n, rng));
  }, "x"_a, "n"_a, "seed"_a, "reverse construction; JSON with tree, birth and merge_log");

  m.def("canonical_form", [](const std::string& tree_json) {
    return canonical_form(tree_from_json(nlohmann::json::parse(tree_json)));
  }, "tree_json"_a);

  m.def("tree_probability", [](const std::vector<int>& x, Count n) { return to_pair(tree_probability(to_signs(x), n)); },
        "x"_a, "n"_a);

  m.def("enumerate_trees", [](const std::vector<int>& x, Count n, std::int64_t cap) {
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> out;
    for (const auto& e : enumerate_trees(to_signs(x), n, cap)) out.emplace_back(e.key, to_pair(e.probability));
    return out;
  }, "x"_a, "n"_a, "cap"_a = kDefaultEnumerationCap);

  m.def("birth_time_cdf", [](const std::vector<int>& x, Count n, Count mm) {
    return to_pair(birth_time_cdf(compute_walk(to_signs(x)), n, mm));
  }, "x"_a, "n"_a, "m"_a);

  m.def("coalescence_pmf", [](const std::vector<int>& x, Count n, Count bu, Count bv, Count c) {
    return to_pair(coalescence_pmf(compute_walk(to_signs(x)), n, bu, bv, c));
  }, "x"_a, "n"_a, "bu"_a, "bv"_a, "c"_a);

  m.def("phi", [](const std::string& key) { return to_string(phi(tree_from_canonical(key))); }, "key"_a,
        "phi(canonical tree key) -> binary tree string");
  m.def("psi", [](const std::string& b) { return canonical_form(psi(binary_tree_from_string(b))); }, "binary"_a,
        "psi(binary tree string) -> canonical tree key");

  m.def("tangent_numbers", [](std::int32_t count) {
    std::vector<std::string> out;
    for (const auto& t : tangent_numbers(count)) out.push_back(t.str());
    return out;
  }, "count"_a);
  m.def("count_t0n_exhaustive", [](std::int32_t n) { return count_t0n_exhaustive(n).str(); }, "n"_a);

  m.def("solve_fc", &solve_fc, "c"_a);
  m.def("linear_constants", [](double c) {
    const auto k = linear_constants(c);
    return py::dict("c"_a = k.c, "depth"_a = k.depth, "distance"_a = k.distance, "f_c"_a = k.f_c,
                    "height"_a = k.height);
  }, "c"_a);
  m.def("bennett_tail", &bennett_tail, "m"_a, "t"_a);

  m.def("fluid_solve", [](double lambda, double t_max, double dt) {
    const auto sol = fluid_solve(lambda, t_max, dt);
    return py::make_tuple(sol.t_grid, sol.g, sol.t0);
  }, "lambda_"_a, "t_max"_a = 2.5, "dt"_a = 1e-4, "fluid_solve(lambda) -> (t, g, t0)");

  m.def("run_experiment", [](const std::string& manifest_json) {
    const auto mf = RunManifest::from_json(nlohmann::json::parse(manifest_json));
    py::gil_scoped_release release;
    return run_experiment(mf).stats_json();
  }, "manifest_json"_a, "runs a manifest; returns the statistics JSON text");

  m.def("suite_names", &suite_names);
  m.def("run_suite", [](const std::string& name, bool quick, std::uint64_t seed, unsigned threads) {
    VerifyOptions o;
    o.quick = quick;
    o.seed = seed;
    o.threads = threads;
    SuiteResult r;
    {
      py::gil_scoped_release release;
      r = run_suite(name, o);
    }
    py::list checks;
    for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.pass, c.detail));
    return py::make_tuple(r.pass(), checks, r.stats.dump());
  }, "name"_a, "quick"_a = true, "seed"_a = VerifyOptions{}.seed, "threads"_a = 0u);
}
