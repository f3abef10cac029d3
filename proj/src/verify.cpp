#include "freezetree/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>

#include <boost/math/special_functions/digamma.hpp>

#include "freezetree/asymptotics.hpp"
#include "freezetree/attach.hpp"
#include "freezetree/bijection.hpp"
#include "freezetree/coalescent.hpp"
#include "freezetree/harness.hpp"
#include "freezetree/parallel.hpp"
#include "freezetree/seqgen.hpp"
#include "freezetree/sir.hpp"

namespace freezetree {

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"exact", "bijection", "fc",  "height",
                                              "linear", "sir",      "perf", "determinism"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& options) {
  if (name == "exact") return verify_exact(options);
  if (name == "bijection") return verify_bijection(options);
  if (name == "fc") return verify_fc(options);
  if (name == "height") return verify_height(options);
  if (name == "linear") return verify_linear(options);
  if (name == "sir") return verify_sir(options);
  if (name == "perf") return verify_perf(options);
  if (name == "determinism") return verify_determinism(options);
  throw std::invalid_argument("unknown suite: " + name);
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check(SuiteResult& r, std::string name, bool pass, std::string detail) {
  r.checks.push_back({std::move(name), pass, std::move(detail)});
}

void say(const VerifyOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

// Independent stream family per experiment inside a suite.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) { return seed ^ (tag * 0x9E3779B97F4A7C15ULL); }

double mean_of(const std::vector<double>& v) { return summarize(v).mean; }

BigInt factorial(std::int64_t k) {
  BigInt f = 1;
  for (std::int64_t i = 2; i <= k; ++i) f *= i;
  return f;
}

std::string signs_text(const SignSequence& x) {
  std::string s = "(";
  for (Count i = 1; i <= x.size(); ++i) s += (i > 1 ? "," : "") + std::string(x.is_plus(i) ? "+1" : "-1");
  return s + ")";
}

// Sign sequences of length n whose walk is positive before n.
std::vector<SignSequence> admissible_sequences(std::int32_t n) {
  std::vector<SignSequence> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> signs(static_cast<std::size_t>(n));
    int s = 1;
    bool ok = true;
    for (std::int32_t i = 0; i < n; ++i) {
      if (s == 0) ok = false;
      signs[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? 1 : -1;
      s += signs[static_cast<std::size_t>(i)];
    }
    if (ok) out.emplace_back(std::span<const int>(signs));
  }
  return out;
}

}  // namespace

SuiteResult verify_exact(const VerifyOptions& o) {
  SuiteResult r;
  r.suite = "exact";
  const std::int32_t max_n = 6;
  const BigInt cap = 120;
  std::int64_t sequences = 0, forward_trees = 0, labelled_outcomes = 0, pairs = 0, cdf_points = 0;
  std::string fail_a, fail_b, fail_c, fail_d;

  for (std::int32_t n = 0; n <= max_n; ++n) {
    for (const auto& x : admissible_sequences(n)) {
      if (attainable_count(x, n) > cap) continue;
      ++sequences;
      const auto w = compute_walk(x);

      // Forward construction: every branch is a distinct attainable tree of
      // probability prod 1/S_{i-1}, and the total is 1.
      const Rational p = tree_probability(x, n);
      const auto trees = enumerate_trees(x, n);
      forward_trees += static_cast<std::int64_t>(trees.size());
      bool ok = BigInt(trees.size()) == attainable_count(x, n);
      Rational total = 0;
      for (const auto& e : trees) {
        ok = ok && e.probability == p;
        total += e.probability;
      }
      ok = ok && total == 1;
      for_each_attach_outcome(x, n, [&](const FreezeTree& t) { ok = ok && is_attainable(t, x, n); });
      if (!ok && fail_a.empty()) fail_a = signs_text(x);

      if (w.at(n) > 0) {
        // Reverse construction, with and without active labels.
        std::map<std::string, Rational> labelled, canonical;
        const auto outcomes = enumerate_coalescent(x, n);
        labelled_outcomes += static_cast<std::int64_t>(outcomes.size());
        for (const auto& e : outcomes) {
          labelled[e.labelled_key] += e.probability;
          canonical[e.canonical_key] += e.probability;
        }
        const Rational each = p / Rational(factorial(w.at(n)));
        bool okb = BigInt(labelled.size()) == factorial(w.at(n)) * attainable_count(x, n);
        for (const auto& [k, v] : labelled) okb = okb && v == each;
        okb = okb && canonical.size() == trees.size();
        for (const auto& e : trees) {
          const auto it = canonical.find(e.key);
          okb = okb && it != canonical.end() && it->second == e.probability;
        }
        if (!okb && fail_b.empty()) fail_b = signs_text(x);

        // Coalescence law: sums to one, and equals the law of the replayed
        // merge times over all branches.
        std::vector<std::int32_t> birth;
        std::map<std::pair<VertexId, VertexId>, std::vector<Rational>> dist;
        const Rational branch = outcomes.empty() ? Rational(0) : outcomes.front().probability;
        for_each_coalescent_outcome(x, n, [&](const CoalescentBuild& b) {
          if (birth.empty()) birth = b.birth;
          for (VertexId u = 0; u < b.tree.size(); ++u) {
            for (VertexId v = u + 1; v < b.tree.size(); ++v) {
              auto& d = dist[{u, v}];
              d.resize(static_cast<std::size_t>(n) + 1);
              d[static_cast<std::size_t>(coalescence_time(b, u, v))] += branch;
            }
          }
        });
        bool okc = true;
        for (const auto& [uv, d] : dist) {
          ++pairs;
          const Count bu = birth[static_cast<std::size_t>(uv.first)];
          const Count bv = birth[static_cast<std::size_t>(uv.second)];
          Rational sum = 0;
          for (Count c = 0; c <= n; ++c) {
            const Rational q = c < n ? coalescence_pmf(w, n, bu, bv, c) : Rational(0);
            sum += q;
            okc = okc && q == d[static_cast<std::size_t>(c)];
          }
          okc = okc && sum == 1;
        }
        if (!okc && fail_c.empty()) fail_c = signs_text(x);
      }

      // Birth-time law against a direct count over the vertex labels.
      if (n >= 1) {
        std::vector<Count> births(static_cast<std::size_t>(w.at(n)), n);
        for (Count i = 1; i <= n; ++i) {
          if (!x.is_plus(i)) births.push_back(i - 1);
        }
        bool okd = static_cast<Count>(births.size()) == w.vertex_count(n);
        for (Count m = 1; m <= n; ++m) {
          ++cdf_points;
          const auto below = std::count_if(births.begin(), births.end(), [m](Count b) { return b < m; });
          okd = okd && birth_time_cdf(w, n, m) == Rational(BigInt(below), BigInt(births.size()));
        }
        if (!okd && fail_d.empty()) fail_d = signs_text(x);
      }
    }
  }
  say(o, "exact: " + std::to_string(sequences) + " sequences");
  const std::string scope = " over " + std::to_string(sequences) + " sequences (n <= 6, prod S <= 120)";
  check(r, "(a) forward law: equal probabilities prod 1/S_{i-1}, total 1", fail_a.empty(),
        fail_a.empty() ? std::to_string(forward_trees) + " trees" + scope : "fails for x = " + fail_a);
  check(r, "(b) reverse law: 1/S_n! per labelled tree, equal to forward law after relabelling", fail_b.empty(),
        fail_b.empty() ? std::to_string(labelled_outcomes) + " branches" + scope : "fails for x = " + fail_b);
  check(r, "(c) coalescence pmf sums to 1 and matches exhaustive merge replay", fail_c.empty(),
        fail_c.empty() ? std::to_string(pairs) + " vertex pairs" + scope : "fails for x = " + fail_c);
  check(r, "(d) birth-time cdf equals direct count", fail_d.empty(),
        fail_d.empty() ? std::to_string(cdf_points) + " (n, m) points" + scope : "fails for x = " + fail_d);
  r.stats = {{"sequences", sequences},   {"forward_trees", forward_trees}, {"labelled_outcomes", labelled_outcomes},
             {"vertex_pairs", pairs},    {"cdf_points", cdf_points}};
  return r;
}

SuiteResult verify_bijection(const VerifyOptions& o) {
  SuiteResult r;
  r.suite = "bijection";
  const std::int32_t max_vertices = o.quick ? 5 : 6;
  nlohmann::json sizes = nlohmann::json::object();
  std::string fail_round, fail_onto;
  std::int64_t members = 0;
  for (std::int32_t nv = 1; nv <= max_vertices; ++nv) {
    for (std::int32_t k = 0; k <= nv; ++k) {
      const auto keys = enumerate_increasing_trees(nv, k);
      const auto bins = enumerate_increasing_binary(nv, k);
      const std::string tag = std::to_string(nv) + "," + std::to_string(k);
      sizes[tag] = {keys.size(), bins.size()};
      members += static_cast<std::int64_t>(keys.size() + bins.size());

      std::vector<std::string> images;
      images.reserve(keys.size());
      for (const auto& key : keys) {
        const auto b = phi(tree_from_canonical(key));
        const bool ok = is_increasing_binary(b) && b.leaf_count() == nv && b.active_leaf_count() == k &&
                        canonical_form(psi(b)) == key;
        if (!ok && fail_round.empty()) fail_round = key;
        images.push_back(to_string(b));
      }
      for (const auto& b : bins) {
        if (!(phi(psi(b)) == b) && fail_round.empty()) fail_round = to_string(b);
      }
      std::vector<std::string> targets;
      targets.reserve(bins.size());
      for (const auto& b : bins) targets.push_back(to_string(b));
      std::sort(images.begin(), images.end());
      std::sort(targets.begin(), targets.end());
      const bool distinct = std::adjacent_find(images.begin(), images.end()) == images.end();
      if ((!distinct || images != targets) && fail_onto.empty()) fail_onto = "vertices,actives = " + tag;
    }
    say(o, "bijection: trees with " + std::to_string(nv) + " vertices done");
  }
  check(r, "psi(phi(t)) = t and phi(psi(b)) = b", fail_round.empty(),
        fail_round.empty() ? std::to_string(members) + " members with up to " + std::to_string(max_vertices) +
                                 " vertices"
                           : "fails at " + fail_round);
  check(r, "phi maps each family one-to-one onto the binary family", fail_onto.empty(),
        fail_onto.empty() ? "all (vertices, actives) classes" : "fails at " + fail_onto);

  // Worked example: a tree with 4 active and 4 frozen vertices.
  const std::string example = "a(1:8(2:4,6:a(9:11)),3:a(5:7,10:a))";
  const std::string expected = "1(2(4,6(9(11,a),8)),3(5(7,10(a,a)),a))";
  const auto image = to_string(phi(tree_from_canonical(example)));
  check(r, "worked example with 8 vertices", image == expected, image);

  const std::vector<std::int64_t> known{1, 2, 16, 272, 7936, 353792, 22368256};
  const auto tangent = tangent_numbers(7);
  bool rec_ok = true;
  for (std::size_t i = 0; i < known.size(); ++i) rec_ok = rec_ok && tangent[i] == known[i];
  check(r, "tangent recurrence gives 1, 2, 16, 272, 7936, 353792, 22368256", rec_ok, "");

  const std::int32_t max_count = o.quick ? 5 : 7;
  std::string counts;
  bool count_ok = true;
  nlohmann::json exhaustive = nlohmann::json::array();
  for (std::int32_t n = 1; n <= max_count; ++n) {
    const BigInt c = count_t0n_exhaustive(n);
    exhaustive.push_back(c.str());
    count_ok = count_ok && c == tangent[static_cast<std::size_t>(n - 1)];
    counts += (n > 1 ? ", " : "") + c.str();
    say(o, "bijection: exhaustive count n = " + std::to_string(n) + " is " + c.str());
  }
  check(r, "exhaustive count of frozen trees equals recurrence for n <= " + std::to_string(max_count), count_ok,
        counts);
  r.stats = {{"family_sizes", sizes}, {"exhaustive_counts", exhaustive}};
  return r;
}

SuiteResult verify_fc(const VerifyOptions&) {
  SuiteResult r;
  r.suite = "fc";
  double worst = 0.0;
  double worst_c = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double c = std::pow(10.0, -3.0 + 3.0 * i / 99.0);
    const double f = solve_fc(c);
    const double res = std::abs(fc_residual(c, f));
    if (res > worst || !(f > 1.0)) {
      worst = f > 1.0 ? res : INFINITY;
      worst_c = c;
    }
  }
  check(r, "residual below 1e-12 on 100-point grid in (1e-3, 1]", worst < 1e-12,
        "max residual " + fmt(worst) + " at c = " + fmt(worst_c));
  const double e_err = std::abs(solve_fc(1.0) - std::numbers::e);
  check(r, "f(1) = e to 1e-12", e_err < 1e-12, "error " + fmt(e_err));
  const double half_err = std::abs(solve_fc(0.5) - kFcHalf);
  check(r, "f(1/2) matches the reference value to 1e-9", half_err < 1e-9, "error " + fmt(half_err));
  const auto k = linear_constants(0.5);
  r.stats = {{"max_residual", worst}, {"f_half", k.f_c}, {"height_half", k.height}};
  return r;
}

SuiteResult verify_height(const VerifyOptions& o) {
  SuiteResult r;
  r.suite = "height";
  const Count n = o.quick ? 100'000 : 1'000'000;
  const std::int64_t reps = o.quick ? 100 : 1000;
  const auto x = gen_constant_plus(n);
  const auto w = compute_walk(x);
  const double hp = h_plus(w, n);
  const double ln_n = std::log(static_cast<double>(n));
  // For S_i = i + 1 the sum is a harmonic number minus one.
  const double harmonic = boost::math::digamma(static_cast<double>(n) + 2.0) + std::numbers::egamma - 1.0;
  check(r, "h+ equals H_{n+1} - 1", std::abs(hp - harmonic) < 1e-9, fmt(hp) + " vs " + fmt(harmonic));

  struct Rep {
    double depth = 0, height = 0;
  };
  say(o, "height: " + std::to_string(reps) + " trees with n = " + std::to_string(n));
  const auto reps_out = parallel_map(reps, o.threads, [&](std::int64_t i) {
    Rng rng = replication_stream(sub_seed(o.seed, 1), static_cast<std::uint64_t>(i));
    const auto t = build_attach(x, n, rng);
    const auto depth = vertex_depths(t);
    const VertexId a = uniform_active_vertex(t, rng);
    return Rep{static_cast<double>(depth[static_cast<std::size_t>(a)]),
               static_cast<double>(*std::max_element(depth.begin(), depth.end()))};
  });
  std::vector<double> depth_ratio, height_ratio, height_ln;
  for (const auto& rep : reps_out) {
    depth_ratio.push_back(rep.depth / hp);
    height_ratio.push_back(rep.height / hp);
    height_ln.push_back(rep.height / ln_n);
  }
  const double dr = mean_of(depth_ratio);
  check(r, "active depth / h+ within 1 +- 0.05", std::abs(dr - 1.0) <= 0.05, "mean " + fmt(dr));
  const double inside = fraction_within(height_ratio, 1.0 - 0.05, std::numbers::e + 0.05);
  check(r, "Height / h+ in [0.95, e + 0.05] in at least 99% of trees", inside >= 0.99,
        "fraction " + fmt(inside));
  const double hl = mean_of(height_ln);
  check(r, "Height / ln n within 15% of e", std::abs(hl / std::numbers::e - 1.0) <= 0.15,
        "mean " + fmt(hl) + " (" + fmt(100.0 * (hl / std::numbers::e - 1.0)) + "%)");
  check(r, "h+ >= ln(n/4)", hp >= std::log(n / 4.0), fmt(hp) + " >= " + fmt(std::log(n / 4.0)));
  r.stats = {{"n", n},
             {"replications", reps},
             {"h_plus", hp},
             {"depth_over_hplus", summarize(depth_ratio).to_json()},
             {"height_over_hplus", summarize(height_ratio).to_json()},
             {"height_over_ln_n", summarize(height_ln).to_json()},
             {"envelope_fraction", inside}};
  return r;
}

SuiteResult verify_linear(const VerifyOptions& o) {
  SuiteResult r;
  r.suite = "linear";
  const Count n = o.quick ? 10'000 : 100'000;
  const std::int64_t reps = o.quick ? 200 : 1000;
  const double p = 0.75;
  const auto k = linear_constants(2.0 * p - 1.0);
  const double ln_n = std::log(static_cast<double>(n));

  struct Rep {
    double hplus = 0, depth = 0, distance = 0, height = 0, coal = 0;
    bool log_bound = false;
  };
  say(o, "linear: " + std::to_string(reps) + " conditioned sequences with n = " + std::to_string(n));
  const auto out = parallel_map(reps, o.threads, [&](std::int64_t i) {
    Rng rng = replication_stream(sub_seed(o.seed, 2), static_cast<std::uint64_t>(i));
    const auto x = gen_iid(p, n, rng, true);
    const auto w = compute_walk(x);
    Rep rep;
    rep.hplus = h_plus(w, n);
    rep.log_bound = rep.hplus >= std::log(n / 4.0);
    const auto t = build_attach(x, n, rng);
    const auto depth = vertex_depths(t);
    const VertexId a = uniform_active_vertex(t, rng);
    rep.depth = depth[static_cast<std::size_t>(a)];
    const auto size = static_cast<std::uint64_t>(t.size());
    const auto u = static_cast<VertexId>(rng.below(size));
    const auto v = static_cast<VertexId>(rng.below(size));
    rep.distance = tree_distance(t, depth, u, v);
    rep.height = *std::max_element(depth.begin(), depth.end());
    const auto cb = build_coalescent(x, n, rng);
    const auto u2 = static_cast<VertexId>(rng.below(size));
    const auto v2 = static_cast<VertexId>(rng.below(size));
    rep.coal = static_cast<double>(coalescence_time(cb, u2, v2)) / static_cast<double>(n);
    return rep;
  });
  std::vector<double> hp, depth, dist, height, coal;
  bool log_bound = true;
  for (const auto& rep : out) {
    hp.push_back(rep.hplus / ln_n);
    depth.push_back(rep.depth / ln_n);
    dist.push_back(rep.distance / ln_n);
    height.push_back(rep.height / ln_n);
    coal.push_back(rep.coal);
    log_bound = log_bound && rep.log_bound;
  }
  const double mh = mean_of(hp), md = mean_of(depth), mdist = mean_of(dist), mheight = mean_of(height);
  check(r, "h+ / ln n within 1.5 +- 0.08", std::abs(mh - k.depth) <= 0.08, "mean " + fmt(mh));
  check(r, "depth / ln n within 1.5 +- 0.15", std::abs(md - k.depth) <= 0.15, "mean " + fmt(md));
  check(r, "distance / ln n within 3 +- 0.3", std::abs(mdist - k.distance) <= 0.3, "mean " + fmt(mdist));
  const double target = k.depth * kFcHalf;
  check(r, "Height / ln n within 15% of 1.5 f(1/2)", std::abs(mheight / target - 1.0) <= 0.15,
        "mean " + fmt(mheight) + " vs " + fmt(target) + " (" + fmt(100.0 * (mheight / target - 1.0)) + "%)");
  const double small = fraction_within(coal, 0.0, std::nextafter(0.05, 0.0));
  check(r, "coal / n < 0.05 in at least 95% of replications", small >= 0.95, "fraction " + fmt(small));
  check(r, "h+ >= ln(n/4) on every sequence", log_bound, "");
  r.stats = {{"n", n},
             {"replications", reps},
             {"p", p},
             {"hplus_over_ln_n", summarize(hp).to_json()},
             {"depth_over_ln_n", summarize(depth).to_json()},
             {"distance_over_ln_n", summarize(dist).to_json()},
             {"height_over_ln_n", summarize(height).to_json()},
             {"coal_over_n", summarize(coal).to_json()},
             {"coal_small_fraction", small}};
  return r;
}

SuiteResult verify_sir(const VerifyOptions& o) {
  SuiteResult r;
  r.suite = "sir";
  const double lambda = 2.0;

  // Linear contact rate lambda / n.
  {
    const Count n = o.quick ? 10'000 : 100'000;
    const std::int64_t runs = o.quick ? 1000 : 10'000;
    const double ln_n = std::log(static_cast<double>(n));
    const auto fluid = fluid_solve(lambda, 2.5, 1e-4);
    const Count threshold = default_survival_threshold(n);
    struct Run {
      bool survived = false, identity = true;
      double fluid_sup = 0, depth = 0, distance = 0, height = 0;
    };
    say(o, "sir: " + std::to_string(runs) + " epidemics with lambda_n = 2/n, n = " + std::to_string(n));
    const auto out = parallel_map(runs, o.threads, [&](std::int64_t i) {
      Rng rng = replication_stream(sub_seed(o.seed, 3), static_cast<std::uint64_t>(i));
      auto [x, traj] = gen_sir(n, lambda_n_from_total(lambda, n), rng);
      Run run;
      for (Count k = 0; k < traj.absorption(); ++k) {
        run.identity = run.identity && traj.i[static_cast<std::size_t>(k)] ==
                                           2 * (n - traj.h[static_cast<std::size_t>(k)]) - k + 1;
      }
      run.survived = survival_filter(traj, threshold);
      if (!run.survived) return run;
      run.fluid_sup = fluid_comparison(traj, fluid);
      const auto t = build_attach(x, x.size(), rng);
      const auto depth = vertex_depths(t);
      double total = 0;
      for (auto d : depth) total += d;
      run.depth = total / static_cast<double>(depth.size());
      const auto size = static_cast<std::uint64_t>(t.size());
      const auto u = static_cast<VertexId>(rng.below(size));
      const auto v = static_cast<VertexId>(rng.below(size));
      run.distance = tree_distance(t, depth, u, v);
      run.height = *std::max_element(depth.begin(), depth.end());
      return run;
    });
    std::vector<double> sup, depth, dist, height;
    bool identity = true;
    for (const auto& run : out) {
      identity = identity && run.identity;
      if (!run.survived) continue;
      sup.push_back(run.fluid_sup);
      depth.push_back(run.depth / ln_n);
      dist.push_back(run.distance / ln_n);
      height.push_back(run.height / ln_n);
    }
    const double survival = static_cast<double>(sup.size()) / static_cast<double>(runs);
    check(r, "identity I_k = 2(n - H_k) - k + 1 on every trajectory", identity, "");
    check(r, "survival fraction 0.5 +- 0.05", std::abs(survival - 0.5) <= 0.05, fmt(survival));
    const double close = fraction_within(sup, 0.0, std::nextafter(0.03, 0.0));
    check(r, "fluid sup-distance < 0.03 in at least 95% of surviving runs", close >= 0.95,
          "fraction " + fmt(close) + ", mean " + fmt(mean_of(sup)));
    const double md = mean_of(depth), mdist = mean_of(dist);
    check(r, "depth / ln n within 10% of 2", std::abs(md / 2.0 - 1.0) <= 0.10, "mean " + fmt(md));
    check(r, "distance / ln n within 10% of 4", std::abs(mdist / 4.0 - 1.0) <= 0.10, "mean " + fmt(mdist));
    r.stats["linear_rate"] = {{"n", n},
                              {"runs", runs},
                              {"survival_fraction", survival},
                              {"fluid_t0", fluid.t0},
                              {"fluid_sup", summarize(sup).to_json()},
                              {"fluid_close_fraction", close},
                              {"depth_over_ln_n", summarize(depth).to_json()},
                              {"distance_over_ln_n", summarize(dist).to_json()},
                              // Reported only: the limit of this ratio is not known.
                              {"height_over_ln_n", summarize(height).to_json()}};
  }

  // Constant contact rate: the profile approaches min(t, 2 - t).
  {
    const Count n = o.quick ? 10'000 : 100'000;
    const std::int64_t runs = o.quick ? 20 : 100;
    say(o, "sir: " + std::to_string(runs) + " epidemics with lambda_n = 2, n = " + std::to_string(n));
    const auto sup = parallel_map(runs, o.threads, [&](std::int64_t i) {
      Rng rng = replication_stream(sub_seed(o.seed, 4), static_cast<std::uint64_t>(i));
      return recursive_profile_distance(gen_sir(n, lambda, rng).second);
    });
    const double close = fraction_within(sup, 0.0, std::nextafter(0.05, 0.0));
    check(r, "constant rate: profile sup-distance to min(t, 2 - t) < 0.05 in at least 95% of runs", close >= 0.95,
          "fraction " + fmt(close) + ", max " + fmt(summarize(sup).max));
    r.stats["constant_rate_profile"] = {{"n", n}, {"runs", runs}, {"sup", summarize(sup).to_json()}};
  }
  {
    const Count n = o.quick ? 100'000 : 1'000'000;
    const std::int64_t runs = o.quick ? 3 : 10;
    const double ln_n = std::log(static_cast<double>(n));
    say(o, "sir: " + std::to_string(runs) + " infection trees with lambda_n = 2, n = " + std::to_string(n));
    const auto ratio = parallel_map(runs, o.threads, [&](std::int64_t i) {
      Rng rng = replication_stream(sub_seed(o.seed, 5), static_cast<std::uint64_t>(i));
      return tree_height(sir_tree(n, lambda, rng).tree) / ln_n;
    });
    const double m = mean_of(ratio);
    check(r, "constant rate: Height / ln n within 15% of e", std::abs(m / std::numbers::e - 1.0) <= 0.15,
          "mean " + fmt(m) + " (" + fmt(100.0 * (m / std::numbers::e - 1.0)) + "%)");
    r.stats["constant_rate_height"] = {{"n", n}, {"runs", runs}, {"height_over_ln_n", summarize(ratio).to_json()}};
  }

  // Root offspring against the geometric law.
  {
    const Count n = 10'000;
    const std::int64_t reps = o.quick ? 20'000 : 100'000;
    nlohmann::json offspring = nlohmann::json::object();
    for (double lam : {1.0, lambda}) {
      say(o, "sir: root degree, lambda = " + fmt(lam));
      const auto c = geometric_offspring_check(lam, n, reps, sub_seed(o.seed, 6 + static_cast<std::uint64_t>(lam)),
                                               o.threads);
      check(r, "root offspring vs geometric, lambda = " + fmt(lam) + ": p-value > 1e-3", c.chi_square.p_value > 1e-3,
            "chi2 = " + fmt(c.chi_square.statistic) + ", dof = " + std::to_string(c.chi_square.dof) +
                ", p = " + fmt(c.chi_square.p_value));
      offspring[fmt(lam)] = {{"n", n},
                             {"replications", reps},
                             {"cells", c.chi_square.cells},
                             {"observed", c.chi_square.observed},
                             {"expected", c.chi_square.expected},
                             {"statistic", c.chi_square.statistic},
                             {"dof", c.chi_square.dof},
                             {"p_value", c.chi_square.p_value}};
    }
    r.stats["root_offspring"] = std::move(offspring);
  }
  return r;
}

SuiteResult verify_perf(const VerifyOptions& o) {
  SuiteResult r;
  r.suite = "perf";
  const Count small = o.quick ? 100'000 : 1'000'000;
  const Count large = small * 10;
  Rng seq_rng(sub_seed(o.seed, 9));
  say(o, "perf: generating sequences");
  const auto xs = gen_iid(0.75, small, seq_rng, true);
  const auto xl = gen_iid(0.75, large, seq_rng, true);

  // Only the build call is timed; releasing the tree happens afterwards.
  auto timed = [](auto&& build) {
    const auto start = std::chrono::steady_clock::now();
    auto out = build();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    if (out.parent.empty()) throw std::logic_error("empty tree");
    return dt.count();
  };
  for (const std::string which : {"build_attach", "build_coalescent"}) {
    auto once = [&](const SignSequence& x, Count n, int i) {
      Rng rng(o.seed + static_cast<std::uint64_t>(i));
      return which == "build_attach" ? timed([&] { return build_attach(x, n, rng); })
                                     : timed([&] { return build_coalescent(x, n, rng).tree; });
    };
    say(o, "perf: timing " + which);
    // Sizes alternate so that machine noise hits both alike; best of each.
    double ts = INFINITY, tl = INFINITY;
    for (int i = 0; i < 5; ++i) {
      ts = std::min(ts, once(xs, small, i));
      ts = std::min(ts, once(xs, small, i));
      tl = std::min(tl, once(xl, large, i));
    }
    const double ratio = tl / ts;
    check(r, which + ": n = " + std::to_string(large) + " under 5 s", tl < 5.0, fmt(tl) + " s");
    check(r, which + ": time ratio for 10x n at most 12", ratio <= 12.0,
          fmt(ts) + " s -> " + fmt(tl) + " s, ratio " + fmt(ratio));
    r.timings[which] = {{"small_n", small}, {"large_n", large}, {"small_s", ts}, {"large_s", tl}, {"ratio", ratio}};
  }
  r.stats = {{"small_n", small}, {"large_n", large}};
  return r;
}

SuiteResult verify_determinism(const VerifyOptions& o) {
  SuiteResult r;
  r.suite = "determinism";
  const unsigned many = std::max(4u, resolve_threads(o.threads));
  auto compare = [&](const std::string& what, auto&& produce) {
    say(o, "determinism: " + what);
    const std::string one = produce(1u);
    const std::string several = produce(many);
    check(r, what + ": identical output with 1 and " + std::to_string(many) + " threads", one == several,
          std::to_string(one.size()) + " bytes");
    r.stats[what] = one.size();
  };
  for (const std::string suite : {"linear", "sir"}) {
    compare("suite " + suite, [&](unsigned threads) {
      VerifyOptions q = o;
      q.quick = true;
      q.threads = threads;
      q.log = nullptr;
      return run_suite(suite, q).stats.dump(2);
    });
  }
  for (const auto builder : {Builder::attach, Builder::coalescent}) {
    compare("experiment " + to_string(builder), [&](unsigned threads) {
      RunManifest m;
      m.experiment_id = "determinism";
      m.sequence.kind = SequenceKind::iid;
      m.sequence.p = 0.75;
      m.sequence.horizon = 20'000;
      m.sequence.condition_survival = true;
      m.builder = builder;
      m.replications = 200;
      m.master_seed = o.seed;
      m.statistics = {"height", "depth", "distance", "hplus", "vertices"};
      if (builder == Builder::coalescent) m.statistics.push_back("coal");
      m.threads = threads;
      return run_experiment(m).stats_json();
    });
  }
  return r;
}

}  // namespace freezetree
