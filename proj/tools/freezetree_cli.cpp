#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>
#include <json.hpp>

#include "freezetree/asymptotics.hpp"
#include "freezetree/attach.hpp"
#include "freezetree/bijection.hpp"
#include "freezetree/coalescent.hpp"
#include "freezetree/harness.hpp"
#include "freezetree/parallel.hpp"
#include "freezetree/seqgen.hpp"
#include "freezetree/sir.hpp"
#include "freezetree/tree_io.hpp"
#include "freezetree/verify.hpp"

namespace fs = std::filesystem;
using namespace freezetree;

namespace {

struct SequenceArgs {
  std::string kind = "constant_plus";
  Count n = 10;
  double p = 0.5;
  double lambda = -1.0;
  double lambda_total = -1.0;
  std::uint64_t seed = 1;
  bool condition = false;
  std::int64_t max_attempts = 1'000'000;
  std::string file;
};

void add_sequence_options(CLI::App* app, SequenceArgs& a) {
  app->add_option("--kind", a.kind, "constant_plus, iid, sir or explicit")
      ->check(CLI::IsMember({"constant_plus", "iid", "sir", "explicit"}));
  app->add_option("--n", a.n, "horizon (number of susceptibles for sir)")->check(CLI::NonNegativeNumber);
  app->add_option("--p", a.p, "P(+1) for iid sequences");
  auto* lam = app->add_option("--lambda", a.lambda, "per-pair contact rate lambda_n for sir");
  app->add_option("--lambda-total", a.lambda_total, "total rate lambda, with lambda_n = lambda / n")->excludes(lam);
  app->add_option("--seed", a.seed, "master seed");
  app->add_flag("--condition-survival", a.condition, "redraw iid sequences until tau > n");
  app->add_option("--max-attempts", a.max_attempts, "cap on redraws for --condition-survival");
  app->add_option("--x", a.file, "sequence file (one +1/-1 per line); implies --kind explicit");
}

SignSequence read_sequence_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_sequence(is);
}

SequenceSpec make_spec(const SequenceArgs& a, bool n_given) {
  SequenceSpec s;
  s.kind = a.file.empty() ? sequence_kind_from_string(a.kind) : SequenceKind::explicit_list;
  s.horizon = a.n;
  s.p = a.p;
  s.condition_survival = a.condition;
  s.max_attempts = a.max_attempts;
  if (a.lambda_total >= 0.0) {
    if (a.n < 1) throw std::invalid_argument("--lambda-total needs --n >= 1");
    s.lambda_n = lambda_n_from_total(a.lambda_total, a.n);
  } else if (a.lambda >= 0.0) {
    s.lambda_n = a.lambda;
  } else if (s.kind == SequenceKind::sir) {
    throw std::invalid_argument("sir sequences need --lambda or --lambda-total");
  }
  if (s.kind == SequenceKind::explicit_list) {
    if (a.file.empty()) throw std::invalid_argument("--kind explicit needs --x <file>");
    s.explicit_signs = read_sequence_file(a.file);
    if (!n_given) s.horizon = s.explicit_signs.size();
  }
  s.validate();
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform attachment trees with freezing: simulation, exact laws and checks"};
  app.require_subcommand(1);

  // sequence
  SequenceArgs seq_args;
  std::string seq_out;
  auto* seq_cmd = app.add_subcommand("sequence", "generate a sign sequence file");
  add_sequence_options(seq_cmd, seq_args);
  seq_cmd->add_option("-o,--out", seq_out, "output file (default stdout)");

  // simulate
  SequenceArgs sim_args;
  std::string builder = "attach", manifest_path, json_out, tsv_out, dot_out, merge_out, out_dir;
  unsigned threads = 0;
  bool force = false;
  auto* sim = app.add_subcommand("simulate", "build one tree, or run a manifest of replications");
  add_sequence_options(sim, sim_args);
  sim->add_option("--builder", builder, "attach or coalescent")->check(CLI::IsMember({"attach", "coalescent"}));
  sim->add_option("--manifest", manifest_path, "run the experiment described by this JSON file");
  sim->add_option("--out-dir", out_dir, "experiment output directory (overrides the manifest and FREEZETREE_OUT_DIR)");
  sim->add_option("--threads", threads, "worker threads for --manifest (0 = all cores)");
  sim->add_flag("--force", force, "replace an existing experiment with the same id");
  sim->add_option("--json", json_out, "write the tree as JSON");
  sim->add_option("--tsv", tsv_out, "write the edge list as TSV");
  sim->add_option("--dot", dot_out, "write a Graphviz drawing");
  sim->add_option("--merge-log", merge_out, "coalescent builder: write step,root1,root2 CSV");

  // enumerate
  std::string enum_file, enum_builder = "attach";
  Count enum_n = -1;
  std::int64_t enum_cap = kDefaultEnumerationCap;
  auto* en = app.add_subcommand("enumerate", "exact law of the trees for a fixed sequence");
  en->add_option("--x", enum_file, "sequence file")->required();
  en->add_option("--n", enum_n, "number of steps (default: whole sequence)");
  en->add_option("--builder", enum_builder, "attach, or coalescent to keep active labels")
      ->check(CLI::IsMember({"attach", "coalescent"}));
  en->add_option("--cap", enum_cap, "maximum number of branches");

  // bijection
  bool roundtrip = false, exhaustive = false;
  std::int32_t max_n = 6, count_n = 0;
  std::string phi_key, psi_key;
  auto* bij = app.add_subcommand("bijection", "increasing binary tree bijection and tangent numbers");
  bij->add_flag("--roundtrip", roundtrip, "check both round trips on every small tree");
  bij->add_option("--max-n", max_n, "largest vertex count for --roundtrip");
  bij->add_option("--count-t0n", count_n, "number of frozen increasing trees with n vertices");
  bij->add_flag("--exhaustive", exhaustive, "count by enumeration as well (n <= 7)");
  bij->add_option("--phi", phi_key, "image of a tree given by its canonical key");
  bij->add_option("--psi", psi_key, "preimage of a binary tree such as 1(2,a)");

  // constants
  double c_value = 1.0;
  bool curve = false;
  std::size_t grid = 200;
  auto* con = app.add_subcommand("constants", "linear-regime constants");
  auto* c_opt = con->add_option("--c", c_value, "slope c in (0, 1]");
  con->add_flag("--curve", curve, "CSV of the constants over a grid of c")->excludes(c_opt);
  con->add_option("--grid", grid, "grid size for --curve");

  // sir
  SequenceArgs sir_args;
  sir_args.kind = "sir";
  std::int64_t sir_reps = 100, offspring_reps = 0;
  std::string sir_out = "sir_out";
  auto* sir = app.add_subcommand("sir", "epidemic runs, fluid limit and infection-tree statistics");
  sir->add_option("--n", sir_args.n, "number of susceptibles")->required();
  auto* sl = sir->add_option("--lambda", sir_args.lambda, "per-pair contact rate lambda_n");
  sir->add_option("--lambda-total", sir_args.lambda_total, "total rate lambda, lambda_n = lambda / n")->excludes(sl);
  sir->add_option("--reps", sir_reps, "number of runs");
  sir->add_option("--seed", sir_args.seed, "master seed");
  sir->add_option("--out", sir_out, "output directory");
  sir->add_option("--threads", threads, "worker threads (0 = all cores)");
  sir->add_option("--offspring-reps", offspring_reps, "root-degree replications for the geometric check (0 = skip)");

  // verify
  std::vector<std::string> suites;
  bool quick = false;
  std::uint64_t verify_seed = VerifyOptions{}.seed;
  std::string verify_json;
  auto* ver = app.add_subcommand("verify", "run acceptance suites");
  ver->add_option("--suite", suites, "suite name(s) or all")->required();
  ver->add_flag("--quick", quick, "smaller sizes, same thresholds");
  ver->add_option("--seed", verify_seed, "master seed");
  ver->add_option("--threads", threads, "worker threads (0 = all cores)");
  ver->add_option("--json", verify_json, "write the statistics of every suite to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*seq_cmd) {
      const auto spec = make_spec(seq_args, seq_cmd->count("--n") > 0);
      Rng rng(seq_args.seed, 0);
      const auto x = generate_sequence(spec, rng);
      const std::string header = "seed=" + std::to_string(seq_args.seed) + " kind=" + to_string(spec.kind) +
                                 " n=" + std::to_string(spec.horizon);
      if (seq_out.empty()) {
        write_sequence(std::cout, x, header);
      } else {
        std::ofstream os(seq_out);
        write_sequence(os, x, header);
      }
      return 0;
    }

    if (*sim) {
      if (!manifest_path.empty()) {
        std::ifstream is(manifest_path);
        if (!is) throw std::runtime_error("cannot open " + manifest_path);
        auto m = RunManifest::from_json(nlohmann::json::parse(is));
        if (!out_dir.empty()) m.output_dir = out_dir;
        if (sim->count("--threads")) m.threads = threads;
        const auto start = std::chrono::steady_clock::now();
        const auto result = run_experiment(m);
        const auto where = write_experiment(result, resolve_output_dir(m), force);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        std::cout << "wrote " << where.string() << " (" << m.replications << " replications, " << fmt(dt.count())
                  << " s)\n";
        return 0;
      }
      const auto spec = make_spec(sim_args, sim->count("--n") > 0);
      Rng rng(sim_args.seed, 0);
      const auto x = generate_sequence(spec, rng);
      const Count n = spec.kind == SequenceKind::sir ? x.size() : spec.horizon;
      FreezeTree tree;
      CoalescentBuild cb;
      if (builder == "attach") {
        tree = build_attach(x, n, rng);
      } else {
        cb = build_coalescent(x, n, rng);
        tree = cb.tree;
      }
      if (!json_out.empty()) write_file(json_out, tree_to_json(tree).dump() + "\n");
      if (!tsv_out.empty()) {
        std::ofstream os(tsv_out);
        write_edge_tsv(os, tree);
      }
      if (!dot_out.empty()) {
        std::ofstream os(dot_out);
        write_dot(os, tree);
      }
      if (!merge_out.empty()) {
        if (builder != "coalescent") throw std::invalid_argument("--merge-log needs --builder coalescent");
        std::ofstream os(merge_out);
        os << "step,root1,root2\n";
        for (const auto& rec : cb.merge_log) os << rec.step << ',' << rec.root1 << ',' << rec.root2 << '\n';
      }
      const auto w = compute_walk(x);
      nlohmann::json summary{{"builder", builder},
                             {"n", tree.n},
                             {"vertices", tree.size()},
                             {"active", tree.active_count()},
                             {"height", tree_height(tree)}};
      if (w.survives(n)) summary["h_plus"] = h_plus(w, n);
      if (w.tau) summary["tau"] = *w.tau;
      std::cout << summary.dump(2) << '\n';
      return 0;
    }

    if (*en) {
      const auto x = read_sequence_file(enum_file);
      const Count n = enum_n < 0 ? x.size() : enum_n;
      std::cout << "key,probability\n";
      if (enum_builder == "attach") {
        for (const auto& e : enumerate_trees(x, n, enum_cap)) {
          std::cout << csv_field(e.key) << ',' << to_string(e.probability) << '\n';
        }
      } else {
        std::map<std::string, Rational> law;
        for (const auto& e : enumerate_coalescent(x, n, enum_cap)) law[e.labelled_key] += e.probability;
        for (const auto& [k, p] : law) std::cout << csv_field(k) << ',' << to_string(p) << '\n';
      }
      return 0;
    }

    if (*bij) {
      bool ok = true;
      if (!phi_key.empty()) std::cout << to_string(phi(tree_from_canonical(phi_key))) << '\n';
      if (!psi_key.empty()) std::cout << canonical_form(psi(binary_tree_from_string(psi_key))) << '\n';
      if (roundtrip) {
        for (std::int32_t nv = 1; nv <= max_n; ++nv) {
          std::int64_t members = 0, bad = 0;
          for (std::int32_t k = 0; k <= nv; ++k) {
            for (const auto& key : enumerate_increasing_trees(nv, k)) {
              ++members;
              if (canonical_form(psi(phi(tree_from_canonical(key)))) != key) ++bad;
            }
            for (const auto& b : enumerate_increasing_binary(nv, k)) {
              ++members;
              if (!(phi(psi(b)) == b)) ++bad;
            }
          }
          std::cout << "vertices=" << nv << " members=" << members << " failures=" << bad << '\n';
          ok = ok && bad == 0;
        }
      }
      if (count_n > 0) {
        const auto t = count_t0n(count_n);
        nlohmann::json j{{"n", count_n}, {"recurrence", t.str()}};
        if (exhaustive) {
          const auto e = count_t0n_exhaustive(count_n);
          j["exhaustive"] = e.str();
          ok = ok && e == t;
        }
        std::cout << j.dump() << '\n';
      }
      return ok ? 0 : 1;
    }

    if (*con) {
      if (curve) {
        write_constants_csv(std::cout, constants_curve(grid));
      } else {
        const auto k = linear_constants(c_value);
        nlohmann::json j{{"c", k.c}, {"depth", k.depth}, {"distance", k.distance}, {"f_c", k.f_c}, {"height", k.height}};
        std::cout << j.dump(2) << '\n';
      }
      return 0;
    }

    if (*sir) {
      const Count n = sir_args.n;
      if (n < 1) throw std::invalid_argument("--n must be at least 1");
      double lambda_n;
      if (sir_args.lambda_total >= 0.0) {
        lambda_n = lambda_n_from_total(sir_args.lambda_total, n);
      } else if (sir_args.lambda >= 0.0) {
        lambda_n = sir_args.lambda;
      } else {
        throw std::invalid_argument("give --lambda or --lambda-total");
      }
      if (sir_reps < 1) throw std::invalid_argument("--reps must be at least 1");
      const fs::path out(sir_out);
      fs::create_directories(out);
      const double ln_n = std::log(static_cast<double>(n));
      const Count threshold = default_survival_threshold(n);
      const bool linear_rate = sir_args.lambda_total >= 0.0;
      std::optional<FluidSolution> fluid;
      if (linear_rate && sir_args.lambda_total > 0.0) {
        fluid = fluid_solve(sir_args.lambda_total, 2.5, 1e-4);
        std::ofstream os(out / "fluid.csv");
        write_fluid_csv(os, *fluid, 10);
      }
      struct Run {
        bool survived = false;
        double depth = 0, distance = 0, height = 0, fluid_sup = NAN, profile_sup = 0;
        Count absorption = 0;
      };
      const auto runs = parallel_map(sir_reps, threads, [&](std::int64_t i) {
        Rng rng = replication_stream(sir_args.seed, static_cast<std::uint64_t>(i));
        auto [x, traj] = gen_sir(n, lambda_n, rng);
        if (i == 0) {
          std::ofstream os(out / "trajectory.csv");
          write_trajectory_csv(os, traj);
        }
        Run run;
        run.absorption = traj.absorption();
        run.survived = survival_filter(traj, threshold);
        if (!run.survived) return run;
        if (fluid) run.fluid_sup = fluid_comparison(traj, *fluid);
        run.profile_sup = recursive_profile_distance(traj);
        const auto t = build_attach(x, x.size(), rng);
        const auto depth = vertex_depths(t);
        double total = 0;
        for (auto d : depth) total += d;
        run.depth = total / static_cast<double>(depth.size()) / ln_n;
        const auto size = static_cast<std::uint64_t>(t.size());
        run.distance = tree_distance(t, depth, static_cast<VertexId>(rng.below(size)),
                                     static_cast<VertexId>(rng.below(size))) / ln_n;
        run.height = *std::max_element(depth.begin(), depth.end()) / ln_n;
        return run;
      });
      std::vector<double> depth, dist, height, fsup, psup;
      for (const auto& r : runs) {
        if (!r.survived) continue;
        depth.push_back(r.depth);
        dist.push_back(r.distance);
        height.push_back(r.height);
        psup.push_back(r.profile_sup);
        if (!std::isnan(r.fluid_sup)) fsup.push_back(r.fluid_sup);
      }
      nlohmann::json summary{{"n", n},
                             {"lambda_n", lambda_n},
                             {"runs", sir_reps},
                             {"seed", sir_args.seed},
                             {"survival_threshold", threshold},
                             {"survival_fraction", static_cast<double>(depth.size()) / static_cast<double>(sir_reps)},
                             {"depth_over_ln_n", summarize(depth).to_json()},
                             {"distance_over_ln_n", summarize(dist).to_json()},
                             {"height_over_ln_n", summarize(height).to_json()},
                             {"profile_sup_to_min_t_2_minus_t", summarize(psup).to_json()}};
      if (fluid) {
        summary["lambda"] = sir_args.lambda_total;
        summary["fluid_t0"] = fluid->t0;
        summary["fluid_sup"] = summarize(fsup).to_json();
        if (sir_args.lambda_total > 1.0) {
          const double lam = sir_args.lambda_total;
          summary["depth_limit"] = lam / (lam - 1.0);
          summary["distance_limit"] = 2.0 * lam / (lam - 1.0);
        }
      } else {
        summary["height_limit"] = std::numbers::e;
      }
      if (offspring_reps > 0) {
        if (!linear_rate) throw std::invalid_argument("--offspring-reps needs --lambda-total");
        const auto c = geometric_offspring_check(sir_args.lambda_total, n, offspring_reps, sir_args.seed, threads);
        summary["root_offspring"] = {{"cells", c.chi_square.cells},         {"observed", c.chi_square.observed},
                                     {"expected", c.chi_square.expected},   {"statistic", c.chi_square.statistic},
                                     {"dof", c.chi_square.dof},             {"p_value", c.chi_square.p_value}};
      }
      write_file(out / "summary.json", summary.dump(2) + "\n");
      std::cout << summary.dump(2) << '\n';
      return 0;
    }

    if (*ver) {
      std::vector<std::string> names;
      for (const auto& s : suites) {
        if (s == "all") {
          names = suite_names();
          break;
        }
        names.push_back(s);
      }
      VerifyOptions opt;
      opt.seed = verify_seed;
      opt.threads = threads;
      opt.quick = quick;
      opt.log = [](const std::string& m) { std::cerr << "  .. " << m << '\n'; };
      bool all_pass = true;
      nlohmann::json report = nlohmann::json::object();
      for (const auto& name : names) {
        const auto r = run_suite(name, opt);
        for (const auto& c : r.checks) {
          std::cout << (c.pass ? "PASS " : "FAIL ") << '[' << r.suite << "] " << c.name;
          if (!c.detail.empty()) std::cout << ": " << c.detail;
          std::cout << '\n';
        }
        all_pass = all_pass && r.pass();
        report[name] = r.stats;
      }
      if (!verify_json.empty()) write_file(verify_json, report.dump(2) + "\n");
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
