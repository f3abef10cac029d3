#include "freezetree/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>

#include "freezetree/attach.hpp"
#include "freezetree/coalescent.hpp"
#include "freezetree/parallel.hpp"

namespace freezetree {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::string to_string(Builder b) { return b == Builder::attach ? "attach" : "coalescent"; }

Builder builder_from_string(const std::string& s) {
  if (s == "attach") return Builder::attach;
  if (s == "coalescent") return Builder::coalescent;
  throw std::invalid_argument("unknown builder: " + s);
}

void RunManifest::validate() const {
  if (experiment_id.empty()) throw std::invalid_argument("manifest: experiment_id is empty");
  for (char c : experiment_id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      throw std::invalid_argument("manifest: experiment_id may only use letters, digits, '-', '_' and '.'");
    }
  }
  if (replications < 1) throw std::invalid_argument("manifest: replications must be at least 1");
  sequence.validate();
  if (statistics.empty()) throw std::invalid_argument("manifest: no statistics requested");
  for (const auto& s : statistics) {
    if (!contains(known_statistics(), s)) throw std::invalid_argument("manifest: unknown statistic " + s);
  }
  if (contains(statistics, "coal") && builder != Builder::coalescent) {
    throw std::invalid_argument("manifest: coal requires the coalescent builder");
  }
  if (builder == Builder::coalescent && sequence.kind == SequenceKind::sir) {
    throw std::invalid_argument("manifest: sir sequences end at absorption, which the coalescent builder excludes");
  }
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json seq{{"kind", to_string(sequence.kind)}, {"n", sequence.horizon}};
  switch (sequence.kind) {
    case SequenceKind::iid:
      seq["p"] = sequence.p;
      seq["condition_survival"] = sequence.condition_survival;
      seq["max_attempts"] = sequence.max_attempts;
      break;
    case SequenceKind::sir:
      seq["lambda_n"] = sequence.lambda_n;
      break;
    case SequenceKind::explicit_list: {
      std::vector<int> signs(sequence.explicit_signs.raw().begin(), sequence.explicit_signs.raw().end());
      seq["signs"] = signs;
      break;
    }
    case SequenceKind::constant_plus:
      break;
  }
  return {{"experiment_id", experiment_id}, {"sequence", seq},         {"builder", to_string(builder)},
          {"replications", replications},   {"master_seed", master_seed}, {"statistics", statistics}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.experiment_id = j.at("experiment_id").get<std::string>();
  const auto& s = j.at("sequence");
  m.sequence.kind = sequence_kind_from_string(s.at("kind").get<std::string>());
  if (s.contains("signs")) {
    const auto signs = s.at("signs").get<std::vector<int>>();
    m.sequence.explicit_signs = SignSequence(std::span<const int>(signs));
  }
  m.sequence.horizon = s.value("n", m.sequence.kind == SequenceKind::explicit_list
                                        ? m.sequence.explicit_signs.size()
                                        : Count{0});
  m.sequence.p = s.value("p", 0.5);
  m.sequence.condition_survival = s.value("condition_survival", false);
  m.sequence.max_attempts = s.value("max_attempts", std::int64_t{1'000'000});
  if (s.contains("lambda_total")) {
    if (m.sequence.horizon < 1) throw std::invalid_argument("manifest: lambda_total needs n >= 1");
    m.sequence.lambda_n = lambda_n_from_total(s.at("lambda_total").get<double>(), m.sequence.horizon);
  } else {
    m.sequence.lambda_n = s.value("lambda_n", 0.0);
  }
  m.builder = builder_from_string(j.value("builder", std::string("attach")));
  m.replications = j.value("replications", std::int64_t{1});
  m.master_seed = j.value("master_seed", std::uint64_t{0});
  if (j.contains("statistics")) m.statistics = j.at("statistics").get<std::vector<std::string>>();
  m.output_dir = j.value("output_dir", std::string());
  m.threads = j.value("threads", 0u);
  m.validate();
  return m;
}

std::filesystem::path resolve_output_dir(const RunManifest& m) {
  if (!m.output_dir.empty()) return m.output_dir;
  if (const char* env = std::getenv("FREEZETREE_OUT_DIR"); env && *env) return env;
  return "out";
}

VertexId uniform_active_vertex(const FreezeTree& t, Rng& rng) {
  const auto active = t.active_count();
  if (active == 0) return kNoVertex;
  auto j = static_cast<Count>(rng.below(static_cast<std::uint64_t>(active)));
  for (VertexId v = 0; v < t.size(); ++v) {
    if (t.status[static_cast<std::size_t>(v)].is_active() && j-- == 0) return v;
  }
  return kNoVertex;
}

TreeDraw draw_tree_stats(const FreezeTree& t, Rng& rng) {
  const auto depth = vertex_depths(t);
  TreeDraw d;
  const VertexId a = uniform_active_vertex(t, rng);
  d.active_depth = a == kNoVertex ? kNaN : depth[static_cast<std::size_t>(a)];
  const auto n = static_cast<std::uint64_t>(t.size());
  const auto u = static_cast<VertexId>(rng.below(n));
  const auto v = static_cast<VertexId>(rng.below(n));
  d.distance = tree_distance(t, depth, u, v);
  d.height = *std::max_element(depth.begin(), depth.end());
  return d;
}

nlohmann::json DepthDistanceSummary::to_json() const {
  return {{"active_depth", active_depth.to_json()}, {"distance", distance.to_json()}, {"height", height.to_json()}};
}

DepthDistanceSummary depth_distance_stats(const std::vector<FreezeTree>& trees, std::uint64_t seed,
                                          bool require_active) {
  if (trees.empty()) throw PreconditionError("depth_distance_stats: empty sample");
  std::vector<double> depth, dist, height;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    Rng rng = replication_stream(seed, i);
    const auto d = draw_tree_stats(trees[i], rng);
    if (std::isnan(d.active_depth)) {
      if (require_active) throw PreconditionError("depth_distance_stats: tree without active vertices");
    } else {
      depth.push_back(d.active_depth);
    }
    dist.push_back(d.distance);
    height.push_back(d.height);
  }
  return {summarize(depth), summarize(dist), summarize(height)};
}

namespace {

ReplicationRecord run_replication(const RunManifest& m, const std::vector<std::string>& numeric,
                                  std::int64_t index) {
  Rng rng = replication_stream(m.master_seed, static_cast<std::uint64_t>(index));
  const SignSequence x = generate_sequence(m.sequence, rng);
  const Count n = m.sequence.kind == SequenceKind::sir ? x.size() : m.sequence.horizon;
  const auto w = compute_walk(x);

  FreezeTree forward;
  CoalescentBuild cb;
  if (m.builder == Builder::attach) {
    forward = build_attach(x, n, rng);
  } else {
    cb = build_coalescent(x, n, rng);
  }
  const FreezeTree& tree = m.builder == Builder::attach ? forward : cb.tree;

  const auto depth = vertex_depths(tree);
  const auto size = static_cast<std::uint64_t>(tree.size());
  std::map<std::string, double> value;
  for (const auto& s : numeric) {
    if (s == "height") {
      value[s] = *std::max_element(depth.begin(), depth.end());
    } else if (s == "depth") {
      const VertexId a = uniform_active_vertex(tree, rng);
      value[s] = a == kNoVertex ? kNaN : depth[static_cast<std::size_t>(a)];
    } else if (s == "distance") {
      const auto u = static_cast<VertexId>(rng.below(size));
      const auto v = static_cast<VertexId>(rng.below(size));
      value[s] = tree_distance(tree, depth, u, v);
    } else if (s == "hplus") {
      value[s] = w.survives(n) ? h_plus(w, n) : kNaN;
    } else if (s == "vertices") {
      value[s] = static_cast<double>(tree.size());
    } else if (s == "coal") {
      const auto u = static_cast<VertexId>(rng.below(size));
      const auto v = static_cast<VertexId>(rng.below(size));
      value[s] = static_cast<double>(coalescence_time(cb, u, v));
    }
  }
  ReplicationRecord rec;
  rec.index = index;
  for (const auto& s : numeric) rec.values.push_back(value[s]);
  if (contains(m.statistics, "canonical")) rec.canonical = canonical_form(tree);
  return rec;
}

}  // namespace

ExperimentResult run_experiment(const RunManifest& m) {
  m.validate();
  ExperimentResult r;
  r.manifest = m;
  // Statistics are evaluated in a fixed order so each one consumes the
  // same random draws regardless of how the manifest lists them.
  for (const auto& s : known_statistics()) {
    if (s != "canonical" && contains(m.statistics, s)) r.numeric_statistics.push_back(s);
  }
  r.records = parallel_map(m.replications, m.threads,
                           [&](std::int64_t i) { return run_replication(m, r.numeric_statistics, i); });

  nlohmann::json stats = nlohmann::json::object();
  stats["manifest"] = m.to_json();
  nlohmann::json numeric = nlohmann::json::object();
  for (std::size_t k = 0; k < r.numeric_statistics.size(); ++k) {
    std::vector<double> vals;
    for (const auto& rec : r.records) {
      if (!std::isnan(rec.values[k])) vals.push_back(rec.values[k]);
    }
    auto j = summarize(vals).to_json();
    j["undefined"] = m.replications - static_cast<std::int64_t>(vals.size());
    numeric[r.numeric_statistics[k]] = std::move(j);
  }
  stats["statistics"] = std::move(numeric);

  if (contains(m.statistics, "canonical")) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& rec : r.records) ++counts[rec.canonical];
    nlohmann::json canon{{"distinct", counts.size()}, {"counts", counts}};
    // For a fixed sequence the exact law is available by enumeration.
    const bool fixed = m.sequence.kind == SequenceKind::constant_plus ||
                       m.sequence.kind == SequenceKind::explicit_list;
    if (fixed) {
      Rng unused(0);
      const auto x = generate_sequence(m.sequence, unused);
      try {
        std::map<std::string, double> exact;
        for (const auto& e : enumerate_trees(x, m.sequence.horizon)) {
          exact[e.key] = static_cast<double>(e.probability);
        }
        canon["exact_support"] = exact.size();
        canon["tv_to_exact"] = tv_distance(normalize(counts), exact);
      } catch (const CapExceeded&) {
        canon["exact_support"] = nullptr;
      } catch (const PreconditionError&) {
        canon["exact_support"] = nullptr;
      }
    }
    stats["canonical"] = std::move(canon);
  }
  r.stats = std::move(stats);
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::filesystem::path write_experiment(const ExperimentResult& r, const std::filesystem::path& dir,
                                       bool overwrite) {
  const auto target = dir / r.manifest.experiment_id;
  if (std::filesystem::exists(target / "stats.json") && !overwrite) {
    throw std::runtime_error("experiment '" + r.manifest.experiment_id + "' already exists in " + dir.string());
  }
  std::filesystem::create_directories(target);
  {
    std::ofstream os(target / "stats.json", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (target / "stats.json").string());
    os << r.stats_json();
  }
  std::ofstream os(target / "replications.csv", std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (target / "replications.csv").string());
  const bool canonical = contains(r.manifest.statistics, "canonical");
  os << "replication";
  for (const auto& s : r.numeric_statistics) os << ',' << s;
  if (canonical) os << ",canonical";
  os << "\r\n";
  char buf[64];
  for (const auto& rec : r.records) {
    os << rec.index;
    for (double v : rec.values) {
      os << ',';
      if (!std::isnan(v)) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
      }
    }
    if (canonical) os << ',' << csv_field(rec.canonical);
    os << "\r\n";
  }
  return target;
}

}  // namespace freezetree
