#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "freezetree/harness.hpp"
#include "freezetree/verify.hpp"

using namespace freezetree;
namespace fs = std::filesystem;

namespace {
RunManifest small_manifest(Builder b) {
  RunManifest m;
  m.experiment_id = "unit";
  m.sequence.kind = SequenceKind::iid;
  m.sequence.horizon = 6;
  m.sequence.p = 0.8;
  m.sequence.condition_survival = true;
  m.builder = b;
  m.replications = 400;
  m.master_seed = 42;
  m.statistics = {"height", "depth", "distance", "hplus", "vertices", "canonical"};
  if (b == Builder::coalescent) m.statistics.push_back("coal");
  return m;
}
}  // namespace

TEST_CASE("manifest json round trip and validation") {
  const auto m = small_manifest(Builder::coalescent);
  const auto back = RunManifest::from_json(m.to_json());
  CHECK(back.to_json() == m.to_json());
  auto bad = m;
  bad.builder = Builder::attach;
  CHECK_THROWS(bad.validate());
  bad = m;
  bad.statistics = {"nonsense"};
  CHECK_THROWS(bad.validate());
  bad = m;
  bad.replications = 0;
  CHECK_THROWS(bad.validate());
  const auto j = nlohmann::json::parse(
      R"({"experiment_id": "s", "sequence": {"kind": "sir", "n": 100, "lambda_total": 2.0}, "replications": 3})");
  CHECK(RunManifest::from_json(j).sequence.lambda_n == doctest::Approx(0.02));
  CHECK(builder_from_string("coalescent") == Builder::coalescent);
  CHECK_THROWS(builder_from_string("x"));
}

TEST_CASE("experiment results do not depend on the thread count") {
  for (auto b : {Builder::attach, Builder::coalescent}) {
    auto m = small_manifest(b);
    m.threads = 1;
    const auto one = run_experiment(m);
    m.threads = 4;
    const auto four = run_experiment(m);
    CHECK(one.stats_json() == four.stats_json());
    CHECK(one.records.size() == 400);
  }
}

TEST_CASE("canonical frequencies for a fixed sequence approach the exact law") {
  RunManifest m;
  m.experiment_id = "exact";
  m.sequence.kind = SequenceKind::explicit_list;
  m.sequence.explicit_signs = SignSequence{+1, +1, -1, -1, +1, -1};
  m.sequence.horizon = 6;
  m.replications = 20000;
  m.master_seed = 3;
  m.statistics = {"canonical"};
  for (auto b : {Builder::attach, Builder::coalescent}) {
    m.builder = b;
    const auto r = run_experiment(m);
    CHECK(r.stats.at("canonical").at("exact_support") == 24);
    CHECK(r.stats.at("canonical").at("tv_to_exact").get<double>() < 0.05);
  }
}

TEST_CASE("experiment files") {
  const auto dir = fs::temp_directory_path() / "freezetree_unit_out";
  fs::remove_all(dir);
  const auto r = run_experiment(small_manifest(Builder::attach));
  const auto where = write_experiment(r, dir);
  CHECK(fs::exists(where / "stats.json"));
  CHECK(fs::exists(where / "replications.csv"));
  CHECK_THROWS(write_experiment(r, dir));
  CHECK_NOTHROW(write_experiment(r, dir, true));
  std::ifstream is(where / "stats.json");
  const auto j = nlohmann::json::parse(is);
  CHECK(j.at("manifest").at("experiment_id") == "unit");
  fs::remove_all(dir);
}

TEST_CASE("output directory resolution") {
  RunManifest m;
  m.output_dir = "given";
  CHECK(resolve_output_dir(m) == fs::path("given"));
  m.output_dir.clear();
  setenv("FREEZETREE_OUT_DIR", "from_env", 1);
  CHECK(resolve_output_dir(m) == fs::path("from_env"));
  unsetenv("FREEZETREE_OUT_DIR");
  CHECK(resolve_output_dir(m) == fs::path("out"));
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 8);
  CHECK_THROWS(run_suite("nope", VerifyOptions{}));
  VerifyOptions o;
  o.quick = true;
  const auto fc = run_suite("fc", o);
  CHECK(fc.pass());
  CHECK(fc.checks.size() >= 3);
}
