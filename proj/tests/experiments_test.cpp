#include "mutime/experiments.hpp"

#include <gtest/gtest.h>

namespace mutime {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mutime_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

ExperimentConfig config(std::string sub) {
  ExperimentConfig c;
  c.subcommand = std::move(sub);
  return c;
}

TEST(ValidateTest, Rejections) {
  EXPECT_THROW(validate(config("shuffle")), ValidationError);
  auto c = config("simulate");
  c.n_list = {3};
  c.t_grid = {4};
  c.replicas = 2;
  EXPECT_THROW(validate(c), ValidationError);  // no seed
  c.seed = 1;
  EXPECT_NO_THROW(validate(c));
  c.family = "overhand";
  EXPECT_THROW(validate(c), ValidationError);
  c.family = "wash1d";
  c.t_grid = {4, 2};
  EXPECT_THROW(validate(c), ValidationError);
  auto m = config("mutate-verify");
  m.family = "random-to-random";
  m.n_list = {3};
  m.t_grid = {3};
  EXPECT_THROW(validate(m), ValidationError);
  auto s = config("scaling");
  s.n_list = {8, 16};
  s.replicas = 10;
  s.seed = 1;
  EXPECT_THROW(validate(s), ValidationError);
  auto f = config("factorize");
  EXPECT_THROW(validate(f), ValidationError);
  f.permutation = "[2,2,1]";
  EXPECT_THROW(validate(f), ValidationError);
}

TEST(ManifestTest, Validation) {
  EXPECT_THROW(parse_manifest(json{{"version", "9"}}), ValidationError);
  EXPECT_THROW(parse_manifest(json::array()), ValidationError);
  json dup = {{"version", "1"},
              {"experiments",
               {{{"subcommand", "counterexample"}, {"output", "a.csv"}},
                {{"subcommand", "counterexample"}, {"output", "./a.csv"}}}}};
  EXPECT_THROW(parse_manifest(dup), ValidationError);
  json unknown = {{"version", "1"}, {"experiments", {{{"subcommand", "bogus"}, {"output", "a.csv"}}}}};
  EXPECT_THROW(parse_manifest(unknown), ValidationError);
  json badkey = {{"version", "1"}, {"experiments", {{{"subcommand", "counterexample"}, {"outptu", "a.csv"}}}}};
  EXPECT_THROW(parse_manifest(badkey), ValidationError);
  // Stochastic entries pick up a derived seed from the global one.
  json seeded = {{"version", "1"},
                 {"seed", 7},
                 {"experiments", {{{"subcommand", "spanning"}, {"n", 4}, {"replicas", 5}, {"output", "s.csv"}}}}};
  auto m = parse_manifest(seeded);
  EXPECT_EQ(m.experiments[0].seed, derive_seed(7, 0, 0));
  json unseeded = seeded;
  unseeded.erase("seed");
  EXPECT_THROW(parse_manifest(unseeded), ValidationError);
}

TEST(ManifestTest, EmptyListSucceeds) {
  const std::string text = R"({"version": "1", "experiments": []})";
  auto meta = run_manifest(parse_manifest(json::parse(text)), text, scratch("empty"));
  EXPECT_TRUE(meta.ok());
  EXPECT_TRUE(meta.experiments.empty());
  EXPECT_EQ(meta.manifest_hash, fnv1a_hex(text));
}

TEST(ManifestTest, CounterexampleWritesDistribution) {
  const auto dir = scratch("counter");
  const std::string text =
      R"({"version": "1", "experiments": [{"subcommand": "counterexample", "output": "out/cx.csv"}]})";
  auto meta = run_manifest(parse_manifest(json::parse(text)), text, dir);
  ASSERT_TRUE(meta.ok()) << meta.experiments[0].message;
  const auto csv = slurp(dir / "out/cx.csv");
  EXPECT_EQ(csv,
            "permutation,probability\n"
            "\"[1,2,3]\",5/32\n\"[1,3,2]\",21/128\n\"[2,1,3]\",21/128\n"
            "\"[2,3,1]\",11/64\n\"[3,1,2]\",11/64\n\"[3,2,1]\",11/64\n");
  auto report = json::parse(slurp(dir / "out/cx.report.json"));
  EXPECT_EQ(report["condition_mass"], "1/27");
  EXPECT_TRUE(report["nonuniform"].get<bool>());
}

TEST(ManifestTest, FailureIsRecordedAndOthersRun) {
  const auto dir = scratch("partial");
  // t = 1 gives the all-pairs rule zero mass.
  const std::string text = R"({"version": "1", "experiments": [
    {"subcommand": "counterexample", "t": 1, "output": "bad.csv"},
    {"subcommand": "factorize", "params": {"permutation": "[2,3,1]"}, "output": "f.json"}]})";
  auto meta = run_manifest(parse_manifest(json::parse(text)), text, dir);
  EXPECT_FALSE(meta.ok());
  EXPECT_EQ(meta.experiments[0].status, "failed");
  EXPECT_EQ(meta.experiments[0].message, "empty condition");
  EXPECT_EQ(meta.experiments[1].status, "ok");
  auto f = json::parse(slurp(dir / "f.json"));
  EXPECT_EQ(f["report"]["star"], json({1, 1, 2}));
}

TEST(RunTest, Deterministic) {
  auto sim = config("simulate");
  sim.n_list = {4};
  sim.t_grid = {0, 3, 10};
  sim.replicas = 3;
  sim.seed = 11;
  auto a = run_experiment(sim), b = run_experiment(sim);
  EXPECT_EQ(to_csv(a.tables[0]), to_csv(b.tables[0]));
  EXPECT_EQ(to_csv(a.tables[1]), to_csv(b.tables[1]));
  ASSERT_EQ(a.tables[1].rows.size(), 9u);
  EXPECT_EQ(a.tables[1].rows[0], (std::vector<std::string>{"0", "0", "[1,2,3,4]"}));
  sim.seed = 12;
  EXPECT_NE(to_csv(run_experiment(sim).tables[0]), to_csv(a.tables[0]));

  auto sp = config("spanning");
  sp.n_list = {4, 5};
  sp.replicas = 50;
  sp.seed = 3;
  const auto x = run_experiment(sp);
  EXPECT_EQ(to_csv(x.tables[0]), to_csv(run_experiment(sp).tables[0]));
  EXPECT_EQ(x.tables[0].header, (std::vector<std::string>{"n", "seed", "min_spanning_prefix", "coupon_collector_steps"}));
  EXPECT_EQ(x.tables[0].rows.size(), 100u);
}

TEST(RunTest, ReportsAndData) {
  auto mv = config("mutate-verify");
  mv.n_list = {3};
  mv.t_grid = {3};
  const auto r = run_experiment(mv);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.report["roundtrip_failures"], 0);
  EXPECT_GT(r.report["paths_satisfying"].get<int>(), 0);
  EXPECT_EQ(effective_format(mv), "json");

  auto mx = config("mixing-exact");
  mx.n_list = {3};
  mx.t_grid = {0, 1, 2};
  const auto m = run_experiment(mx);
  EXPECT_EQ(m.tables[0].header, (std::vector<std::string>{"t", "sep", "tv", "p_T_gt_t"}));
  EXPECT_EQ(m.tables[0].rows[0], (std::vector<std::string>{"0", "1", "0.8333333333", "1"}));

  auto fz = config("factorize");
  fz.permutation = "[2,1,3]";
  fz.sequence = std::vector<Transposition>{{1, 2}, {1, 3}, {2, 3}};
  const auto f = run_experiment(fz);
  EXPECT_EQ(f.report["mask"], json({1, 0, 0}));

  auto st = config("stopping");
  st.n_list = {3};
  st.t_grid = {0, 50};
  st.replicas = 100;
  st.seed = 2;
  const auto s = run_experiment(st);
  EXPECT_EQ(s.tables[0].rows[0][2], "1");
  EXPECT_EQ(s.tables[1].rows.size(), 1u);
}

TEST(OutputTest, CsvQuotingAndSidecars) {
  Table t{"main", {"a", "b"}, {{"[1,2]", "x\"y"}}};
  EXPECT_EQ(to_csv(t), "a,b\n\"[1,2]\",\"x\"\"y\"\n");
  const auto dir = scratch("sidecar");
  auto sc = config("scaling");
  sc.n_list = {3, 4, 5};
  sc.replicas = 20;
  sc.seed = 1;
  const auto files = write_result(run_experiment(sc), sc, (dir / "scale.csv").string());
  ASSERT_EQ(files.size(), 2u);
  auto fit = json::parse(slurp(dir / "scale.report.json"));
  EXPECT_TRUE(fit.contains("corrected_exponent"));
  EXPECT_EQ(slurp(dir / "scale.csv").substr(0, 14), "n,stat,stderr\n");
}

}  // namespace
}  // namespace mutime
