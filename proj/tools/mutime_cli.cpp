// mutime: command-line entry point.
//
// Exit codes: 0 ok, 1 validation error, 2 criterion failure, 3 contract violation.

#include "mutime/acceptance.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <iostream>

namespace {

using namespace mutime;

enum Exit { kOk = 0, kValidation = 1, kCriterion = 2, kContract = 3 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "global seed");
  sub->add_option("--out", c.out, "output file (stdout if omitted)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

// "(1 2)(1 3)", "1-2,1-3" or "1 2 1 3": consecutive integers pair up.
std::vector<Transposition> parse_sequence(const std::string& text) {
  std::vector<int> xs;
  std::string tok;
  for (char ch : text + " ") {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      tok += ch;
    } else {
      if (!tok.empty()) xs.push_back(std::stoi(tok));
      tok.clear();
    }
  }
  if (xs.size() % 2) throw ValidationError("sequence needs an even number of labels");
  std::vector<Transposition> out;
  for (std::size_t k = 0; k < xs.size(); k += 2) out.emplace_back(xs[k], xs[k + 1]);
  return out;
}

void print_result(const ExperimentResult& r, const ExperimentConfig& c) {
  if (!c.output.empty()) {
    for (const auto& f : write_result(r, c, c.output)) std::cerr << "wrote " << f << "\n";
    return;
  }
  if (effective_format(c) == "json") {
    std::cout << to_json(r).dump(2) << "\n";
    return;
  }
  for (std::size_t k = 0; k < r.tables.size(); ++k) std::cout << (k ? "\n" : "") << to_csv(r.tables[k]);
  if (!r.report.is_null()) std::cerr << r.report.dump() << "\n";
}

int run_single(ExperimentConfig c, const Common& common) {
  c.seed = common.seed;
  c.output = common.out;
  c.format = common.format;
  const auto r = run_experiment(c);
  print_result(r, c);
  return r.passed ? kOk : kCriterion;
}

int run_manifest_file(const std::string& file, const std::string& out) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ValidationError("cannot read manifest " + file);
  const std::string text{std::istreambuf_iterator<char>(is), {}};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  const auto manifest = parse_manifest(j);
  const auto meta = run_manifest(manifest, text);
  const auto dumped = to_json(meta).dump(2) + "\n";
  if (out.empty()) {
    std::cout << dumped;
  } else {
    std::ofstream os(out, std::ios::binary);
    os << dumped;
  }
  if (meta.contract_violation()) return kContract;
  if (meta.criterion_failed()) return kCriterion;
  return meta.ok() ? kOk : kValidation;
}

int run_suite(const Common& common, std::optional<std::size_t> replicas) {
  AcceptanceConfig cfg;
  if (common.seed) cfg.seed = *common.seed;
  if (replicas) cfg.scaling_replicas = *replicas;
  if (!common.out.empty()) cfg.out_dir = common.out;
  const auto results = run_acceptance(cfg);
  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  if (cfg.out_dir) {
    json rows = json::array();
    for (const auto& r : results)
      rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    std::ofstream os(std::filesystem::path(*cfg.out_dir) / "suite.json", std::ios::binary);
    os << json{{"artifact_version", kArtifactVersion}, {"seed", cfg.seed}, {"criteria", rows}}.dump(2) << "\n";
  }
  return failed ? kCriterion : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mutation-time toolkit for card shuffling processes"};
  app.require_subcommand(0, 1);
  std::string manifest, manifest_out;
  app.add_option("--manifest", manifest, "run a JSON experiment manifest");
  app.add_option("--out", manifest_out, "with --manifest: where to write run metadata (stdout if omitted)");

  Common common;
  ExperimentConfig cfg;
  std::string p_text = "1/2";
  std::string sequence_text;
  std::string factor_json;
  std::optional<std::size_t> suite_replicas;

  auto family_opt = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "process family")->default_str(cfg.family);
    sub->add_option("--p", p_text, "wash1d-long sweep parameter")->default_str(p_text);
    sub->add_option("--dim", cfg.dim, "wash-grid dimension")->default_val(1);
  };
  auto n_list_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--n", cfg.n_list, "deck size(s), comma separated")->delimiter(',');
    if (required) o->required();
  };
  auto t_opt = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("--t", cfg.t_grid, help)->delimiter(',');
  };

  auto* sim = app.add_subcommand("simulate", "sample paths: events and projections");
  family_opt(sim);
  n_list_opt(sim, true);
  t_opt(sim, "times at which projections are recorded; steps run to the last");
  sim->add_option("--replicas", cfg.replicas)->default_val(1);
  add_common(sim, common);

  auto* stop = app.add_subcommand("stopping", "Monte Carlo tails of the stopping rules and the combining ratio");
  family_opt(stop);
  n_list_opt(stop, true);
  stop->add_option("--rule", cfg.rule, "all-pairs or sequential")->default_str("all-pairs");
  t_opt(stop, "t grid");
  stop->add_option("--replicas", cfg.replicas)->default_val(1000);
  add_common(stop, common);

  auto* mix = app.add_subcommand("mixing-exact", "exact sep, tv and P(T > t)");
  family_opt(mix);
  n_list_opt(mix, true);
  mix->add_option("--rule", cfg.rule, "all-pairs or sequential")->default_str("all-pairs");
  t_opt(mix, "t grid");
  add_common(mix, common);

  auto* scale = app.add_subcommand("scaling", "mean per-pair interaction time over deck sizes, with a log-log fit");
  family_opt(scale);
  n_list_opt(scale, true);
  scale->add_option("--replicas", cfg.replicas)->default_val(1000);
  add_common(scale, common);

  auto* mv = app.add_subcommand("mutate-verify", "exhaustive check of the mutation maps");
  family_opt(mv);
  n_list_opt(mv, true);
  t_opt(mv, "path length");
  mv->add_option("--rule", cfg.rule, "fast or slow")->default_str("fast");
  add_common(mv, common);

  auto* cx = app.add_subcommand("counterexample", "exact law given all pairs met, wash1d");
  n_list_opt(cx, false);
  t_opt(cx, "path length");
  add_common(cx, common);

  auto* fz = app.add_subcommand("factorize", "star factor, or greedy subsequence mask for a sequence");
  fz->add_option("--perm", cfg.permutation, "permutation, e.g. [2,3,1]");
  fz->add_option("--sequence", sequence_text, "transposition sequence, e.g. \"(1 2)(1 3)(2 3)\"");
  fz->add_option("--json", factor_json, "JSON file with permutation and optional sequence");
  add_common(fz, common);

  auto* sp = app.add_subcommand("spanning", "minimal spanning prefix vs coupon collector time");
  n_list_opt(sp, false);
  sp->add_option("--seeds", cfg.replicas, "number of seeds per n")->default_val(10000);
  add_common(sp, common);

  auto* suite = app.add_subcommand("suite", "run every acceptance criterion");
  suite->add_option("--replicas", suite_replicas, "override scaling replicas");
  add_common(suite, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (!manifest.empty()) {
      if (app.get_subcommands().size()) throw ValidationError("--manifest takes no subcommand");
      return run_manifest_file(manifest, manifest_out);
    }
    if (app.get_subcommands().empty()) {
      std::cout << app.help();
      return kValidation;
    }
    auto* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    cfg.p = parse_rational(p_text);
    if (chosen == suite) return run_suite(common, suite_replicas);
    if (chosen == sp && cfg.n_list.empty()) cfg.n_list = {4, 5};
    if (chosen == sim && cfg.t_grid.empty()) throw ValidationError("simulate needs --t");
    if (chosen == fz) {
      if (!factor_json.empty()) {
        std::ifstream is(factor_json);
        if (!is) throw ValidationError("cannot read " + factor_json);
        json j = json::parse(is);
        const auto& perm = j.at("permutation");
        cfg.permutation = perm.is_string() ? perm.get<std::string>() : perm.dump();
        if (j.contains("sequence")) {
          std::vector<Transposition> seq;
          for (const auto& pr : j["sequence"]) seq.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
          cfg.sequence = std::move(seq);
        }
      }
      if (!sequence_text.empty()) cfg.sequence = parse_sequence(sequence_text);
    }
    return run_single(cfg, common);
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kContract;
  } catch (const CriterionFailure& e) {
    std::cerr << "criterion failure: " << e.what() << "\n";
    return kCriterion;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
