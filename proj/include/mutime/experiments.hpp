#pragma once

// Experiment configs shared by the CLI subcommands and batch manifests,
// their runners, and CSV/JSON output.

#include "mutime/factorization.hpp"
#include "mutime/mixing.hpp"
#include "mutime/mutation.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>

namespace mutime {

using nlohmann::json;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failed acceptance check or verification count; maps to exit code 2.
class CriterionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kManifestVersion = "1";

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> kAll = {"simulate",      "stopping",       "mixing-exact", "scaling",
                                                "mutate-verify", "counterexample", "factorize",    "spanning"};
  return kAll;
}

inline bool is_stochastic(const std::string& sub) {
  return sub == "simulate" || sub == "stopping" || sub == "scaling" || sub == "spanning";
}

struct ExperimentConfig {
  std::string subcommand;
  std::string family = "wash1d";
  std::vector<int> n_list;
  Rational p = Rational(1, 2);
  int dim = 1;
  std::string rule;
  std::vector<int> t_grid;
  std::size_t replicas = 0;
  std::optional<std::uint64_t> seed;
  std::string output;  // empty: stdout
  std::string format;  // empty: json for mutate-verify and factorize, csv otherwise
  std::optional<std::string> permutation;                  // factorize
  std::optional<std::vector<Transposition>> sequence;      // factorize
};

// ---- tables -------------------------------------------------------------------

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
  std::vector<Table> tables;  // the first one is the primary output
  json report;                // extra JSON (fits, verification counts); null if none
  bool passed = true;         // false when a verification count is nonzero
  bool report_is_json = false;  // JSON output is the report alone
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << csv_field(cells[k]);
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

inline json to_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json o = json::object();
    for (std::size_t k = 0; k < t.header.size(); ++k) o[t.header[k]] = r[k];
    rows.push_back(std::move(o));
  }
  return rows;
}

inline json to_json(const ExperimentResult& r) {
  if (r.report_is_json) return r.report;
  json o = json::object();
  for (const auto& t : r.tables) o[t.name] = to_json(t);
  if (!r.report.is_null()) o["report"] = r.report;
  return o;
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// ---- validation ---------------------------------------------------------------------

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

inline ProcessSpec spec_of(const ExperimentConfig& c, int n) {
  try {
    return ProcessSpec(parse_family(c.family), n, c.p, c.dim);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
  using detail::require;
  const auto& subs = subcommands();
  require(std::find(subs.begin(), subs.end(), c.subcommand) != subs.end(), "unknown subcommand '" + c.subcommand + "'");
  require(c.format.empty() || c.format == "csv" || c.format == "json", "format must be csv or json");
  require(!is_stochastic(c.subcommand) || c.seed.has_value(), c.subcommand + " needs a seed");
  for (int t : c.t_grid) require(t >= 0, "t must be nonnegative");
  for (std::size_t k = 1; k < c.t_grid.size(); ++k) require(c.t_grid[k] > c.t_grid[k - 1], "t grid must be strictly increasing");
  for (std::size_t k = 1; k < c.n_list.size(); ++k) require(c.n_list[k] > c.n_list[k - 1], "n list must be strictly increasing");
  const auto& s = c.subcommand;
  if (s == "factorize") {
    require(c.permutation.has_value(), "factorize needs a permutation");
    try {
      auto pi = parse_permutation(*c.permutation);
      if (c.sequence)
        for (const auto& t : *c.sequence) require(t.j <= pi.size(), "sequence label exceeds n");
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw ValidationError(e.what());
    }
    return;
  }
  if (s == "counterexample") return;
  require(!c.n_list.empty(), s + " needs n");
  if (s == "spanning") {
    for (int n : c.n_list) require(n >= 2 && n <= 8, "spanning needs 2 <= n <= 8");
    require(c.replicas >= 1, "spanning needs replicas >= 1");
    return;
  }
  for (int n : c.n_list) detail::spec_of(c, n);
  if (s == "simulate" || s == "mixing-exact" || s == "mutate-verify")
    require(c.n_list.size() == 1, s + " takes a single n");
  if (s == "simulate" || s == "stopping") require(c.replicas >= 1, s + " needs replicas >= 1");
  if (s == "simulate" || s == "stopping" || s == "mixing-exact") require(!c.t_grid.empty(), s + " needs t");
  if (s == "scaling") {
    require(c.n_list.size() >= 3, "scaling needs at least 3 deck sizes");
    require(c.n_list.front() >= 2, "scaling needs n >= 2");
    require(c.replicas >= 2, "scaling needs replicas >= 2");
  }
  if (s == "stopping" || s == "mixing-exact") {
    try {
      if (!c.rule.empty()) parse_stopping(c.rule);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  if (s == "mutate-verify") {
    require(c.t_grid.size() == 1, "mutate-verify takes a single t");
    try {
      parse_mutation_rule(c.rule.empty() ? "fast" : c.rule);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    require(supports_mutation(parse_family(c.family)), "mutation maps are not defined for " + c.family);
  }
}

// ---- runners ------------------------------------------------------------------------

namespace detail {

inline std::string row_rational(const Rational& q) { return to_string(q); }

// Steps of replica r use stream (seed, 0, r); the collections drawn for wash
// projections use (seed, 1, r) so that recording them leaves the steps alone.
inline ExperimentResult run_simulate(const ExperimentConfig& c) {
  const auto spec = spec_of(c, c.n_list.front());
  const int t_max = c.t_grid.back();
  Table events{"events", {"replica", "t", "event_pair", "event_kind"}, {}};
  Table projections{"projections", {"replica", "t", "permutation"}, {}};
  for (std::size_t r = 0; r < c.replicas; ++r) {
    Rng rng = make_stream(*c.seed, 0, r), pile_rng = make_stream(*c.seed, 1, r);
    ProcessState x = canonical_start(spec);
    auto record = [&](int t) {
      std::optional<Collection> col;
      if (is_wash(spec.family)) col = sample_collection(std::get<Placement>(x), pile_rng);
      projections.rows.push_back({std::to_string(r), std::to_string(t), to_string(project(spec, x, col))});
    };
    std::size_t next = 0;
    if (c.t_grid[next] == 0) {
      record(0);
      ++next;
    }
    for (int t = 1; t <= t_max; ++t) {
      auto step = sample_step(spec, x, rng, t);
      for (const auto& e : step.events)
        events.rows.push_back({std::to_string(r), std::to_string(t), to_string(e.pair), kind_name(e.kind)});
      x = std::move(step.next);
      if (next < c.t_grid.size() && c.t_grid[next] == t) {
        record(t);
        ++next;
      }
    }
  }
  return {{std::move(events), std::move(projections)}, nullptr};
}

inline ExperimentResult run_stopping(const ExperimentConfig& c) {
  const auto kind = parse_stopping(c.rule.empty() ? "all-pairs" : c.rule);
  Table tail{"tail", {"n", "t", "estimate", "ci_lo", "ci_hi"}, {}};
  Table comb{"combining", {"n", "pair_mean_time", "all_pairs_median", "ratio"}, {}};
  for (int n : c.n_list) {
    const auto spec = spec_of(c, n);
    for (const auto& e : tail_estimates(spec, kind, c.t_grid, c.replicas, *c.seed))
      tail.rows.push_back({std::to_string(n), std::to_string(e.t), fmt_double(e.estimate), fmt_double(e.ci.lo),
                           fmt_double(e.ci.hi)});
    if (n >= 2) {
      const auto row = combining_row(spec, c.replicas, *c.seed);
      comb.rows.push_back({std::to_string(n), fmt_double(row.pair_mean_time), fmt_double(row.all_pairs_median),
                           fmt_double(row.ratio)});
    }
  }
  return {{std::move(tail), std::move(comb)}, nullptr};
}

inline ExperimentResult run_mixing_exact(const ExperimentConfig& c) {
  const auto spec = spec_of(c, c.n_list.front());
  const auto kind = parse_stopping(c.rule.empty() ? "all-pairs" : c.rule);
  Table t{"mixing", {"t", "sep", "tv", "p_T_gt_t"}, {}};
  json exact = json::array();
  for (const auto& r : mixing_table(spec, c.t_grid, kind)) {
    t.rows.push_back({std::to_string(r.t), fmt_double(to_double(r.sep)), fmt_double(to_double(r.tv)),
                      fmt_double(to_double(r.tail))});
    exact.push_back({{"t", r.t}, {"sep", to_string(r.sep)}, {"tv", to_string(r.tv)}, {"p_T_gt_t", to_string(r.tail)},
                     {"bound_holds", r.holds()}});
  }
  return {{std::move(t)}, json{{"rule", stopping_name(kind)}, {"exact", exact}}};
}

inline ExperimentResult run_scaling(const ExperimentConfig& c) {
  const auto series = scaling_series(spec_of(c, c.n_list.front()), c.n_list, c.replicas, *c.seed);
  Table t{"scaling", {"n", "stat", "stderr"}, {}};
  for (const auto& p : series.points) t.rows.push_back({std::to_string(p.n), fmt_double(p.statistic), fmt_double(p.stderr_)});
  const auto fit = scaling_fit(series);
  json report{{"statistic", series.statistic}, {"exponent", fit.exponent}, {"stderr", fit.stderr_}, {"r2", fit.r2},
              {"corrected_exponent", fit.corrected_exponent}};
  return {{std::move(t)}, report};
}

inline json to_json(const MutationReport& r) {
  return {{"family", r.family},
          {"n", r.n},
          {"t", r.t},
          {"rule", r.rule},
          {"paths_total", r.paths_total},
          {"paths_satisfying", r.paths_satisfying},
          {"maps_checked", r.maps_checked},
          {"roundtrip_failures", r.roundtrip_failures},
          {"end_mismatch", r.end_mismatch},
          {"prob_mismatch", r.prob_mismatch},
          {"injectivity_failures", r.injectivity_failures},
          {"count_inequality_failures", r.count_inequality_failures},
          {"contract_violations", r.contract_violations}};
}

inline ExperimentResult run_mutate_verify(const ExperimentConfig& c) {
  const auto spec = spec_of(c, c.n_list.front());
  const auto rep = verify_mutation(spec, c.t_grid.front(), parse_mutation_rule(c.rule.empty() ? "fast" : c.rule));
  if (rep.contract_violations) throw ContractViolation("mutation residual not the identity on some path");
  const json j = to_json(rep);
  Table t{"mutate_verify", {}, {{}}};
  for (const auto& [k, v] : j.items()) {
    t.header.push_back(k);
    t.rows[0].push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  return {{std::move(t)}, j, rep.ok(), true};
}

inline ExperimentResult run_counterexample(const ExperimentConfig& c) {
  const int n = c.n_list.empty() ? 3 : c.n_list.front();
  const int t = c.t_grid.empty() ? 3 : c.t_grid.front();
  const auto d = conditioned_distribution(ProcessSpec(Family::kWash1d, n), t, StoppingKind::kAllPairs);
  Table tab{"distribution", {"permutation", "probability"}, {}};
  Rational lo = 1, hi = 0;
  for (const auto& [pi, q] : d.law) {
    tab.rows.push_back({to_string(pi), row_rational(q)});
    lo = std::min<Rational>(lo, q);
    hi = std::max<Rational>(hi, q);
  }
  json report{{"family", "wash1d"}, {"n", n}, {"t", t}, {"rule", "all-pairs"}, {"condition_mass", to_string(d.mass)},
              {"min", to_string(lo)}, {"max", to_string(hi)}, {"nonuniform", hi > lo}};
  return {{std::move(tab)}, report};
}

inline ExperimentResult run_factorize(const ExperimentConfig& c) {
  const auto pi = parse_permutation(*c.permutation);
  json report{{"permutation", to_string(pi)}, {"cycles", to_string(cycles(pi))}};
  Table t{"factorization", {}, {{}}};
  if (c.sequence) {
    const TranspositionSequence seq(pi.size(), *c.sequence);
    const auto mask = greedy_subsequence_factor(seq, pi);
    std::vector<int> bits(mask.eps.begin(), mask.eps.end());
    if (evaluate_subsequence(seq, mask) != pi) throw ContractViolation("greedy mask does not evaluate to the target");
    report["mask"] = bits;
    std::string text;
    for (int b : bits) text += std::to_string(b);
    t.header = {"permutation", "mask"};
    t.rows[0] = {to_string(pi), text};
  } else {
    const auto star = star_factor(pi);
    if (evaluate_star(star) != pi) throw ContractViolation("star factor does not evaluate to the target");
    report["star"] = star.a;
    std::string text;
    for (int k = 0; k < star.n; ++k) text += (k ? " " : "") + std::to_string(star.a[k]);
    t.header = {"permutation", "star"};
    t.rows[0] = {to_string(pi), text};
  }
  return {{std::move(t)}, report};
}

// Row `seed` is the replica stream index: stream (seed, n, row seed).
inline ExperimentResult run_spanning(const ExperimentConfig& c) {
  Table t{"spanning", {"n", "seed", "min_spanning_prefix", "coupon_collector_steps"}, {}};
  json summary = json::array();
  for (int n : c.n_list) {
    double sum_span = 0, sum_coupon = 0;
    std::size_t shorter = 0;
    for (std::size_t r = 0; r < c.replicas; ++r) {
      Rng rng = make_stream(*c.seed, static_cast<std::uint64_t>(n), r);
      const auto s = sample_spanning(n, rng);
      t.rows.push_back({std::to_string(n), std::to_string(r), std::to_string(s.min_spanning_prefix),
                        std::to_string(s.coupon_collector_steps)});
      sum_span += static_cast<double>(s.min_spanning_prefix);
      sum_coupon += static_cast<double>(s.coupon_collector_steps);
      shorter += s.min_spanning_prefix < s.coupon_collector_steps;
    }
    const double m = static_cast<double>(c.replicas);
    summary.push_back({{"n", n},
                       {"mean_min_spanning_prefix", sum_span / m},
                       {"mean_coupon_collector_steps", sum_coupon / m},
                       {"fraction_spanning_before_collection", static_cast<double>(shorter) / m}});
  }
  return {{std::move(t)}, json{{"summary", summary}}};
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& c) {
  validate(c);
  const auto& s = c.subcommand;
  if (s == "simulate") return detail::run_simulate(c);
  if (s == "stopping") return detail::run_stopping(c);
  if (s == "mixing-exact") return detail::run_mixing_exact(c);
  if (s == "scaling") return detail::run_scaling(c);
  if (s == "mutate-verify") return detail::run_mutate_verify(c);
  if (s == "counterexample") return detail::run_counterexample(c);
  if (s == "factorize") return detail::run_factorize(c);
  return detail::run_spanning(c);
}

inline std::string effective_format(const ExperimentConfig& c) {
  if (!c.format.empty()) return c.format;
  return c.subcommand == "mutate-verify" || c.subcommand == "factorize" ? "json" : "csv";
}

// CSV: the primary table goes to `path`, other tables to <stem>.<name>.csv and
// the report to <stem>.report.json. JSON: everything in one object at `path`.
inline std::vector<std::string> write_result(const ExperimentResult& r, const ExperimentConfig& c, const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  auto put = [&](const fs::path& file, const std::string& text) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    os << text;
    written.push_back(file.string());
  };
  const fs::path out(path);
  if (effective_format(c) == "json") {
    put(out, to_json(r).dump(2) + "\n");
    return written;
  }
  const fs::path stem = out.parent_path() / out.stem();
  for (std::size_t k = 0; k < r.tables.size(); ++k)
    put(k == 0 ? out : fs::path(stem.string() + "." + r.tables[k].name + ".csv"), to_csv(r.tables[k]));
  if (!r.report.is_null()) put(stem.string() + ".report.json", r.report.dump(2) + "\n");
  return written;
}

// ---- manifests ------------------------------------------------------------------------------

struct Manifest {
  std::string version;
  std::optional<std::uint64_t> seed;  // global seed for entries without their own
  std::vector<ExperimentConfig> experiments;
};

namespace detail {

inline std::vector<int> int_list(const json& j, const std::string& key) {
  if (j.is_number_integer()) return {j.get<int>()};
  if (!j.is_array()) throw ValidationError(key + " must be an integer or a list of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ValidationError(key + " must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

inline ExperimentConfig parse_entry(const json& e, std::size_t index) {
  const std::string where = "experiment " + std::to_string(index) + ": ";
  if (!e.is_object()) throw ValidationError(where + "entry must be an object");
  static const std::set<std::string> known = {"subcommand", "family", "n",      "n_list", "params", "t",
                                              "t_grid",     "replicas", "seed", "output", "format"};
  for (const auto& [k, v] : e.items())
    if (!known.count(k)) throw ValidationError(where + "unknown key '" + k + "'");
  ExperimentConfig c;
  try {
    c.subcommand = e.at("subcommand").get<std::string>();
    if (e.contains("family")) c.family = e["family"].get<std::string>();
    if (e.contains("n") && e.contains("n_list")) throw ValidationError(where + "give n or n_list, not both");
    if (e.contains("n")) c.n_list = int_list(e["n"], "n");
    if (e.contains("n_list")) c.n_list = int_list(e["n_list"], "n_list");
    if (e.contains("t") && e.contains("t_grid")) throw ValidationError(where + "give t or t_grid, not both");
    if (e.contains("t")) c.t_grid = int_list(e["t"], "t");
    if (e.contains("t_grid")) c.t_grid = int_list(e["t_grid"], "t_grid");
    if (e.contains("replicas")) c.replicas = e["replicas"].get<std::size_t>();
    if (e.contains("seed")) c.seed = e["seed"].get<std::uint64_t>();
    c.output = e.at("output").get<std::string>();
    if (e.contains("format")) c.format = e["format"].get<std::string>();
    if (e.contains("params")) {
      const auto& pm = e["params"];
      if (!pm.is_object()) throw ValidationError(where + "params must be an object");
      for (const auto& [k, v] : pm.items()) {
        if (k == "p") c.p = parse_rational(v.is_string() ? v.get<std::string>() : v.dump());
        else if (k == "dim") c.dim = v.get<int>();
        else if (k == "rule") c.rule = v.get<std::string>();
        else if (k == "permutation") c.permutation = v.is_string() ? v.get<std::string>() : v.dump();
        else if (k == "sequence") {
          std::vector<Transposition> seq;
          for (const auto& pr : v) seq.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
          c.sequence = std::move(seq);
        } else throw ValidationError(where + "unknown param '" + k + "'");
      }
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ValidationError(where + ex.what());
  }
  if (c.output.empty()) throw ValidationError(where + "output path is empty");
  return c;
}

}  // namespace detail

// Every entry is checked before anything runs.
inline Manifest parse_manifest(const json& j) {
  if (!j.is_object()) throw ValidationError("manifest must be a JSON object");
  Manifest m;
  try {
    m.version = j.at("version").get<std::string>();
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
  } catch (const std::exception& ex) {
    throw ValidationError(std::string("manifest header: ") + ex.what());
  }
  if (m.version != kManifestVersion) throw ValidationError("unrecognized manifest version '" + m.version + "'");
  const json experiments = j.value("experiments", json::array());
  if (!experiments.is_array()) throw ValidationError("experiments must be a list");
  std::set<std::string> outputs;
  for (std::size_t k = 0; k < experiments.size(); ++k) {
    auto c = detail::parse_entry(experiments[k], k);
    if (!c.seed && m.seed && is_stochastic(c.subcommand)) c.seed = derive_seed(*m.seed, k, 0);
    try {
      validate(c);
    } catch (const ValidationError& ex) {
      throw ValidationError("experiment " + std::to_string(k) + ": " + ex.what());
    }
    const auto norm = std::filesystem::path(c.output).lexically_normal().string();
    if (!outputs.insert(norm).second) throw ValidationError("duplicate output path '" + c.output + "'");
    m.experiments.push_back(std::move(c));
  }
  return m;
}

inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

struct ExperimentStatus {
  std::string subcommand;
  std::string output;
  std::string status;  // ok, failed, criterion-failed, contract-violation
  std::string message;
  double seconds = 0;
  std::vector<std::string> files;
};

struct RunMetadata {
  std::string artifact_version = kArtifactVersion;
  std::string manifest_hash;
  std::optional<std::uint64_t> global_seed;
  double wall_clock_seconds = 0;
  std::vector<ExperimentStatus> experiments;

  bool ok() const {
    return std::all_of(experiments.begin(), experiments.end(), [](const auto& e) { return e.status == "ok"; });
  }
  bool criterion_failed() const {
    return std::any_of(experiments.begin(), experiments.end(), [](const auto& e) { return e.status == "criterion-failed"; });
  }
  bool contract_violation() const {
    return std::any_of(experiments.begin(), experiments.end(),
                       [](const auto& e) { return e.status == "contract-violation"; });
  }
};

inline json to_json(const RunMetadata& m) {
  json ex = json::array();
  for (const auto& e : m.experiments)
    ex.push_back({{"subcommand", e.subcommand}, {"output", e.output}, {"status", e.status}, {"message", e.message},
                  {"seconds", e.seconds}, {"files", e.files}});
  return {{"artifact_version", m.artifact_version},
          {"manifest_hash", m.manifest_hash},
          {"global_seed", m.global_seed ? json(*m.global_seed) : json(nullptr)},
          {"wall_clock_seconds", m.wall_clock_seconds},
          {"experiments", ex}};
}

// Outputs are resolved against `base_dir` when relative. Experiments run in
// declared order; a failing one is recorded and the rest still run.
inline RunMetadata run_manifest(const Manifest& m, const std::string& manifest_text,
                                const std::filesystem::path& base_dir = ".") {
  using clock = std::chrono::steady_clock;
  RunMetadata meta;
  meta.manifest_hash = fnv1a_hex(manifest_text);
  meta.global_seed = m.seed;
  const auto start = clock::now();
  for (const auto& c : m.experiments) {
    ExperimentStatus st{c.subcommand, c.output, "ok", "", 0, {}};
    const auto t0 = clock::now();
    try {
      const auto path = std::filesystem::path(c.output).is_absolute() ? std::filesystem::path(c.output)
                                                                        : base_dir / c.output;
      const auto result = run_experiment(c);
      st.files = write_result(result, c, path.string());
      if (!result.passed) {
        st.status = "criterion-failed";
        st.message = "verification counts are nonzero";
      }
    } catch (const ContractViolation& ex) {
      st.status = "contract-violation";
      st.message = ex.what();
    } catch (const std::exception& ex) {
      st.status = "failed";
      st.message = ex.what();
    }
    st.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    meta.experiments.push_back(std::move(st));
  }
  meta.wall_clock_seconds = std::chrono::duration<double>(clock::now() - start).count();
  return meta;
}

}  // namespace mutime
