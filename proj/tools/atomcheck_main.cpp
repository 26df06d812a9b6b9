// Command-line front end: enumerate harnesses, precompute atomic outcome
// sets, stress objects under test, and run the full non-atomicity check.

#include <cctype>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "atomcheck/checker.hpp"
#include "atomcheck/lin_checker.hpp"
#include "atomcheck/oracle.hpp"

using namespace atomcheck;

namespace {

std::chrono::nanoseconds parse_duration(const std::string& text) {
  size_t i = 0;
  while (i < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
    ++i;
  }
  if (i == 0) throw CLI::ValidationError("duration", "expected e.g. 1s or 250ms");
  double n = std::stod(text.substr(0, i));
  std::string unit = text.substr(i);
  double seconds;
  if (unit == "s" || unit.empty()) {
    seconds = n;
  } else if (unit == "ms") {
    seconds = n / 1e3;
  } else if (unit == "us") {
    seconds = n / 1e6;
  } else if (unit == "m") {
    seconds = n * 60;
  } else {
    throw CLI::ValidationError("duration", "unknown unit: " + unit);
  }
  return std::chrono::nanoseconds(static_cast<int64_t>(seconds * 1e9));
}

CoopMode parse_coop(const std::string& text) {
  if (text == "auto") return CoopMode::Auto;
  if (text == "on") return CoopMode::On;
  if (text == "off") return CoopMode::Off;
  throw CLI::ValidationError("coop", "expected auto, on, or off");
}

std::vector<MethodOverride> load_spec_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec config: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<MethodOverride> overrides;
  for (const nlohmann::json& m : j.at("methods")) {
    MethodOverride ov;
    ov.name = m.at("name").get<std::string>();
    if (m.contains("mutability")) {
      std::string text = m.at("mutability").get<std::string>();
      if (text == "read-only") {
        ov.mutability = Mutability::ReadOnly;
      } else if (text == "update") {
        ov.mutability = Mutability::Update;
      } else {
        throw SpecError("mutability must be read-only or update, got " + text);
      }
    }
    if (m.contains("core")) ov.core = m.at("core").get<bool>();
    overrides.push_back(std::move(ov));
  }
  return overrides;
}

const SutInfo& lookup_sut(const std::string& name) {
  const SutInfo* info = SutRegistry::builtin().find(name);
  if (!info) {
    throw SpecError("unknown object under test: " + name +
                    " (run list-suts for the registry)");
  }
  return *info;
}

void print_histogram(std::ostream& out, const std::string& sut_name,
                     const std::string& harness_text,
                     const OutcomeHistogram& histogram,
                     const StressVerdict& verdict) {
  out << sut_name << ": " << harness_text << "\n";
  out << "trials: " << histogram.total << ", elapsed: " << std::fixed
      << std::setprecision(3)
      << std::chrono::duration<double>(histogram.elapsed).count()
      << "s, rate: " << std::setprecision(0) << histogram.trials_per_second()
      << "/s (" << histogram.trials_per_second_per_worker() << "/s per worker, "
      << histogram.workers_used << " workers)\n";
  out << "outcome | atomic? | frequency\n";
  for (const auto& row : histogram.rows) {
    out << row.outcome.to_string() << " | " << (row.atomic ? "yes" : "NO")
        << " | " << row.count << "\n";
  }
  switch (verdict.kind) {
    case StressVerdict::Kind::AtomicSoFar:
      out << "verdict: ATOMIC so far\n";
      break;
    case StressVerdict::Kind::Violation:
      out << "verdict: NON-ATOMIC (outcome " << verdict.witness.to_string()
          << " observed " << verdict.count << " times)\n";
      break;
    case StressVerdict::Kind::Aborted:
      out << "verdict: ABORTED: " << verdict.diagnostic << "\n";
      break;
  }
}

struct EnumCli {
  std::string family = "map";
  std::string method;
  std::vector<std::string> core;
  int invocations = 0;
  int values = 0;
  int sequences = 0;
  uint64_t seed = 0;
  bool no_shuffle = false;
  bool no_symmetry = false;
  bool no_filters = false;
  bool allow_method_subset = false;
  bool allow_value_subset = false;
  bool full_hb = false;
  std::string spec_config;

  EnumOptions options() const {
    EnumOptions opts;
    opts.symmetry_reduction = !no_symmetry;
    opts.filter_all_read_only = !no_filters;
    opts.filter_serialized_read_only = !no_filters;
    opts.allow_method_subset = allow_method_subset;
    opts.allow_value_subset = allow_value_subset;
    opts.full_happens_before = full_hb;
    return opts;
  }
};

void add_enum_flags(CLI::App& cmd, EnumCli& e) {
  cmd.add_flag("--no-symmetry", e.no_symmetry,
               "keep symmetric harnesses instead of canonical representatives");
  cmd.add_flag("--no-filters", e.no_filters,
               "disable the read-only and serialized-target exclusions");
  cmd.add_flag("--allow-method-subset", e.allow_method_subset,
               "require methods(h) to be a subset of core+method, not equal");
  cmd.add_flag("--allow-value-subset", e.allow_value_subset,
               "require values(h) to be a subset of the value domain, not equal");
  cmd.add_flag("--full-hb", e.full_hb,
               "enumerate every partial order even beyond 3 sequences");
  cmd.add_option("--spec-config", e.spec_config,
                 "JSON file overriding method metadata (name, mutability, core)");
}

int run(int argc, char** argv) {
  CLI::App app{"atomicity checker for concurrent collections"};
  app.require_subcommand(1);

  // check
  CheckConfig cfg;
  std::string check_time = "1s";
  std::string check_global_timeout;
  std::string check_coop = "auto";
  std::string check_format = "table";
  std::string check_output;
  uint64_t check_trials = 0;
  EnumCli check_enum;
  CLI::App* check_cmd =
      app.add_subcommand("check", "search for a non-atomic harness of a method");
  check_cmd->add_option("--sut", cfg.sut, "object under test (see list-suts)")
      ->required();
  check_cmd->add_option("--method", cfg.method, "method under test")->required();
  check_cmd->add_option("--core", cfg.core,
                        "core methods assumed atomic (default: family core set)")
      ->delimiter(',');
  check_cmd->add_option("--max-invocations", cfg.bounds.invocations,
                        "schedule cap on invocations");
  check_cmd->add_option("--max-values", cfg.bounds.values,
                        "schedule cap on distinct argument values");
  check_cmd->add_option("--max-sequences", cfg.bounds.sequences,
                        "schedule cap on invocation sequences");
  check_cmd->add_option("--time-per-harness", check_time,
                        "stress budget per harness (default 1s)");
  check_cmd->add_option("--trials-per-harness", check_trials,
                        "stress budget in trials (overrides the time budget)");
  check_cmd->add_option("--chunk-size", cfg.chunk_size,
                        "harnesses per chunk (default 100)");
  check_cmd->add_option("--seed", cfg.seed, "shuffle seed (default 0)");
  check_cmd->add_option("--workers", cfg.workers,
                        "total stress worker threads (default: one group)");
  check_cmd->add_option("--coop", check_coop,
                        "yield between invocations: auto|on|off");
  check_cmd->add_option("--global-timeout", check_global_timeout,
                        "stop the whole search after this long");
  check_cmd->add_option("--format", check_format, "report format: table|json");
  check_cmd->add_option("--output", check_output, "write the report to a file");
  add_enum_flags(*check_cmd, check_enum);
  check_cmd->set_config("--config", "", "read options from an INI/TOML file");

  // enumerate
  EnumCli en;
  CLI::App* enum_cmd =
      app.add_subcommand("enumerate", "print the harnesses for one budget");
  enum_cmd->add_option("--family", en.family, "map|queue|deque|set")->required();
  enum_cmd->add_option("--method", en.method, "method under test")->required();
  enum_cmd->add_option("--core", en.core, "core methods")
      ->required()
      ->delimiter(',');
  enum_cmd->add_option("--invocations", en.invocations)->required();
  enum_cmd->add_option("--values", en.values)->required();
  enum_cmd->add_option("--sequences", en.sequences)->required();
  enum_cmd->add_option("--seed", en.seed, "shuffle seed (default 0)");
  enum_cmd->add_flag("--no-shuffle", en.no_shuffle, "keep generation order");
  add_enum_flags(*enum_cmd, en);

  // outcomes
  std::string outcomes_harness;
  std::string outcomes_family = "map";
  std::string outcomes_spec_config;
  CLI::App* outcomes_cmd = app.add_subcommand(
      "outcomes", "print the atomic outcome set of a harness");
  outcomes_cmd->add_option("harness", outcomes_harness, "harness text")
      ->required();
  outcomes_cmd->add_option("--family", outcomes_family, "map|queue|deque|set");
  outcomes_cmd->add_option("--spec-config", outcomes_spec_config,
                           "JSON method metadata overrides");

  // stress
  std::string stress_harness;
  std::string stress_sut;
  std::string stress_time = "1s";
  uint64_t stress_trials = 0;
  int stress_workers = 0;
  bool stress_fail_fast = false;
  bool stress_validate = false;
  std::string stress_coop = "auto";
  CLI::App* stress_cmd =
      app.add_subcommand("stress", "stress-test one harness against one object");
  stress_cmd->add_option("harness", stress_harness, "harness text")->required();
  stress_cmd->add_option("--sut", stress_sut, "object under test")->required();
  stress_cmd->add_option("--time", stress_time, "time budget (default 1s)");
  stress_cmd->add_option("--trials", stress_trials, "trial budget");
  stress_cmd->add_option("--workers", stress_workers, "total worker threads");
  stress_cmd->add_flag("--fail-fast", stress_fail_fast,
                       "stop at the first non-atomic outcome");
  stress_cmd->add_flag("--validate", stress_validate,
                       "record histories and cross-check the linearizability oracle");
  stress_cmd->add_option("--coop", stress_coop, "auto|on|off");

  // lincheck
  std::string lin_harness, lin_outcome, lin_hb, lin_family = "map";
  CLI::App* lin_cmd = app.add_subcommand(
      "lincheck", "linearizability of one recorded history (brute force)");
  lin_cmd->add_option("--harness", lin_harness, "harness text")->required();
  lin_cmd->add_option("--outcome", lin_outcome, "observed outcome")->required();
  lin_cmd->add_option("--hb", lin_hb,
                      "extra happens-before over invocation indices, e.g. '1 < 0'");
  lin_cmd->add_option("--family", lin_family, "map|queue|deque|set");

  // list-suts
  CLI::App* list_cmd =
      app.add_subcommand("list-suts", "print the object-under-test registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (*check_cmd) {
    if (!check_enum.spec_config.empty()) {
      cfg.method_overrides = load_spec_config(check_enum.spec_config);
    }
    cfg.enum_options = check_enum.options();
    cfg.time_per_harness = parse_duration(check_time);
    if (check_trials > 0) cfg.trials_per_harness = check_trials;
    if (!check_global_timeout.empty()) {
      cfg.global_timeout = parse_duration(check_global_timeout);
    }
    cfg.coop = parse_coop(check_coop);
    CheckReport report = check(cfg);
    std::string rendered = check_format == "json" ? write_report_json(report)
                                                  : write_report_table(report);
    if (!check_output.empty()) {
      std::ofstream out(check_output);
      out << rendered;
    } else {
      std::cout << rendered;
      if (check_format == "json") std::cout << "\n";
    }
    return report.verdict.kind == CheckVerdict::Kind::NonAtomic ? 1 : 0;
  }

  if (*enum_cmd) {
    Family family = family_from_name(en.family);
    SequentialSpec spec =
        en.spec_config.empty()
            ? SequentialSpec::for_family(family)
            : SequentialSpec::with_overrides(family,
                                             load_spec_config(en.spec_config));
    auto harnesses =
        construct_harnesses(en.core, en.method,
                            {en.invocations, en.values, en.sequences}, spec,
                            en.options());
    if (!en.no_shuffle) shuffle_harnesses(harnesses, en.seed);
    for (const Harness& h : harnesses) std::cout << format_harness(h) << "\n";
    return 0;
  }

  if (*outcomes_cmd) {
    Family family = family_from_name(outcomes_family);
    SequentialSpec spec =
        outcomes_spec_config.empty()
            ? SequentialSpec::for_family(family)
            : SequentialSpec::with_overrides(
                  family, load_spec_config(outcomes_spec_config));
    Harness h = parse_harness(outcomes_harness);
    AtomicOutcomeSet set = atomic_outcomes(h, spec);
    std::vector<std::string> rendered;
    for (const Outcome& o : set.outcomes) rendered.push_back(o.to_string());
    std::sort(rendered.begin(), rendered.end());
    std::cout << "harness: " << set.harness_text << "\n";
    std::cout << "linearizations: " << count_linearizations(h) << "\n";
    std::cout << "atomic outcomes (" << rendered.size() << "):\n";
    for (const std::string& line : rendered) std::cout << "  " << line << "\n";
    return 0;
  }

  if (*stress_cmd) {
    const SutInfo& info = lookup_sut(stress_sut);
    const SequentialSpec& spec = SequentialSpec::for_family(info.family);
    Harness h = parse_harness(stress_harness);
    StressBudget budget;
    if (stress_trials > 0) {
      budget = StressBudget::for_trials(stress_trials, stress_workers);
    } else {
      budget = StressBudget::for_time(parse_duration(stress_time), stress_workers);
    }
    budget.fail_fast = stress_fail_fast;
    budget.coop = parse_coop(stress_coop);
    if (stress_validate) {
      ValidationReport report = validate_histories(h, info.adapter(), spec, budget);
      std::cout << "trials: " << report.trials
                << ", distinct histories: " << report.histories.size()
                << ", linearizable: " << report.linearizable_histories
                << ", non-atomic outcomes: " << report.nonatomic_outcome_histories
                << "\n";
      std::cout << "linearizable-but-non-atomic counterexamples: "
                << report.counterexamples << "\n";
      std::cout << "phase order violations: " << report.phase_order_violations
                << "\n";
      return report.counterexamples == 0 ? 0 : 1;
    }
    auto [histogram, verdict] = stress(h, info.adapter(), spec, budget);
    print_histogram(std::cout, info.name, format_harness(h), histogram, verdict);
    if (verdict.kind == StressVerdict::Kind::Aborted) return 2;
    return verdict.kind == StressVerdict::Kind::Violation ? 1 : 0;
  }

  if (*lin_cmd) {
    const SequentialSpec& spec =
        SequentialSpec::for_family(family_from_name(lin_family));
    Harness h = parse_harness(lin_harness);
    History hist = induced_history(h, parse_outcome(lin_outcome));
    if (!lin_hb.empty()) {
      std::istringstream pairs(lin_hb);
      std::string item;
      while (std::getline(pairs, item, ',')) {
        size_t lt = item.find('<');
        if (lt == std::string::npos) {
          throw SpecError("happens-before entries look like '1 < 0'");
        }
        hist.hb_invocations.emplace(std::stoi(item.substr(0, lt)),
                                    std::stoi(item.substr(lt + 1)));
      }
    }
    bool linearizable = is_linearizable(hist, spec);
    std::cout << (linearizable ? "linearizable" : "NOT linearizable") << "\n";
    return linearizable ? 0 : 1;
  }

  if (*list_cmd) {
    std::cout << "name | family | expected | description\n";
    for (const SutInfo& info : SutRegistry::builtin().all()) {
      std::cout << info.name << " | " << family_name(info.family) << " | "
                << (info.expected_atomic ? "atomic" : "non-atomic") << " | "
                << info.description << "\n";
    }
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
