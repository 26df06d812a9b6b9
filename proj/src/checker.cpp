#include "atomcheck/checker.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "atomcheck/oracle.hpp"

namespace atomcheck {

namespace {

struct ResolvedConfig {
  const SutInfo* sut_info;
  SequentialSpec spec;
  std::vector<std::string> core;
};

ResolvedConfig resolve(const CheckConfig& cfg) {
  const SutInfo* info = SutRegistry::builtin().find(cfg.sut);
  if (!info) throw SpecError("unknown object under test: " + cfg.sut);
  SequentialSpec spec =
      SequentialSpec::with_overrides(info->family, cfg.method_overrides);
  spec.at(cfg.method);
  std::vector<std::string> core = cfg.core;
  if (core.empty()) {
    for (const std::string& name : spec.core_methods()) {
      if (name != cfg.method) core.push_back(name);
    }
  } else {
    for (const std::string& name : core) {
      if (name == cfg.method) {
        throw SpecError("method under test must not be in the core set");
      }
    }
  }
  return {info, std::move(spec), std::move(core)};
}

}  // namespace

CheckReport check(const CheckConfig& cfg) {
  if (cfg.chunk_size < 1) throw SpecError("chunk size must be at least 1");
  ResolvedConfig rc = resolve(cfg);

  CheckReport report;
  report.sut = cfg.sut;
  report.family = family_name(rc.sut_info->family);
  report.method = cfg.method;
  report.core = rc.core;
  report.bounds = cfg.bounds;
  report.seed = cfg.seed;
  report.chunk_size = cfg.chunk_size;

  StressBudget budget;
  if (cfg.trials_per_harness) {
    budget = StressBudget::for_trials(*cfg.trials_per_harness, cfg.workers);
  } else {
    budget = StressBudget::for_time(cfg.time_per_harness, cfg.workers);
  }
  budget.coop = cfg.coop;

  auto started = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    return cfg.global_timeout &&
           std::chrono::steady_clock::now() - started >= *cfg.global_timeout;
  };
  auto finish = [&](CheckVerdict::Kind kind) {
    report.verdict.kind = kind;
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return report;
  };

  ParamSchedule schedule(cfg.bounds);
  while (!schedule.exhausted()) {
    EnumParams params = schedule.next();
    std::vector<Harness> harnesses =
        construct_harnesses(rc.core, cfg.method, params, rc.spec, cfg.enum_options);
    report.harnesses_generated += harnesses.size();
    shuffle_harnesses(harnesses, cfg.seed);

    for (size_t chunk_start = 0; chunk_start < harnesses.size();
         chunk_start += cfg.chunk_size) {
      size_t chunk_end =
          std::min(harnesses.size(), chunk_start + cfg.chunk_size);
      // Complete the whole chunk, then stop if it contained a violation.
      size_t found_index = SIZE_MAX;
      for (size_t i = chunk_start; i < chunk_end; ++i) {
        if (out_of_time()) return finish(CheckVerdict::Kind::Timeout);
        auto [histogram, verdict] =
            stress(harnesses[i], rc.sut_info->adapter(), rc.spec, budget);
        if (verdict.kind == StressVerdict::Kind::Aborted) {
          throw SpecError("stress aborted: " + verdict.diagnostic);
        }
        ++report.harnesses_tested;
        report.records.push_back({params, format_harness(harnesses[i]),
                                  std::move(histogram)});
        if (found_index == SIZE_MAX &&
            verdict.kind == StressVerdict::Kind::Violation) {
          found_index = report.records.size() - 1;
        }
      }
      if (found_index != SIZE_MAX) {
        const HarnessRecord* found = &report.records[found_index];
        // Re-validate the witness against a freshly computed outcome set
        // before claiming a violation.
        Harness witness_harness = parse_harness(found->harness);
        AtomicOutcomeSet set = atomic_outcomes(witness_harness, rc.spec);
        for (const auto& row : found->histogram.rows) {
          if (!row.atomic) {
            if (set.contains(row.outcome)) {
              throw SpecError(
                  "internal error: witness outcome is atomic on re-validation");
            }
            report.verdict.harness = found->harness;
            report.verdict.outcome = row.outcome.to_string();
            report.verdict.frequency = row.count;
            report.verdict.trials = found->histogram.total;
            return finish(CheckVerdict::Kind::NonAtomic);
          }
        }
      }
    }
  }
  return finish(CheckVerdict::Kind::Exhausted);
}

namespace {

using nlohmann::json;

json params_to_json(const EnumParams& p) {
  return json{p.invocations, p.values, p.sequences};
}

EnumParams params_from_json(const json& j) {
  return EnumParams{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
}

const char* verdict_name(CheckVerdict::Kind k) {
  switch (k) {
    case CheckVerdict::Kind::NonAtomic: return "NON-ATOMIC";
    case CheckVerdict::Kind::Exhausted: return "EXHAUSTED";
    case CheckVerdict::Kind::Timeout: return "TIMEOUT";
  }
  return "?";
}

CheckVerdict::Kind verdict_from_name(const std::string& name) {
  if (name == "NON-ATOMIC") return CheckVerdict::Kind::NonAtomic;
  if (name == "EXHAUSTED") return CheckVerdict::Kind::Exhausted;
  if (name == "TIMEOUT") return CheckVerdict::Kind::Timeout;
  throw SpecError("unknown verdict in report: " + name);
}

}  // namespace

std::string write_report_json(const CheckReport& report) {
  json j;
  j["schema_version"] = 1;
  j["config"] = {
      {"sut", report.sut},         {"family", report.family},
      {"method", report.method},   {"core", report.core},
      {"bounds", params_to_json(report.bounds)},
      {"seed", report.seed},       {"chunk_size", report.chunk_size},
  };
  j["verdict"] = {
      {"kind", verdict_name(report.verdict.kind)},
      {"harness", report.verdict.harness},
      {"outcome", report.verdict.outcome},
      {"frequency", report.verdict.frequency},
      {"trials", report.verdict.trials},
  };
  j["harnesses_generated"] = report.harnesses_generated;
  j["harnesses_tested"] = report.harnesses_tested;
  j["total_seconds"] = report.total_seconds;
  j["records"] = json::array();
  for (const HarnessRecord& rec : report.records) {
    json rows = json::array();
    for (const auto& row : rec.histogram.rows) {
      rows.push_back({{"outcome", row.outcome.to_string()},
                      {"atomic", row.atomic},
                      {"count", row.count}});
    }
    j["records"].push_back(
        {{"params", params_to_json(rec.params)},
         {"harness", rec.harness},
         {"trials", rec.histogram.total},
         {"elapsed_ns", rec.histogram.elapsed.count()},
         {"workers", rec.histogram.workers_used},
         {"rows", std::move(rows)}});
  }
  return j.dump(2);
}

CheckReport read_report_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1) {
    throw SpecError("unsupported report schema version");
  }
  CheckReport report;
  const json& cfg = j.at("config");
  report.sut = cfg.at("sut").get<std::string>();
  report.family = cfg.at("family").get<std::string>();
  report.method = cfg.at("method").get<std::string>();
  report.core = cfg.at("core").get<std::vector<std::string>>();
  report.bounds = params_from_json(cfg.at("bounds"));
  report.seed = cfg.at("seed").get<uint64_t>();
  report.chunk_size = cfg.at("chunk_size").get<int>();
  const json& v = j.at("verdict");
  report.verdict.kind = verdict_from_name(v.at("kind").get<std::string>());
  report.verdict.harness = v.at("harness").get<std::string>();
  report.verdict.outcome = v.at("outcome").get<std::string>();
  report.verdict.frequency = v.at("frequency").get<uint64_t>();
  report.verdict.trials = v.at("trials").get<uint64_t>();
  report.harnesses_generated = j.at("harnesses_generated").get<uint64_t>();
  report.harnesses_tested = j.at("harnesses_tested").get<uint64_t>();
  report.total_seconds = j.at("total_seconds").get<double>();
  for (const json& r : j.at("records")) {
    HarnessRecord rec;
    rec.params = params_from_json(r.at("params"));
    rec.harness = r.at("harness").get<std::string>();
    rec.histogram.total = r.at("trials").get<uint64_t>();
    rec.histogram.elapsed = std::chrono::nanoseconds(r.at("elapsed_ns").get<int64_t>());
    rec.histogram.workers_used = r.at("workers").get<int>();
    for (const json& row : r.at("rows")) {
      OutcomeHistogram::Row out;
      out.outcome = parse_outcome(row.at("outcome").get<std::string>());
      out.atomic = row.at("atomic").get<bool>();
      out.count = row.at("count").get<uint64_t>();
      rec.histogram.rows.push_back(std::move(out));
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

std::string write_report_table(const CheckReport& report) {
  std::ostringstream out;
  out << report.family << ": " << report.method << " against " << report.sut
      << " (core:";
  for (const std::string& c : report.core) out << ' ' << c;
  out << ", seed " << report.seed << ")\n";
  out << "params | tested/total | harness | outcome | frequency | total | time\n";
  std::ostringstream time;
  time << std::fixed << std::setprecision(1) << report.total_seconds << "s";
  if (report.verdict.kind == CheckVerdict::Kind::NonAtomic) {
    out << report.records.back().params.to_string() << " | "
        << report.harnesses_tested << "/" << report.harnesses_generated << " | "
        << report.verdict.harness << " | " << report.verdict.outcome << " | "
        << report.verdict.frequency << " | " << report.verdict.trials << " | "
        << time.str() << "\n";
    out << "verdict: NON-ATOMIC\n";
  } else {
    out << report.bounds.to_string() << " | " << report.harnesses_tested << "/"
        << report.harnesses_generated << " | - | - | - | - | " << time.str()
        << "\n";
    out << "verdict: " << verdict_name(report.verdict.kind) << "\n";
  }
  return out.str();
}

}  // namespace atomcheck
