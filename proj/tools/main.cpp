#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aassim/eval.hpp"
#include "aassim/report.hpp"
#include "aassim/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Exit codes: 0 success, 1 validation failure, 2 budget/resource failure,
// 3 parse failure.
enum ExitCode { kOk = 0, kValidation = 1, kBudget = 2, kParse = 3 };

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = "out";
  std::optional<double> budget;
  int jobs = 1;
  bool dump_normalized = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario_path, "scenario file (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--budget", args.budget,
                  "work budget in accumulations / walk nodes");
  cmd->add_option("--jobs", args.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--dump-normalized", args.dump_normalized,
                "write the normalized scenario echo");
}

void write_file(const fs::path& path, const std::string& content) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct Loaded {
  aassim::Scenario scenario;
  aassim::JointSource source;
  aassim::AASTimeline timeline;
};

Loaded load(const CommonArgs& args) {
  Loaded loaded{aassim::load_scenario(args.scenario_path), {}, {}};
  if (args.dump_normalized)
    write_file(fs::path(args.out_dir) / "scenario.normalized.json",
               aassim::normalized_scenario(loaded.scenario));
  loaded.source = aassim::build_source(loaded.scenario);
  loaded.timeline = aassim::build_timeline(loaded.scenario);
  return loaded;
}

double effective_budget(const CommonArgs& args, const aassim::Scenario& sc) {
  return args.budget.value_or(sc.budget);
}

int cmd_validate(const CommonArgs& args) {
  // build_timeline throws on invalid timelines; reconstruct the report here
  // so the diagnostics reach the user with step cardinalities.
  Loaded loaded = load(args);

  const aassim::ValidationReport source_report =
      aassim::validate_source(loaded.source);
  const aassim::ValidationReport timeline_report =
      aassim::validate_aas(loaded.timeline);

  json doc;
  doc["scenario"] = args.scenario_path;
  doc["source_ok"] = source_report.ok();
  doc["timeline_ok"] = timeline_report.ok();
  json steps = json::array();
  for (std::size_t t = 0; t < loaded.timeline.steps.size(); ++t) {
    const aassim::AccessStructure& s = loaded.timeline.steps[t];
    steps.push_back({{"t", t + 1},
                     {"authorized_sets", s.authorized.size()},
                     {"unauthorized_sets", s.unauthorized.size()}});
  }
  doc["steps"] = std::move(steps);
  json notices = json::array();
  for (const auto& n : timeline_report.notices)
    notices.push_back(n.code + ": " + n.message);
  doc["notices"] = std::move(notices);

  std::cout << doc.dump(2) << '\n';
  write_file(fs::path(args.out_dir) / "validate.json", doc.dump(2) + "\n");
  return source_report.ok() && timeline_report.ok() ? kOk : kValidation;
}

int cmd_plan(const CommonArgs& args) {
  Loaded loaded = load(args);
  const aassim::Scenario& sc = loaded.scenario;

  const aassim::BinningFamily family = aassim::make_family(
      sc.binning_seed, sc.block_lengths.front(), sc.epsilon,
      loaded.source.dealer_card);
  const aassim::RatePlan plan =
      aassim::build_plan(sc, loaded.source, loaded.timeline, family);

  json doc = aassim::plan_to_json(plan);

  // Capacity analytics per step.
  json analytics = json::array();
  for (std::size_t i = 0; i < loaded.timeline.steps.size(); ++i) {
    const aassim::AccessStructure& s = loaded.timeline.steps[i];
    json row;
    row["t"] = i + 1;
    try {
      row["achievable_rate"] = aassim::achievable_rate(loaded.source, s);
      row["converse_bound"] = aassim::converse_bound(loaded.source, s);
    } catch (const std::invalid_argument& e) {
      row["achievable_rate"] = nullptr;
      row["converse_bound"] = nullptr;
      row["note"] = e.what();
    }
    const auto thresholds = aassim::as_threshold(s);
    if (thresholds.has_value() && loaded.source.keys_model) {
      row["capacity_if_threshold"] = aassim::threshold_capacity(
          std::log2(static_cast<double>(loaded.source.key_alphabet)),
          thresholds->first, thresholds->second);
    } else {
      row["capacity_if_threshold"] = nullptr;
    }
    analytics.push_back(std::move(row));
  }
  doc["analytics"] = std::move(analytics);

  std::cout << doc.dump(2) << '\n';
  write_file(fs::path(args.out_dir) / "plan.json", doc.dump(2) + "\n");
  return kOk;
}

int cmd_simulate(const CommonArgs& args) {
  Loaded loaded = load(args);
  const aassim::Scenario& sc = loaded.scenario;
  const double budget = effective_budget(args, sc);

  json summary = json::array();
  std::string csv = aassim::reliability_csv_header();
  for (int n : sc.block_lengths) {
    const aassim::BinningFamily family =
        aassim::make_family(sc.binning_seed, n, sc.epsilon,
                            loaded.source.dealer_card);
    const aassim::RatePlan plan =
        aassim::build_plan(sc, loaded.source, loaded.timeline, family);

    const std::vector<std::uint64_t> seeds =
        aassim::trial_seeds(sc.sampling_seed, sc.trials);

    aassim::ReliabilityOptions options;
    options.jobs = args.jobs;
    options.node_budget = static_cast<std::uint64_t>(budget);
    const aassim::ReliabilityReport report = aassim::run_reliability_trials(
        loaded.source, loaded.timeline, plan, family, seeds, options);

    // One full transcript artifact per block length, first trial seed.
    const aassim::TimelineRun run =
        aassim::run_timeline(loaded.source, loaded.timeline, plan, family,
                             seeds.front(), options.node_budget);
    write_file(fs::path(args.out_dir) /
                   ("transcript_n" + std::to_string(n) + ".json"),
               aassim::run_to_json(run, sc.reveal_secrets).dump(2) + "\n");
    write_file(fs::path(args.out_dir) /
                   ("reliability_n" + std::to_string(n) + ".json"),
               aassim::reliability_to_json(report).dump(2) + "\n");
    summary.push_back(aassim::reliability_to_json(report));
    csv += aassim::reliability_csv_rows(report);
  }
  write_file(fs::path(args.out_dir) / "reliability.csv", csv);

  std::cout << json(summary).dump(2) << '\n';
  return kOk;
}

int cmd_audit(const CommonArgs& args) {
  Loaded loaded = load(args);
  const aassim::Scenario& sc = loaded.scenario;
  const double budget = effective_budget(args, sc);

  json all = json::array();
  std::string csv = aassim::secrecy_csv_header();
  for (int n : sc.block_lengths) {
    const aassim::BinningFamily family =
        aassim::make_family(sc.binning_seed, n, sc.epsilon,
                            loaded.source.dealer_card);
    const aassim::RatePlan plan =
        aassim::build_plan(sc, loaded.source, loaded.timeline, family);

    std::vector<aassim::SecrecyCell> cells;
    for (std::size_t i = 0; i < loaded.timeline.steps.size(); ++i) {
      const aassim::AccessStructure& structure = loaded.timeline.steps[i];
      std::vector<std::uint32_t> witnesses;
      if (sc.audit_witnesses.has_value()) {
        witnesses = *sc.audit_witnesses;
      } else {
        witnesses = structure.unauthorized.members;
      }
      for (std::uint32_t u : witnesses) {
        aassim::SecrecyOptions options;
        options.accumulation_budget = budget;
        options.mc_trials = sc.trials;
        options.mc_seed = sc.sampling_seed;
        cells.push_back(aassim::secrecy_audit(loaded.source, family,
                                              plan.steps[i], u, options));
      }
    }
    const json doc = aassim::secrecy_cells_to_json(cells, n);
    write_file(fs::path(args.out_dir) /
                   ("secrecy_n" + std::to_string(n) + ".json"),
               doc.dump(2) + "\n");
    csv += aassim::secrecy_csv_rows(cells, n);
    all.push_back(doc);
  }
  write_file(fs::path(args.out_dir) / "secrecy.csv", csv);
  std::cout << all.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secret-sharing simulator for additive access structures"};
  app.require_subcommand(1);

  CommonArgs validate_args, plan_args, simulate_args, audit_args;
  CLI::App* validate = app.add_subcommand(
      "validate", "parse and validate a scenario");
  add_common(validate, validate_args);
  CLI::App* plan = app.add_subcommand(
      "plan", "rate plan and capacity analytics");
  add_common(plan, plan_args);
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run trials and write transcripts + reliability reports");
  add_common(simulate, simulate_args);
  CLI::App* audit = app.add_subcommand(
      "audit", "secrecy and uniformity metrics per unauthorized group");
  add_common(audit, audit_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(validate_args);
    if (plan->parsed()) return cmd_plan(plan_args);
    if (simulate->parsed()) return cmd_simulate(simulate_args);
    if (audit->parsed()) return cmd_audit(audit_args);
  } catch (const aassim::ScenarioParseError& e) {
    std::cerr << e.what() << '\n';
    return kParse;
  } catch (const aassim::BudgetExceeded& e) {
    std::cerr << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
