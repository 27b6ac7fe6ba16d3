#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aassim/access.hpp"
#include "aassim/rates.hpp"
#include "aassim/source.hpp"

namespace aassim {

/// Raised on malformed scenario documents; the message carries the offending
/// field path or the parser position.
class ScenarioParseError : public std::runtime_error {
 public:
  explicit ScenarioParseError(const std::string& message)
      : std::runtime_error("ScenarioParseError: " + message) {}
};

/// Explicit table source: probabilities are decimal strings so scenario
/// files do not depend on float-literal round-tripping.
struct PmfSpec {
  std::uint32_t alphabet_y = 0;
  std::vector<std::uint32_t> alphabets_x;
  std::vector<std::string> probabilities;
};

struct PlanOverride {
  std::vector<int> k;
  std::vector<int> sigma;
};

/// Everything a run needs, parsed from one JSON document.
struct Scenario {
  int participant_count = 0;

  // Source: exactly one of the two.
  std::optional<std::uint32_t> keys_alphabet;
  std::optional<PmfSpec> pmf;

  // Timeline: exactly one of the two.
  std::optional<ThresholdParams> threshold;
  std::optional<std::vector<StepEvents>> events;

  std::vector<int> block_lengths;  // "n"
  double epsilon = 0.0;
  MarginConfig margins;

  std::uint64_t binning_seed = 1;
  std::uint64_t sampling_seed = 1;
  std::uint64_t trials = 1000;
  double budget = 1e8;
  bool reveal_secrets = false;

  // Optional restriction of the audit to specific unauthorized groups.
  std::optional<std::vector<std::uint32_t>> audit_witnesses;
  std::optional<PlanOverride> plan_override;
};

Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical JSON echo; a normalized document reparses to the same value.
std::string normalized_scenario(const Scenario& scenario);

JointSource build_source(const Scenario& scenario);
AASTimeline build_timeline(const Scenario& scenario);

/// plan_timeline plus the scenario's optional per-step overrides.
RatePlan build_plan(const Scenario& scenario, const JointSource& src,
                    const AASTimeline& timeline, const BinningFamily& family);

}  // namespace aassim
