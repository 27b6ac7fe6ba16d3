#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aassim/access.hpp"
#include "aassim/binning.hpp"
#include "aassim/source.hpp"

namespace aassim {

/// Slack configuration for the rate planner. `delta` defaults to
/// epsilon * log2|Y| when unset. The strict secrecy check multiplies the
/// slack by `secrecy_margin_multiplier`.
struct MarginConfig {
  std::optional<double> delta;
  double secrecy_margin_multiplier = 3.0;

  double delta_for(double epsilon, std::uint32_t dealer_card) const;
};

struct PlanStep {
  int t = 0;
  int k = 0;      // message binnings committed so far
  int sigma = 0;  // secret binnings used this step

  double message_rate = 0.0;  // (k_t - k_{t-1}) * epsilon
  double secret_rate = 0.0;   // sigma_t * epsilon

  double max_authorized_entropy = 0.0;   // max_A H(Y|X_A)
  double min_unauthorized_entropy = 0.0; // min_U H(Y|X_U); +inf if U empty
  std::uint32_t argmax_authorized = 0;   // lowest-mask witness
  std::uint32_t argmin_unauthorized = 0;

  bool zero_rate = false;                // sigma clamped to zero
  bool strict_secrecy_margin_ok = true;  // multiplier * delta variant holds
  std::vector<std::string> warnings;
};

struct RatePlan {
  double epsilon = 0.0;
  double delta = 0.0;
  int binning_count = 0;
  std::vector<PlanStep> steps;

  double cumulative_message_rate() const;
};

/// One planning step: commits enough message binnings for the hardest
/// authorized group, then spends whatever entropy margin the weakest
/// unauthorized group leaves on secret binnings. Counts are clamped to
/// [0, binning_count]; clamping of k is reported as an
/// InsufficientBinnings warning.
PlanStep plan_step(const JointSource& src, const AccessStructure& structure,
                   int k_prev, double epsilon, const MarginConfig& margins,
                   const BinningFamily& family);

RatePlan plan_timeline(const JointSource& src, const AASTimeline& timeline,
                       double epsilon, const MarginConfig& margins,
                       const BinningFamily& family);

/// min_U H(Y|X_U) - max_A H(Y|X_A); may be negative. Throws
/// std::invalid_argument ("EmptyFamily") when either family is empty.
double achievable_rate(const JointSource& src, const AccessStructure& s);

/// min over (U, A) of I(Y; X_A | X_U).
double converse_bound(const JointSource& src, const AccessStructure& s);

/// Secret capacity of a size-threshold structure on the uniform-keys model.
double threshold_capacity(double key_entropy_bits, int u, int v);

}  // namespace aassim
