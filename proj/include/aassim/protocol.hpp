#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aassim/access.hpp"
#include "aassim/binning.hpp"
#include "aassim/rates.hpp"
#include "aassim/source.hpp"
#include "aassim/typicality.hpp"

namespace aassim {

/// What the dealer emits at one step: the fresh message digits
/// (k_t - k_{t-1} of them, possibly none) and the secret digits
/// (sigma_t of them). Digits are 1-based bin indices.
struct StepOutput {
  int t = 0;
  int k = 0;
  int sigma = 0;
  std::vector<std::uint64_t> message;
  std::vector<std::uint64_t> secret;
};

/// Dealer state threaded through the timeline: the observation, the binning
/// family and the message digits committed so far.
struct DealerState {
  std::vector<std::uint32_t> y_seq;
  const BinningFamily* family = nullptr;
  int k_prev = 0;
  std::vector<std::uint64_t> cumulative_message;
};

/// Computes the fresh message and secret digits for one step and advances
/// the state. Throws std::invalid_argument ("PlanRegression") when the plan
/// asks for fewer committed binnings than already published.
StepOutput encode_step(DealerState& state, const PlanStep& plan_step);

enum class DecodeStatus { kSuccess, kNoCandidate, kAmbiguous };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kNoCandidate;
  std::vector<std::uint32_t> dealer_estimate;  // filled on success
};

/// Exhaustive joint-typicality decoding for one group: the unique sequence
/// jointly typical with x_side whose first k message bins equal the
/// cumulative message, if exactly one exists.
DecodeResult decode(const PairPmf& pair, std::span<const std::uint32_t> x_side,
                    std::span<const std::uint64_t> cumulative_message,
                    const BinningFamily& family,
                    const TypicalityParams& params,
                    std::uint64_t node_budget = 100'000'000);

/// The secret digits a decoder derives from its sequence estimate.
std::vector<std::uint64_t> recover_secret(std::span<const std::uint32_t> y_hat,
                                          int sigma,
                                          const BinningFamily& family);

struct GroupDecodeRecord {
  int t = 0;
  std::uint32_t group_mask = 0;
  DecodeStatus status = DecodeStatus::kNoCandidate;
  bool sequence_correct = false;  // dealer estimate equals Y^n
  bool secret_correct = false;    // recovered digits equal the dealer's
};

struct Transcript {
  int n = 0;
  double epsilon = 0.0;
  std::uint64_t binning_seed = 0;
  std::uint64_t sample_seed = 0;
  std::vector<StepOutput> steps;

  /// Message digits published up to and including step t (k_t digits).
  std::vector<std::uint64_t> cumulative_message(int t) const;
};

struct TimelineRun {
  Transcript transcript;
  std::vector<GroupDecodeRecord> decodes;  // every (t, A in authorized_t)
};

/// Samples one block, folds the dealer over the timeline, then decodes for
/// every authorized group at every step.
TimelineRun run_timeline(const JointSource& src, const AASTimeline& timeline,
                         const RatePlan& plan, const BinningFamily& family,
                         std::uint64_t sample_seed,
                         std::uint64_t node_budget = 100'000'000);

}  // namespace aassim
