#include "aassim/protocol.hpp"

#include <stdexcept>
#include <string>

namespace aassim {

StepOutput encode_step(DealerState& state, const PlanStep& plan_step) {
  const BinningFamily& family = *state.family;
  if (plan_step.k < state.k_prev)
    throw std::invalid_argument("PlanRegression: plan commits " +
                                std::to_string(plan_step.k) +
                                " binnings after " +
                                std::to_string(state.k_prev));
  if (plan_step.k > family.binning_count ||
      plan_step.sigma > family.binning_count)
    throw std::invalid_argument("plan exceeds the binning family");

  StepOutput out;
  out.t = plan_step.t;
  out.k = plan_step.k;
  out.sigma = plan_step.sigma;
  for (int i = state.k_prev + 1; i <= plan_step.k; ++i)
    out.message.push_back(message_bin(family, i, state.y_seq));
  for (int j = 1; j <= plan_step.sigma; ++j)
    out.secret.push_back(secret_bin(family, j, state.y_seq));

  state.cumulative_message.insert(state.cumulative_message.end(),
                                  out.message.begin(), out.message.end());
  state.k_prev = plan_step.k;
  return out;
}

DecodeResult decode(const PairPmf& pair, std::span<const std::uint32_t> x_side,
                    std::span<const std::uint64_t> cumulative_message,
                    const BinningFamily& family,
                    const TypicalityParams& params,
                    std::uint64_t node_budget) {
  if (static_cast<int>(x_side.size()) != params.n ||
      params.n != family.n)
    throw std::invalid_argument("LengthMismatch: decoder inputs disagree on n");
  const int k = static_cast<int>(cumulative_message.size());
  if (k > family.binning_count)
    throw std::invalid_argument("cumulative message longer than the family");

  const CountBands bands = count_bands(pair.p, params);

  DecodeResult result;
  int matches = 0;
  detail::walk_conditionally_typical(
      pair, x_side, bands, node_budget,
      [&](std::span<const std::uint32_t> y_hat) {
        for (int i = 1; i <= k; ++i) {
          if (message_bin(family, i, y_hat) !=
              cumulative_message[static_cast<std::size_t>(i - 1)])
            return true;  // keep searching
        }
        if (++matches == 1) {
          result.dealer_estimate.assign(y_hat.begin(), y_hat.end());
          return true;
        }
        return false;  // two candidates settle the outcome
      });

  if (matches == 0) {
    result.status = DecodeStatus::kNoCandidate;
    result.dealer_estimate.clear();
  } else if (matches == 1) {
    result.status = DecodeStatus::kSuccess;
  } else {
    result.status = DecodeStatus::kAmbiguous;
    result.dealer_estimate.clear();
  }
  return result;
}

std::vector<std::uint64_t> recover_secret(std::span<const std::uint32_t> y_hat,
                                          int sigma,
                                          const BinningFamily& family) {
  if (sigma < 0 || sigma > family.binning_count)
    throw std::invalid_argument("sigma outside [0, binning_count]");
  std::vector<std::uint64_t> digits;
  digits.reserve(static_cast<std::size_t>(sigma));
  for (int j = 1; j <= sigma; ++j)
    digits.push_back(secret_bin(family, j, y_hat));
  return digits;
}

std::vector<std::uint64_t> Transcript::cumulative_message(int t) const {
  std::vector<std::uint64_t> all;
  for (const StepOutput& step : steps) {
    if (step.t > t) break;
    all.insert(all.end(), step.message.begin(), step.message.end());
  }
  return all;
}

TimelineRun run_timeline(const JointSource& src, const AASTimeline& timeline,
                         const RatePlan& plan, const BinningFamily& family,
                         std::uint64_t sample_seed,
                         std::uint64_t node_budget) {
  if (plan.steps.size() != timeline.steps.size())
    throw std::invalid_argument("plan and timeline disagree on step count");

  const SampleBlock block = sample_block(src, family.n, sample_seed);

  TimelineRun run;
  run.transcript.n = family.n;
  run.transcript.epsilon = family.epsilon;
  run.transcript.binning_seed = family.seed;
  run.transcript.sample_seed = sample_seed;

  DealerState dealer;
  dealer.y_seq = block.dealer;
  dealer.family = &family;

  const TypicalityParams params{family.epsilon, family.n};

  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const PlanStep& step = plan.steps[i];
    run.transcript.steps.push_back(encode_step(dealer, step));
    const StepOutput& emitted = run.transcript.steps.back();

    const AccessStructure& structure = timeline.steps[i];
    for (std::uint32_t group : structure.authorized.members) {
      const PairPmf pair = restrict_pair(src, group);
      const std::vector<std::uint32_t> x_side = block.project(src, group);

      GroupDecodeRecord record;
      record.t = step.t;
      record.group_mask = group;

      DecodeResult decoded = decode(pair, x_side, dealer.cumulative_message,
                                    family, params, node_budget);
      record.status = decoded.status;
      if (decoded.status == DecodeStatus::kSuccess) {
        record.sequence_correct = (decoded.dealer_estimate == block.dealer);
        record.secret_correct =
            (recover_secret(decoded.dealer_estimate, emitted.sigma, family) ==
             emitted.secret);
      }
      run.decodes.push_back(std::move(record));
    }
  }
  return run;
}

}  // namespace aassim
