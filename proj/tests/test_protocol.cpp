#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "aassim/protocol.hpp"
#include "aassim/rng.hpp"

using namespace aassim;

namespace {

std::vector<std::uint32_t> nth_sequence(std::uint64_t index, int n,
                                        std::uint32_t card) {
  std::vector<std::uint32_t> seq(static_cast<std::size_t>(n));
  for (int pos = n - 1; pos >= 0; --pos) {
    seq[static_cast<std::size_t>(pos)] = static_cast<std::uint32_t>(index % card);
    index /= card;
  }
  return seq;
}

PlanStep literal_step(int t, int k, int sigma) {
  PlanStep step;
  step.t = t;
  step.k = k;
  step.sigma = sigma;
  return step;
}

JointSource random_source(std::uint32_t y_card,
                          std::vector<std::uint32_t> x_cards,
                          std::uint64_t seed) {
  JointSource src;
  src.participant_count = static_cast<int>(x_cards.size());
  src.dealer_card = y_card;
  src.participant_cards = std::move(x_cards);
  src.pmf.resize(src.cell_count());
  rng::SplitMix64 gen(seed);
  double total = 0.0;
  for (double& p : src.pmf) {
    p = gen.next_unit() + 1e-2;
    total += p;
  }
  for (double& p : src.pmf) p /= total;
  return src;
}

}  // namespace

TEST_CASE("encoding emits empty strings when nothing advances") {
  const BinningFamily family = make_family(3, 6, 0.5, 4);
  DealerState dealer;
  dealer.y_seq = nth_sequence(100, 6, 4);
  dealer.family = &family;

  StepOutput first = encode_step(dealer, literal_step(1, 2, 0));
  CHECK(first.message.size() == 2);
  CHECK(first.secret.empty());

  StepOutput second = encode_step(dealer, literal_step(2, 2, 3));
  CHECK(second.message.empty());  // k stalled
  CHECK(second.secret.size() == 3);

  CHECK_THROWS_WITH_AS(encode_step(dealer, literal_step(3, 1, 0)),
                       doctest::Contains("PlanRegression"),
                       std::invalid_argument);
}

TEST_CASE("encoding is reproducible digit for digit") {
  const BinningFamily family = make_family(11, 8, 0.25, 2);
  const auto y = nth_sequence(171, 8, 2);

  DealerState a;
  a.y_seq = y;
  a.family = &family;
  DealerState b = a;

  const StepOutput out_a = encode_step(a, literal_step(1, 2, 3));
  const StepOutput out_b = encode_step(b, literal_step(1, 2, 3));
  CHECK(out_a.message == out_b.message);
  CHECK(out_a.secret == out_b.secret);
  CHECK(out_a.message.size() == 2);
  CHECK(out_a.secret.size() == 3);
  for (int i = 1; i <= 2; ++i)
    CHECK(out_a.message[static_cast<std::size_t>(i - 1)] ==
          message_bin(family, i, y));
}

TEST_CASE("full-set decoding returns the dealer block exactly") {
  const JointSource src = make_keys_source(2, 2);
  const std::uint32_t everyone = mask_from_members({1, 2}, 2);
  const PairPmf pair = restrict_pair(src, everyone);
  const int n = 8;
  const BinningFamily family = make_family(21, n, 0.25, src.dealer_card);
  const TypicalityParams params{0.25, n};

  const std::vector<std::uint32_t> y{0, 1, 2, 3, 3, 2, 1, 0};  // balanced
  std::vector<std::uint64_t> message;
  for (int i = 1; i <= 2; ++i) message.push_back(message_bin(family, i, y));

  const DecodeResult result = decode(pair, y, message, family, params);
  REQUIRE(result.status == DecodeStatus::kSuccess);
  CHECK(result.dealer_estimate == y);
}

TEST_CASE("an atypical observation decodes to an error, never a wrong block") {
  const JointSource src = make_keys_source(2, 2);
  const std::uint32_t everyone = mask_from_members({1, 2}, 2);
  const PairPmf pair = restrict_pair(src, everyone);
  const int n = 8;
  const BinningFamily family = make_family(21, n, 0.25, src.dealer_card);
  const TypicalityParams params{0.25, n};

  const std::vector<std::uint32_t> y(n, 2);  // constant block, atypical
  std::vector<std::uint64_t> message;
  for (int i = 1; i <= 2; ++i) message.push_back(message_bin(family, i, y));

  const DecodeResult result = decode(pair, y, message, family, params);
  CHECK(result.status == DecodeStatus::kNoCandidate);
}

TEST_CASE("decode classification agrees with an exhaustive scan") {
  const JointSource src = random_source(4, {2}, 6060);
  const std::uint32_t watcher = mask_from_members({1}, 1);
  const PairPmf pair = restrict_pair(src, watcher);
  const int n = 4;
  const TypicalityParams params{0.9, n};

  for (std::uint64_t binning_seed = 1; binning_seed <= 4; ++binning_seed) {
    const BinningFamily family =
        make_family(binning_seed, n, 0.5, src.dealer_card);
    for (std::uint64_t sample_seed = 0; sample_seed < 25; ++sample_seed) {
      const SampleBlock block = sample_block(src, n, sample_seed);
      const auto x_side = block.project(src, watcher);
      const int k = 2;
      std::vector<std::uint64_t> message;
      for (int i = 1; i <= k; ++i)
        message.push_back(message_bin(family, i, block.dealer));

      // Brute force over the whole dealer space with the same predicates.
      std::vector<std::vector<std::uint32_t>> matches;
      for (std::uint64_t yi = 0; yi < 256; ++yi) {
        const auto cand = nth_sequence(yi, n, 4);
        if (!is_jointly_typical(x_side, cand, pair, params)) continue;
        bool bins_ok = true;
        for (int i = 1; i <= k && bins_ok; ++i)
          bins_ok = message_bin(family, i, cand) ==
                    message[static_cast<std::size_t>(i - 1)];
        if (bins_ok) matches.push_back(cand);
      }

      const DecodeResult result = decode(pair, x_side, message, family, params);
      if (matches.empty()) {
        CHECK(result.status == DecodeStatus::kNoCandidate);
      } else if (matches.size() == 1) {
        REQUIRE(result.status == DecodeStatus::kSuccess);
        CHECK(result.dealer_estimate == matches[0]);
      } else {
        CHECK(result.status == DecodeStatus::kAmbiguous);
      }
    }
  }
}

TEST_CASE("recovered secrets match exactly on the dealer's block") {
  const BinningFamily family = make_family(15, 10, 0.3, 3);
  const auto y = nth_sequence(4242, 10, 3);
  DealerState dealer;
  dealer.y_seq = y;
  dealer.family = &family;
  const StepOutput out = encode_step(dealer, literal_step(1, 1, 4));

  CHECK(recover_secret(y, 4, family) == out.secret);
  CHECK(recover_secret(y, 0, family).empty());
}

TEST_CASE("near-miss blocks collide only at the chance rate") {
  // One flipped symbol: the recovered digits should agree with the dealer's
  // at roughly (1/secret_bins)^sigma over independent binning seeds.
  const int n = 6;
  const int sigma = 2;
  int collisions = 0;
  const int seeds = 2000;
  std::uint64_t s_bins = 0;
  for (int seed = 0; seed < seeds; ++seed) {
    const BinningFamily family =
        make_family(static_cast<std::uint64_t>(seed), n, 0.5, 2);
    s_bins = family.secret_bins;  // 8
    const auto y = nth_sequence(21, n, 2);
    auto y_prime = y;
    y_prime[3] ^= 1u;
    if (recover_secret(y, sigma, family) ==
        recover_secret(y_prime, sigma, family))
      ++collisions;
  }
  const double p = 1.0 / std::pow(static_cast<double>(s_bins), sigma);
  const double band = 3.0 * std::sqrt(seeds * p * (1.0 - p));
  CHECK(std::abs(collisions - seeds * p) <= band);
}

TEST_CASE("single-step run succeeds exactly when the block is typical") {
  const JointSource src = make_keys_source(2, 2);
  const AASTimeline timeline = taas_timeline(2, {{2}, {0}});
  const double eps = 0.25;
  const int n = 8;
  const BinningFamily family = make_family(5, n, eps, src.dealer_card);
  const RatePlan plan = plan_timeline(src, timeline, eps, MarginConfig{}, family);
  const PairPmf pair = restrict_pair(src, mask_from_members({1, 2}, 2));
  const TypicalityParams params{eps, n};

  int successes = 0, typical = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const TimelineRun run = run_timeline(src, timeline, plan, family, seed);
    REQUIRE(run.decodes.size() == 1);
    const SampleBlock block = sample_block(src, n, seed);
    const bool is_typ = is_jointly_typical(
        block.project(src, mask_from_members({1, 2}, 2)), block.dealer, pair,
        params);
    if (is_typ) ++typical;
    if (run.decodes[0].secret_correct) ++successes;
    CHECK(run.decodes[0].secret_correct == is_typ);
  }
  CHECK(successes == typical);
  CHECK(typical > 0);
}

TEST_CASE("later steps decode from the concatenated message") {
  const JointSource src = make_keys_source(2, 2);
  const AASTimeline timeline = taas_timeline(2, {{2, 1}, {0, 0}});
  const double eps = 0.25;
  const int n = 8;
  const BinningFamily family = make_family(5, n, eps, src.dealer_card);
  const RatePlan plan = plan_timeline(src, timeline, eps, MarginConfig{}, family);

  const TimelineRun run = run_timeline(src, timeline, plan, family, 3);

  // Transcript prefix property.
  const auto m1 = run.transcript.cumulative_message(1);
  const auto m2 = run.transcript.cumulative_message(2);
  CHECK(m1.size() == static_cast<std::size_t>(plan.steps[0].k));
  CHECK(m2.size() == static_cast<std::size_t>(plan.steps[1].k));
  CHECK(std::equal(m1.begin(), m1.end(), m2.begin()));

  // The full group appears at t=1 and again at t=2 (families only grow).
  const std::uint32_t everyone = mask_from_members({1, 2}, 2);
  bool everyone_at_2 = false;
  for (const GroupDecodeRecord& r : run.decodes)
    if (r.t == 2 && r.group_mask == everyone) everyone_at_2 = true;
  CHECK(everyone_at_2);
}

TEST_CASE("secret nesting holds when sigma grows") {
  const BinningFamily family = make_family(77, 8, 0.25, 4);
  DealerState dealer;
  dealer.y_seq = nth_sequence(777, 8, 4);
  dealer.family = &family;

  const StepOutput s1 = encode_step(dealer, literal_step(1, 2, 2));
  const StepOutput s2 = encode_step(dealer, literal_step(2, 3, 4));
  REQUIRE(s1.secret.size() == 2);
  REQUIRE(s2.secret.size() == 4);
  CHECK(std::equal(s1.secret.begin(), s1.secret.end(), s2.secret.begin()));
}

TEST_CASE("timeline runs are reproducible end to end") {
  const JointSource src = random_source(3, {2, 2}, 2);
  const AASTimeline timeline = taas_timeline(2, {{2, 1}, {1, 0}});
  const double eps = 0.4;
  const BinningFamily family = make_family(9, 5, eps, src.dealer_card);
  const RatePlan plan = plan_timeline(src, timeline, eps, MarginConfig{}, family);

  const TimelineRun a = run_timeline(src, timeline, plan, family, 1001);
  const TimelineRun b = run_timeline(src, timeline, plan, family, 1001);
  REQUIRE(a.transcript.steps.size() == b.transcript.steps.size());
  for (std::size_t i = 0; i < a.transcript.steps.size(); ++i) {
    CHECK(a.transcript.steps[i].message == b.transcript.steps[i].message);
    CHECK(a.transcript.steps[i].secret == b.transcript.steps[i].secret);
  }
  REQUIRE(a.decodes.size() == b.decodes.size());
  for (std::size_t i = 0; i < a.decodes.size(); ++i) {
    CHECK(a.decodes[i].status == b.decodes[i].status);
    CHECK(a.decodes[i].secret_correct == b.decodes[i].secret_correct);
  }
}
