#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "aassim/rates.hpp"
#include "aassim/rng.hpp"

using namespace aassim;

namespace {

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
    p = gen.next_unit() + 1e-3;
    total += p;
  }
  for (double& p : src.pmf) p /= total;
  return src;
}

// Entropy extrema evaluated by a summation routine independent of the
// library's conditional_entropy path.
double direct_conditional_entropy(const JointSource& src, std::uint32_t mask) {
  std::vector<int> picked;
  for (int l = 0; l < src.participant_count; ++l)
    if (mask & (1u << l)) picked.push_back(l);
  std::uint64_t x_card = 1;
  for (int l : picked) x_card *= src.participant_cards[static_cast<std::size_t>(l)];

  std::vector<double> joint(x_card * src.dealer_card, 0.0);
  std::vector<double> side(x_card, 0.0);
  std::vector<std::uint32_t> xs(static_cast<std::size_t>(src.participant_count));
  std::uint32_t y = 0;
  for (std::size_t cell = 0; cell < src.pmf.size(); ++cell) {
    src.decode_cell(cell, y, xs);
    std::uint64_t xsym = 0;
    for (int l : picked)
      xsym = xsym * src.participant_cards[static_cast<std::size_t>(l)] +
             xs[static_cast<std::size_t>(l)];
    joint[xsym * src.dealer_card + y] += src.pmf[cell];
    side[xsym] += src.pmf[cell];
  }
  double h = 0.0;
  for (std::uint64_t xsym = 0; xsym < x_card; ++xsym)
    for (std::uint32_t yy = 0; yy < src.dealer_card; ++yy) {
      const double p = joint[xsym * src.dealer_card + yy];
      if (p > 0.0) h -= p * std::log2(p / side[xsym]);
    }
  return h;
}

}  // namespace

TEST_CASE("plan_step reproduces the worked two-key example") {
  const JointSource src = make_keys_source(2, 2);
  const AccessStructure structure = threshold_structure(2, 2, 0);
  const BinningFamily family = make_family(1, 4, 0.1, src.dealer_card);
  MarginConfig margins;
  margins.delta = 0.2;

  const PlanStep step = plan_step(src, structure, 0, 0.1, margins, family);
  CHECK(step.k == 2);       // ceil((0 + 0.2) / 0.1)
  CHECK(step.sigma == 16);  // floor((2 - 0.2 - 0.2) / 0.1)
  CHECK(step.secret_rate == doctest::Approx(1.6));
  CHECK(!step.zero_rate);
  // The same margin is the default for this source: 0.1 * log2(4) = 0.2.
  CHECK(MarginConfig{}.delta_for(0.1, src.dealer_card) ==
        doctest::Approx(0.2));
}

TEST_CASE("a constant dealer yields a zero-rate step") {
  JointSource src;
  src.participant_count = 1;
  src.dealer_card = 2;
  src.participant_cards = {2};
  src.pmf = {0.5, 0.5, 0.0, 0.0};  // Y fixed at 0, X uniform, independent

  AccessStructure structure;
  structure.participant_count = 1;
  structure.authorized = SetFamily::from_unsorted({1});
  structure.unauthorized = SetFamily::from_unsorted({0});

  const BinningFamily family = make_family(1, 4, 0.1, src.dealer_card);
  MarginConfig margins;
  margins.delta = 0.2;
  const PlanStep step = plan_step(src, structure, 0, 0.1, margins, family);
  CHECK(step.k == 2);  // ceil(delta / epsilon)
  CHECK(step.sigma == 0);
  CHECK(step.zero_rate);
}

TEST_CASE("the walkthrough's first step has zero secret rate") {
  const JointSource src = make_keys_source(4, 2);
  std::vector<StepEvents> events(1);
  events[0].newly_authorized = {mask_from_members({1, 2, 4}, 4)};
  const AASTimeline timeline = aas_from_events(4, events);
  const AccessStructure& structure = timeline.steps[0];

  const BinningFamily family = make_family(1, 4, 0.25, src.dealer_card);
  const PlanStep step =
      plan_step(src, structure, 0, 0.25, MarginConfig{}, family);
  CHECK(step.max_authorized_entropy == doctest::Approx(1.0));
  CHECK(step.min_unauthorized_entropy == doctest::Approx(1.0));
  CHECK(step.sigma == 0);
  CHECK(step.zero_rate);
  CHECK(achievable_rate(src, structure) == doctest::Approx(0.0));
}

TEST_CASE("achievable rate on the four-key threshold model") {
  const JointSource src = make_keys_source(4, 2);
  const AccessStructure s = threshold_structure(4, 3, 1);
  CHECK(achievable_rate(src, s) == doctest::Approx(2.0).epsilon(1e-12));

  AccessStructure extremes;
  extremes.participant_count = 4;
  extremes.authorized =
      SetFamily::from_unsorted({mask_from_members({1, 2, 3, 4}, 4)});
  extremes.unauthorized = SetFamily::from_unsorted({0});
  CHECK(achievable_rate(src, extremes) ==
        doctest::Approx(conditional_entropy(src, 0) -
                        conditional_entropy(src, 0xF)));
}

TEST_CASE("achievable rate matches an independent extrema scan") {
  const JointSource src = random_source(3, {2, 2, 2}, 321);
  const AccessStructure s = threshold_structure(3, 2, 1);

  double max_auth = -std::numeric_limits<double>::infinity();
  for (std::uint32_t a : s.authorized.members)
    max_auth = std::max(max_auth, direct_conditional_entropy(src, a));
  double min_unauth = std::numeric_limits<double>::infinity();
  for (std::uint32_t u : s.unauthorized.members)
    min_unauth = std::min(min_unauth, direct_conditional_entropy(src, u));

  CHECK(achievable_rate(src, s) ==
        doctest::Approx(min_unauth - max_auth).epsilon(1e-10));
}

TEST_CASE("converse bound on the four-key threshold model") {
  const JointSource src = make_keys_source(4, 2);
  CHECK(converse_bound(src, threshold_structure(4, 3, 1)) ==
        doctest::Approx(2.0).epsilon(1e-12));

  AccessStructure extremes;
  extremes.participant_count = 4;
  extremes.authorized = SetFamily::from_unsorted({0xF});
  extremes.unauthorized = SetFamily::from_unsorted({0});
  CHECK(converse_bound(src, extremes) ==
        doctest::Approx(conditional_entropy(src, 0) -
                        conditional_entropy(src, 0xF)));
}

TEST_CASE("converse bound matches an exhaustive pair scan") {
  const JointSource src = random_source(3, {3, 2}, 777);
  const AccessStructure s = threshold_structure(2, 2, 1);

  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t u : s.unauthorized.members)
    for (std::uint32_t a : s.authorized.members)
      best = std::min(best, direct_conditional_entropy(src, u) -
                                direct_conditional_entropy(src, a | u));
  CHECK(converse_bound(src, s) == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("threshold capacity formula") {
  CHECK(threshold_capacity(1.0, 3, 1) == doctest::Approx(2.0));
  CHECK(threshold_capacity(std::log2(3.0), 2, 1) ==
        doctest::Approx(std::log2(3.0)));
  CHECK_THROWS_WITH_AS(threshold_capacity(1.0, 2, 2),
                       doctest::Contains("BadThresholds"),
                       std::invalid_argument);
}

TEST_CASE("ternary keys meet their capacity in both bounds") {
  const JointSource src = make_keys_source(2, 3);
  const AccessStructure s = threshold_structure(2, 2, 1);
  const double capacity = threshold_capacity(std::log2(3.0), 2, 1);
  CHECK(achievable_rate(src, s) == doctest::Approx(capacity).epsilon(1e-12));
  CHECK(converse_bound(src, s) == doctest::Approx(capacity).epsilon(1e-12));
}

TEST_CASE("empty families are rejected") {
  const JointSource src = make_keys_source(2, 2);
  AccessStructure s;
  s.participant_count = 2;
  s.unauthorized = SetFamily::from_unsorted({0});
  CHECK_THROWS_WITH_AS(achievable_rate(src, s),
                       doctest::Contains("EmptyFamily"), std::invalid_argument);
  s.authorized = SetFamily::from_unsorted({3});
  s.unauthorized = SetFamily{};
  CHECK_THROWS_WITH_AS(converse_bound(src, s),
                       doctest::Contains("EmptyFamily"), std::invalid_argument);
}

TEST_CASE("secret rate approaches the threshold capacity as epsilon shrinks") {
  const JointSource src = make_keys_source(4, 2);
  const AASTimeline timeline = taas_timeline(4, {{4, 3}, {2, 1}});

  double previous_gap = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 0.05, 0.01}) {
    const BinningFamily family = make_family(1, 4, eps, src.dealer_card);
    const RatePlan plan =
        plan_timeline(src, timeline, eps, MarginConfig{}, family);
    const double delta = MarginConfig{}.delta_for(eps, src.dealer_card);
    for (const PlanStep& step : plan.steps) {
      CHECK(step.secret_rate <= 2.0 + 1e-9);
      CHECK(step.secret_rate >= 2.0 - 2.0 * delta - 2.0 * eps);
    }
    const double gap = 2.0 - plan.steps[1].secret_rate;
    CHECK(gap <= previous_gap + 1e-12);
    previous_gap = gap;
  }
}

TEST_CASE("single-step timelines plan like plan_step") {
  const JointSource src = make_keys_source(2, 2);
  const AASTimeline timeline = taas_timeline(2, {{2}, {0}});
  const BinningFamily family = make_family(1, 4, 0.1, src.dealer_card);
  const RatePlan plan =
      plan_timeline(src, timeline, 0.1, MarginConfig{}, family);
  const PlanStep lone =
      plan_step(src, timeline.steps[0], 0, 0.1, MarginConfig{}, family);
  REQUIRE(plan.steps.size() == 1);
  CHECK(plan.steps[0].k == lone.k);
  CHECK(plan.steps[0].sigma == lone.sigma);
  CHECK(plan.steps[0].message_rate ==
        doctest::Approx(static_cast<double>(lone.k) * 0.1));
}

TEST_CASE("plan invariants over random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const JointSource src = random_source(3, {2, 2}, seed * 13);
    const AASTimeline timeline = taas_timeline(2, {{2, 1}, {1, 0}});
    const double eps = 0.2;
    const BinningFamily family = make_family(1, 4, eps, src.dealer_card);
    const MarginConfig margins;
    const RatePlan plan = plan_timeline(src, timeline, eps, margins, family);
    const double delta = margins.delta_for(eps, src.dealer_card);

    int k_prev = 0;
    for (const PlanStep& step : plan.steps) {
      CHECK(step.k >= k_prev);
      CHECK(step.k <= family.binning_count);
      CHECK(step.sigma >= 0);
      CHECK(step.sigma <= family.binning_count);
      if (step.sigma > 0) {
        // The floor choice keeps the secrecy budget, up to exact equality.
        CHECK(eps * (step.sigma + step.k) <=
              step.min_unauthorized_entropy - delta + 1e-9);
        CHECK(std::abs(step.sigma * eps - (step.min_unauthorized_entropy -
                                           step.k * eps - delta)) <
              eps + 1e-9);
      }
      k_prev = step.k;
    }

    CHECK(achievable_rate(src, timeline.steps[0]) <=
          converse_bound(src, timeline.steps[0]) + 1e-9);
  }
}

TEST_CASE("cumulative message spending stays near its target") {
  const JointSource src = make_keys_source(4, 2);
  const AASTimeline timeline = taas_timeline(4, {{4, 3}, {2, 1}});
  const double eps = 0.1;
  const BinningFamily family = make_family(1, 4, eps, src.dealer_card);
  const MarginConfig margins;
  const RatePlan plan = plan_timeline(src, timeline, eps, margins, family);
  const double delta = margins.delta_for(eps, src.dealer_card);

  double cumulative = 0.0;
  for (const PlanStep& step : plan.steps) {
    cumulative += step.message_rate;
    CHECK(cumulative <= step.max_authorized_entropy + delta + eps + 1e-9);
  }
  CHECK(plan.cumulative_message_rate() == doctest::Approx(cumulative));
}

TEST_CASE("planner clamps and flags when the family runs short") {
  // A nearly uniform dealer observed by a single weakly informative
  // participant: the required message spending exceeds the family size and
  // is clamped with a warning.
  const JointSource src = random_source(3, {2}, 5);
  const AccessStructure s = threshold_structure(1, 1, 0);
  const BinningFamily family = make_family(1, 4, 0.25, src.dealer_card);
  const PlanStep step = plan_step(src, s, 0, 0.25, MarginConfig{}, family);
  CHECK(step.k == family.binning_count);
  REQUIRE(!step.warnings.empty());
  CHECK(step.warnings[0].find("InsufficientBinnings") != std::string::npos);
}
