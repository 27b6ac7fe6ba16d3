#include "aassim/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "aassim/numeric.hpp"

namespace aassim {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Memoized H(Y|X_S) over subset masks; family scans revisit subsets often.
class EntropyCache {
 public:
  explicit EntropyCache(const JointSource& src) : src_(src) {}

  double operator()(std::uint32_t mask) {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    const double h = conditional_entropy(src_, mask);
    cache_.emplace(mask, h);
    return h;
  }

 private:
  const JointSource& src_;
  std::unordered_map<std::uint32_t, double> cache_;
};

}  // namespace

double MarginConfig::delta_for(double epsilon,
                               std::uint32_t dealer_card) const {
  if (delta.has_value()) {
    if (*delta < 0.0) throw std::invalid_argument("delta must be >= 0");
    return *delta;
  }
  return epsilon * std::log2(static_cast<double>(dealer_card));
}

double RatePlan::cumulative_message_rate() const {
  double total = 0.0;
  for (const PlanStep& s : steps) total += s.message_rate;
  return total;
}

PlanStep plan_step(const JointSource& src, const AccessStructure& structure,
                   int k_prev, double epsilon, const MarginConfig& margins,
                   const BinningFamily& family) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
  if (k_prev < 0 || k_prev > family.binning_count)
    throw std::invalid_argument("k_prev outside [0, binning_count]");
  if (structure.authorized.empty())
    throw std::invalid_argument("EmptyFamily: no authorized group");

  EntropyCache entropy(src);
  PlanStep step;

  step.max_authorized_entropy = -kInfinity;
  for (std::uint32_t a : structure.authorized.members) {
    const double h = entropy(a);
    if (h > step.max_authorized_entropy) {
      step.max_authorized_entropy = h;
      step.argmax_authorized = a;
    }
  }

  step.min_unauthorized_entropy = kInfinity;
  for (std::uint32_t u : structure.unauthorized.members) {
    const double h = entropy(u);
    if (h < step.min_unauthorized_entropy) {
      step.min_unauthorized_entropy = h;
      step.argmin_unauthorized = u;
    }
  }

  const double delta = margins.delta_for(epsilon, src.dealer_card);
  const int b = family.binning_count;

  const std::int64_t required =
      guarded_ceil((step.max_authorized_entropy + delta) / epsilon);
  std::int64_t k = std::max<std::int64_t>(k_prev, std::max<std::int64_t>(0, required));
  if (k > b) {
    step.warnings.push_back("InsufficientBinnings: step needs " +
                            std::to_string(k) + " message binnings, family has " +
                            std::to_string(b));
    k = b;
  }
  step.k = static_cast<int>(k);

  std::int64_t sigma = 0;
  if (structure.unauthorized.empty()) {
    sigma = b;  // no secrecy constraint binds
  } else {
    sigma = guarded_floor((step.min_unauthorized_entropy -
                           epsilon * static_cast<double>(step.k) - delta) /
                          epsilon);
  }
  sigma = std::clamp<std::int64_t>(sigma, 0, b);
  step.sigma = static_cast<int>(sigma);

  step.secret_rate = static_cast<double>(step.sigma) * epsilon;
  step.zero_rate = (step.sigma == 0);
  if (step.zero_rate) step.warnings.push_back("ZeroRate");

  // Stricter margin variant of the secrecy constraint, reported only.
  const double strict_budget =
      step.min_unauthorized_entropy - margins.secrecy_margin_multiplier * delta;
  step.strict_secrecy_margin_ok =
      epsilon * static_cast<double>(step.sigma + step.k) < strict_budget;

  return step;
}

RatePlan plan_timeline(const JointSource& src, const AASTimeline& timeline,
                       double epsilon, const MarginConfig& margins,
                       const BinningFamily& family) {
  RatePlan plan;
  plan.epsilon = epsilon;
  plan.delta = margins.delta_for(epsilon, src.dealer_card);
  plan.binning_count = family.binning_count;

  int k_prev = 0;
  for (int t = 1; t <= timeline.step_count(); ++t) {
    PlanStep step = plan_step(src, timeline.steps[static_cast<std::size_t>(t - 1)],
                              k_prev, epsilon, margins, family);
    step.t = t;
    step.message_rate = static_cast<double>(step.k - k_prev) * epsilon;
    k_prev = step.k;
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

double achievable_rate(const JointSource& src, const AccessStructure& s) {
  if (s.authorized.empty() || s.unauthorized.empty())
    throw std::invalid_argument("EmptyFamily: rate needs non-empty families");

  EntropyCache entropy(src);
  double max_auth = -kInfinity;
  for (std::uint32_t a : s.authorized.members)
    max_auth = std::max(max_auth, entropy(a));
  double min_unauth = kInfinity;
  for (std::uint32_t u : s.unauthorized.members)
    min_unauth = std::min(min_unauth, entropy(u));
  return min_unauth - max_auth;
}

double converse_bound(const JointSource& src, const AccessStructure& s) {
  if (s.authorized.empty() || s.unauthorized.empty())
    throw std::invalid_argument("EmptyFamily: bound needs non-empty families");

  EntropyCache entropy(src);
  double best = kInfinity;
  for (std::uint32_t u : s.unauthorized.members) {
    const double h_u = entropy(u);
    for (std::uint32_t a : s.authorized.members)
      best = std::min(best, h_u - entropy(a | u));
  }
  return best;
}

double threshold_capacity(double key_entropy_bits, int u, int v) {
  if (v >= u)
    throw std::invalid_argument("BadThresholds: need v < u, got u=" +
                                std::to_string(u) + " v=" + std::to_string(v));
  return key_entropy_bits * static_cast<double>(u - v);
}

}  // namespace aassim
