#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aassim/protocol.hpp"

namespace aassim {

/// Per-(step, authorized group) failure accounting over independent trials.
struct ReliabilityCell {
  int t = 0;
  std::uint32_t group_mask = 0;
  std::uint64_t trials = 0;
  std::uint64_t secret_failures = 0;    // recovered digits != dealer digits
  std::uint64_t sequence_failures = 0;  // decode error or wrong sequence
  std::uint64_t no_candidate = 0;
  std::uint64_t ambiguous = 0;
  std::uint64_t wrong_sequence = 0;

  double secret_failure_rate() const {
    return trials ? static_cast<double>(secret_failures) /
                        static_cast<double>(trials)
                  : 0.0;
  }
};

struct ReliabilityReport {
  int n = 0;
  std::vector<ReliabilityCell> cells;
  // Trials where a cell had a secret failure without a sequence failure;
  // stays zero by construction of the strategy.
  std::uint64_t dominance_violations = 0;
};

/// 95% normal-approximation half-width for a binomial rate estimate.
double binomial_halfwidth95(std::uint64_t failures, std::uint64_t trials);

struct ReliabilityOptions {
  int jobs = 1;
  std::uint64_t node_budget = 100'000'000;
};

/// Fresh sample block per trial seed, fixed binning family throughout.
ReliabilityReport run_reliability_trials(const JointSource& src,
                                         const AASTimeline& timeline,
                                         const RatePlan& plan,
                                         const BinningFamily& family,
                                         std::span<const std::uint64_t> seeds,
                                         const ReliabilityOptions& options);

/// Deterministic per-trial seed derivation from a scenario seed.
std::vector<std::uint64_t> trial_seeds(std::uint64_t seed, std::uint64_t count);

/// Dense distribution over (message digits, secret digits, X_U^n).
/// Index layout: (m_index * s_space + s_index) * x_space + x_index, where
/// m_index and x_index are mixed-radix with position 0 most significant.
struct JointTable {
  int k = 0;
  int sigma = 0;
  int n = 0;
  std::uint64_t message_bins = 1;
  std::uint64_t secret_bins = 1;
  std::uint32_t x_card = 1;  // per-symbol alphabet of the flattened X_U
  std::uint64_t m_space = 1;
  std::uint64_t s_space = 1;
  std::uint64_t x_space = 1;
  std::vector<double> p;

  std::size_t cells() const { return p.size(); }
  std::vector<double> secret_marginal() const;
  std::vector<double> transcript_side_marginal() const;  // over (m, x)
  std::vector<double> x_marginal() const;
};

inline constexpr double kDefaultAccumulationBudget = 1e8;
inline constexpr std::uint64_t kDefaultTableCells = 1u << 24;

/// Exact joint distribution of (M^t, S_t, X_U^n) by enumerating the dealer
/// space and, per dealer sequence, the per-symbol factorized mass of every
/// X_U^n sequence. The enumeration cost y_card^n * x_card^n must stay within
/// `accumulation_budget`.
JointTable exact_joint_distribution(const JointSource& src,
                                    const BinningFamily& family, int k,
                                    int sigma, std::uint32_t u_mask,
                                    double accumulation_budget =
                                        kDefaultAccumulationBudget);

/// Empirical counterpart over `trials` sampled blocks.
JointTable empirical_joint_distribution(const JointSource& src,
                                        const BinningFamily& family, int k,
                                        int sigma, std::uint32_t u_mask,
                                        std::uint64_t trials,
                                        std::uint64_t seed);

/// Total variation as the plain L1 sum |p - q|; throws std::invalid_argument
/// ("ShapeMismatch") for differently shaped tables.
double tv_distance(std::span<const double> p, std::span<const double> q);

struct SecrecyCell {
  int t = 0;
  std::uint32_t u_mask = 0;
  std::string method;  // "exact" or "monte-carlo"
  std::uint64_t samples = 0;
  double tv_uniform_product = 0.0;
  double mi_bits = 0.0;
  double uniformity_gap_bits = 0.0;
};

struct SecrecyOptions {
  double accumulation_budget = kDefaultAccumulationBudget;
  std::uint64_t table_cell_budget = kDefaultTableCells;
  std::uint64_t mc_trials = 100'000;
  std::uint64_t mc_seed = 0;
};

/// Secrecy metrics for one (step, unauthorized group) pair: variational
/// distance to the uniform-times-product reference, plug-in mutual
/// information between the secret and everything the group sees, and the
/// secret uniformity gap. Exact mode when affordable, labeled Monte-Carlo
/// fallback otherwise.
SecrecyCell secrecy_audit(const JointSource& src, const BinningFamily& family,
                          const PlanStep& step, std::uint32_t u_mask,
                          const SecrecyOptions& options);

struct OracleEquivalenceReport {
  std::uint64_t trials = 0;
  double tv = 0.0;
  double max_cell_deviation = 0.0;
};

/// Cross-checks the Monte-Carlo estimator against the exact table.
OracleEquivalenceReport oracle_equivalence(const JointSource& src,
                                           const BinningFamily& family, int k,
                                           int sigma, std::uint32_t u_mask,
                                           std::uint64_t trials,
                                           std::uint64_t seed,
                                           double accumulation_budget =
                                               kDefaultAccumulationBudget);

/// Metrics shared by the audit paths, exposed for tests.
double plugin_mutual_information_bits(const JointTable& table);
double uniformity_gap_bits(const JointTable& table);
double tv_to_uniform_product(const JointTable& table,
                             std::span<const double> x_reference);
/// Product-form reference marginal of X_U^n from the source.
std::vector<double> x_sequence_marginal(const JointSource& src,
                                        std::uint32_t u_mask, int n);

}  // namespace aassim
