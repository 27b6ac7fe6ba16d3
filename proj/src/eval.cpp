#include "aassim/eval.hpp"

#include <cmath>
#include <stdexcept>

#include "aassim/numeric.hpp"
#include "aassim/parallel.hpp"
#include "aassim/rng.hpp"

namespace aassim {

double binomial_halfwidth95(std::uint64_t failures, std::uint64_t trials) {
  if (trials == 0) return 1.0;
  const double p = static_cast<double>(failures) / static_cast<double>(trials);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::vector<std::uint64_t> trial_seeds(std::uint64_t seed,
                                       std::uint64_t count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t words[] = {i};
    seeds.push_back(rng::derive_stream(seed, rng::Domain::kTrial, words));
  }
  return seeds;
}

ReliabilityReport run_reliability_trials(const JointSource& src,
                                         const AASTimeline& timeline,
                                         const RatePlan& plan,
                                         const BinningFamily& family,
                                         std::span<const std::uint64_t> seeds,
                                         const ReliabilityOptions& options) {
  ReliabilityReport report;
  report.n = family.n;

  // Cell order is fixed by the timeline, identical across trials.
  for (std::size_t i = 0; i < timeline.steps.size(); ++i) {
    for (std::uint32_t group : timeline.steps[i].authorized.members) {
      ReliabilityCell cell;
      cell.t = static_cast<int>(i) + 1;
      cell.group_mask = group;
      report.cells.push_back(cell);
    }
  }

  std::vector<std::vector<GroupDecodeRecord>> per_trial(seeds.size());
  parallel_for(seeds.size(), options.jobs, [&](std::size_t trial) {
    per_trial[trial] = run_timeline(src, timeline, plan, family, seeds[trial],
                                    options.node_budget)
                           .decodes;
  });

  for (const std::vector<GroupDecodeRecord>& records : per_trial) {
    for (std::size_t c = 0; c < records.size(); ++c) {
      const GroupDecodeRecord& r = records[c];
      ReliabilityCell& cell = report.cells[c];
      ++cell.trials;
      const bool seq_fail =
          r.status != DecodeStatus::kSuccess || !r.sequence_correct;
      const bool secret_fail = !r.secret_correct;
      if (seq_fail) ++cell.sequence_failures;
      if (secret_fail) ++cell.secret_failures;
      if (secret_fail && !seq_fail) ++report.dominance_violations;
      if (r.status == DecodeStatus::kNoCandidate) ++cell.no_candidate;
      if (r.status == DecodeStatus::kAmbiguous) ++cell.ambiguous;
      if (r.status == DecodeStatus::kSuccess && !r.sequence_correct)
        ++cell.wrong_sequence;
    }
  }
  return report;
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp, double budget,
                          const char* what) {
  double value = 1.0;
  for (int i = 0; i < exp; ++i) value *= static_cast<double>(base);
  if (value > budget) throw BudgetExceeded(value, budget, what);
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

JointTable make_table(const BinningFamily& family, int k, int sigma,
                      std::uint32_t x_card, std::uint64_t cell_budget) {
  if (k < 0 || k > family.binning_count || sigma < 0 ||
      sigma > family.binning_count)
    throw std::invalid_argument("k and sigma must lie in [0, binning_count]");

  JointTable table;
  table.k = k;
  table.sigma = sigma;
  table.n = family.n;
  table.message_bins = family.message_bins;
  table.secret_bins = family.secret_bins;
  table.x_card = x_card;

  const double budget = static_cast<double>(cell_budget);
  table.m_space = checked_pow(family.message_bins, k, budget, "message space");
  table.s_space = checked_pow(family.secret_bins, sigma, budget, "secret space");
  table.x_space = checked_pow(x_card, family.n, budget, "side space");
  const double cells = static_cast<double>(table.m_space) *
                       static_cast<double>(table.s_space) *
                       static_cast<double>(table.x_space);
  if (cells > budget)
    throw BudgetExceeded(cells, budget, "joint table cells");
  table.p.assign(static_cast<std::size_t>(cells), 0.0);
  return table;
}

std::uint64_t digits_index(std::span<const std::uint64_t> digits,
                           std::uint64_t radix) {
  std::uint64_t index = 0;
  for (std::uint64_t d : digits) index = index * radix + (d - 1);
  return index;
}

std::uint64_t sequence_index(std::span<const std::uint32_t> seq,
                             std::uint32_t radix) {
  std::uint64_t index = 0;
  for (std::uint32_t s : seq) index = index * radix + s;
  return index;
}

/// Dealer-side digits for one y-sequence.
std::pair<std::uint64_t, std::uint64_t> dealer_digits(
    const BinningFamily& family, int k, int sigma,
    std::span<const std::uint32_t> y_seq) {
  std::vector<std::uint64_t> m, s;
  for (int i = 1; i <= k; ++i) m.push_back(message_bin(family, i, y_seq));
  for (int j = 1; j <= sigma; ++j) s.push_back(secret_bin(family, j, y_seq));
  return {digits_index(m, family.message_bins),
          digits_index(s, family.secret_bins)};
}

}  // namespace

std::vector<double> JointTable::secret_marginal() const {
  std::vector<double> out(s_space, 0.0);
  std::size_t idx = 0;
  for (std::uint64_t m = 0; m < m_space; ++m)
    for (std::uint64_t s = 0; s < s_space; ++s)
      for (std::uint64_t x = 0; x < x_space; ++x, ++idx) out[s] += p[idx];
  return out;
}

std::vector<double> JointTable::transcript_side_marginal() const {
  std::vector<double> out(m_space * x_space, 0.0);
  std::size_t idx = 0;
  for (std::uint64_t m = 0; m < m_space; ++m)
    for (std::uint64_t s = 0; s < s_space; ++s)
      for (std::uint64_t x = 0; x < x_space; ++x, ++idx)
        out[m * x_space + x] += p[idx];
  return out;
}

std::vector<double> JointTable::x_marginal() const {
  std::vector<double> out(x_space, 0.0);
  std::size_t idx = 0;
  for (std::uint64_t m = 0; m < m_space; ++m)
    for (std::uint64_t s = 0; s < s_space; ++s)
      for (std::uint64_t x = 0; x < x_space; ++x, ++idx) out[x] += p[idx];
  return out;
}

JointTable exact_joint_distribution(const JointSource& src,
                                    const BinningFamily& family, int k,
                                    int sigma, std::uint32_t u_mask,
                                    double accumulation_budget) {
  const PairPmf pair = restrict_pair(src, u_mask);
  const int n = family.n;

  double y_space = 1.0, x_space = 1.0;
  for (int i = 0; i < n; ++i) {
    y_space *= static_cast<double>(pair.y_card);
    x_space *= static_cast<double>(pair.x_card);
  }
  if (y_space * x_space > accumulation_budget)
    throw BudgetExceeded(y_space * x_space, accumulation_budget,
                         "exact-mode accumulations");

  JointTable table = make_table(family, k, sigma, pair.x_card,
                                kDefaultTableCells);

  std::vector<std::uint32_t> y_seq(static_cast<std::size_t>(n), 0);
  const std::uint64_t y_total = static_cast<std::uint64_t>(y_space);
  for (std::uint64_t yi = 0; yi < y_total; ++yi) {
    // Odometer decode, position 0 most significant.
    std::uint64_t rest = yi;
    for (int pos = n - 1; pos >= 0; --pos) {
      y_seq[static_cast<std::size_t>(pos)] =
          static_cast<std::uint32_t>(rest % pair.y_card);
      rest /= pair.y_card;
    }

    const auto [m_idx, s_idx] = dealer_digits(family, k, sigma, y_seq);
    const std::size_t base = static_cast<std::size_t>(
        (m_idx * table.s_space + s_idx) * table.x_space);

    // Accumulate the factorized mass of every x-sequence against this y.
    // Depth-first so shared prefixes of the product are reused.
    const auto descend = [&](const auto& self, int depth, double product,
                             std::uint64_t x_idx) -> void {
      if (depth == n) {
        table.p[base + x_idx] += product;
        return;
      }
      for (std::uint32_t x = 0; x < pair.x_card; ++x) {
        const double mass =
            product * pair.at(x, y_seq[static_cast<std::size_t>(depth)]);
        if (mass == 0.0) continue;
        self(self, depth + 1, mass, x_idx * pair.x_card + x);
      }
    };
    descend(descend, 0, 1.0, 0);
  }
  return table;
}

JointTable empirical_joint_distribution(const JointSource& src,
                                        const BinningFamily& family, int k,
                                        int sigma, std::uint32_t u_mask,
                                        std::uint64_t trials,
                                        std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("empirical table needs trials >= 1");
  const PairPmf pair = restrict_pair(src, u_mask);
  JointTable table =
      make_table(family, k, sigma, pair.x_card, kDefaultTableCells);

  const std::vector<std::uint64_t> seeds = trial_seeds(seed, trials);
  const double weight = 1.0 / static_cast<double>(trials);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const SampleBlock block = sample_block(src, family.n, seeds[trial]);
    const auto [m_idx, s_idx] =
        dealer_digits(family, k, sigma, block.dealer);
    const std::uint64_t x_idx =
        sequence_index(block.project(src, u_mask), pair.x_card);
    table.p[static_cast<std::size_t>(
        (m_idx * table.s_space + s_idx) * table.x_space + x_idx)] += weight;
  }
  return table;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("ShapeMismatch: tables have " +
                                std::to_string(p.size()) + " and " +
                                std::to_string(q.size()) + " cells");
  KahanSum sum;
  for (std::size_t i = 0; i < p.size(); ++i) sum.add(std::abs(p[i] - q[i]));
  return sum.value();
}

std::vector<double> x_sequence_marginal(const JointSource& src,
                                        std::uint32_t u_mask, int n) {
  const PairPmf pair = restrict_pair(src, u_mask);
  const std::vector<double> per_symbol = pair.x_marginal();

  std::uint64_t x_space = 1;
  for (int i = 0; i < n; ++i) x_space *= pair.x_card;

  std::vector<double> out(x_space, 1.0);
  for (std::uint64_t x = 0; x < x_space; ++x) {
    std::uint64_t rest = x;
    double product = 1.0;
    for (int pos = 0; pos < n; ++pos) {
      product *= per_symbol[rest % pair.x_card];
      rest /= pair.x_card;
    }
    out[x] = product;
  }
  return out;
}

double tv_to_uniform_product(const JointTable& table,
                             std::span<const double> x_reference) {
  if (x_reference.size() != table.x_space)
    throw std::invalid_argument("ShapeMismatch: side reference has wrong size");
  const double unif =
      1.0 / (static_cast<double>(table.m_space) *
             static_cast<double>(table.s_space));
  KahanSum sum;
  std::size_t idx = 0;
  for (std::uint64_t m = 0; m < table.m_space; ++m)
    for (std::uint64_t s = 0; s < table.s_space; ++s)
      for (std::uint64_t x = 0; x < table.x_space; ++x, ++idx)
        sum.add(std::abs(table.p[idx] - unif * x_reference[x]));
  return sum.value();
}

double plugin_mutual_information_bits(const JointTable& table) {
  const std::vector<double> p_secret = table.secret_marginal();
  const std::vector<double> p_side = table.transcript_side_marginal();

  KahanSum mi;
  std::size_t idx = 0;
  for (std::uint64_t m = 0; m < table.m_space; ++m)
    for (std::uint64_t s = 0; s < table.s_space; ++s)
      for (std::uint64_t x = 0; x < table.x_space; ++x, ++idx) {
        const double joint = table.p[idx];
        if (joint <= 0.0) continue;
        mi.add(joint * std::log2(joint / (p_secret[s] *
                                          p_side[m * table.x_space + x])));
      }
  return std::max(0.0, mi.value());
}

double uniformity_gap_bits(const JointTable& table) {
  const std::vector<double> p_secret = table.secret_marginal();
  KahanSum h;
  for (double p : p_secret) h.add(plog2p(p));
  const double entropy = -h.value();
  return std::log2(static_cast<double>(table.s_space)) - entropy;
}

SecrecyCell secrecy_audit(const JointSource& src, const BinningFamily& family,
                          const PlanStep& step, std::uint32_t u_mask,
                          const SecrecyOptions& options) {
  SecrecyCell cell;
  cell.t = step.t;
  cell.u_mask = u_mask;

  const PairPmf pair = restrict_pair(src, u_mask);
  double y_space = 1.0, x_space = 1.0;
  for (int i = 0; i < family.n; ++i) {
    y_space *= static_cast<double>(pair.y_card);
    x_space *= static_cast<double>(pair.x_card);
  }

  JointTable table;
  if (y_space * x_space <= options.accumulation_budget) {
    table = exact_joint_distribution(src, family, step.k, step.sigma, u_mask,
                                     options.accumulation_budget);
    cell.method = "exact";
    cell.samples = 0;
  } else {
    table = empirical_joint_distribution(src, family, step.k, step.sigma,
                                         u_mask, options.mc_trials,
                                         options.mc_seed);
    cell.method = "monte-carlo";
    cell.samples = options.mc_trials;
  }

  const std::vector<double> x_ref =
      x_sequence_marginal(src, u_mask, family.n);
  cell.tv_uniform_product = tv_to_uniform_product(table, x_ref);
  cell.mi_bits = plugin_mutual_information_bits(table);
  cell.uniformity_gap_bits = uniformity_gap_bits(table);
  return cell;
}

OracleEquivalenceReport oracle_equivalence(const JointSource& src,
                                           const BinningFamily& family, int k,
                                           int sigma, std::uint32_t u_mask,
                                           std::uint64_t trials,
                                           std::uint64_t seed,
                                           double accumulation_budget) {
  if (trials < 1)
    throw std::invalid_argument("oracle_equivalence needs trials >= 1");
  const JointTable exact =
      exact_joint_distribution(src, family, k, sigma, u_mask,
                               accumulation_budget);
  const JointTable empirical = empirical_joint_distribution(
      src, family, k, sigma, u_mask, trials, seed);

  OracleEquivalenceReport report;
  report.trials = trials;
  report.tv = tv_distance(exact.p, empirical.p);
  for (std::size_t i = 0; i < exact.p.size(); ++i)
    report.max_cell_deviation = std::max(
        report.max_cell_deviation, std::abs(exact.p[i] - empirical.p[i]));
  return report;
}

}  // namespace aassim
