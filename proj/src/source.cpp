#include "aassim/source.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aassim/numeric.hpp"
#include "aassim/rng.hpp"

namespace aassim {

std::size_t JointSource::cell_count() const {
  std::size_t cells = dealer_card;
  for (std::uint32_t c : participant_cards) cells *= c;
  return cells;
}

void JointSource::decode_cell(std::size_t cell, std::uint32_t& y,
                              std::span<std::uint32_t> xs) const {
  for (int l = participant_count - 1; l >= 0; --l) {
    const std::uint32_t card = participant_cards[static_cast<std::size_t>(l)];
    xs[static_cast<std::size_t>(l)] = static_cast<std::uint32_t>(cell % card);
    cell /= card;
  }
  y = static_cast<std::uint32_t>(cell);
}

ValidationReport validate_source(const JointSource& src, double tolerance) {
  ValidationReport report;
  if (src.participant_count < 1 || src.dealer_card < 1) {
    report.fail("BadShape", "participant count and |Y| must be >= 1");
    return report;
  }
  for (std::uint32_t c : src.participant_cards) {
    if (c < 1) {
      report.fail("BadShape", "every participant alphabet must be >= 1");
      return report;
    }
  }
  if (src.pmf.size() != src.cell_count()) {
    report.fail("BadShape", "table has " + std::to_string(src.pmf.size()) +
                                " cells, expected " +
                                std::to_string(src.cell_count()));
    return report;
  }
  KahanSum total;
  for (std::size_t i = 0; i < src.pmf.size(); ++i) {
    if (src.pmf[i] < 0.0) {
      report.fail("NegativeMass", "cell " + std::to_string(i) + " has mass " +
                                      std::to_string(src.pmf[i]));
      return report;
    }
    total.add(src.pmf[i]);
  }
  if (std::abs(total.value() - 1.0) > tolerance) {
    report.fail("MassNotOne",
                "table mass is " + std::to_string(total.value()));
  }
  return report;
}

JointSource make_keys_source(int participant_count, std::uint32_t key_alphabet,
                             std::size_t table_budget) {
  if (participant_count < 1)
    throw std::invalid_argument("make_keys_source: L must be >= 1");
  if (key_alphabet < 2)
    throw std::invalid_argument("make_keys_source: key alphabet must be >= 2");

  double log_cells = 2.0 * participant_count * std::log2(key_alphabet);
  if (log_cells > std::log2(static_cast<double>(table_budget)))
    throw BudgetExceeded(std::exp2(log_cells),
                         static_cast<double>(table_budget),
                         "keys-source table");

  std::uint64_t tuple_count = 1;
  for (int l = 0; l < participant_count; ++l) tuple_count *= key_alphabet;

  JointSource src;
  src.participant_count = participant_count;
  src.dealer_card = static_cast<std::uint32_t>(tuple_count);
  src.participant_cards.assign(static_cast<std::size_t>(participant_count),
                               key_alphabet);
  src.pmf.assign(static_cast<std::size_t>(tuple_count) * tuple_count, 0.0);
  src.keys_model = true;
  src.key_alphabet = key_alphabet;

  const double mass = 1.0 / static_cast<double>(tuple_count);
  for (std::uint64_t tuple = 0; tuple < tuple_count; ++tuple) {
    // Y equals the key tuple, so the only massive cells are (y=tuple, tuple).
    src.pmf[tuple * tuple_count + tuple] = mass;
  }
  return src;
}

namespace {

void check_subset(const JointSource& src, std::uint32_t mask,
                  const char* where) {
  if (src.participant_count < 32 &&
      (mask >> src.participant_count) != 0)
    throw std::out_of_range(std::string("IndexOutOfRange: ") + where +
                            " names a participant beyond L=" +
                            std::to_string(src.participant_count));
}

double entropy_bits(std::span<const double> table) {
  KahanSum h;
  for (double p : table) h.add(plog2p(p));
  return -h.value();
}

}  // namespace

std::vector<double> PairPmf::x_marginal() const {
  std::vector<double> m(x_card, 0.0);
  for (std::uint32_t x = 0; x < x_card; ++x) {
    KahanSum s;
    for (std::uint32_t y = 0; y < y_card; ++y) s.add(at(x, y));
    m[x] = s.value();
  }
  return m;
}

std::vector<double> PairPmf::y_marginal() const {
  std::vector<double> m(y_card, 0.0);
  for (std::uint32_t y = 0; y < y_card; ++y) {
    KahanSum s;
    for (std::uint32_t x = 0; x < x_card; ++x) s.add(at(x, y));
    m[y] = s.value();
  }
  return m;
}

PairPmf restrict_pair(const JointSource& src, std::uint32_t subset_mask) {
  check_subset(src, subset_mask, "subset");

  std::vector<int> picked;  // 0-based participant indices, ascending
  for (int l = 0; l < src.participant_count; ++l)
    if (subset_mask & (1u << l)) picked.push_back(l);

  std::uint64_t x_card = 1;
  for (int l : picked) x_card *= src.participant_cards[static_cast<std::size_t>(l)];

  PairPmf pair;
  pair.x_card = static_cast<std::uint32_t>(x_card);
  pair.y_card = src.dealer_card;
  pair.p.assign(static_cast<std::size_t>(x_card) * src.dealer_card, 0.0);

  std::vector<std::uint32_t> xs(static_cast<std::size_t>(src.participant_count));
  std::uint32_t y = 0;
  for (std::size_t cell = 0; cell < src.pmf.size(); ++cell) {
    const double mass = src.pmf[cell];
    if (mass == 0.0) continue;
    src.decode_cell(cell, y, xs);
    std::uint64_t xsym = 0;
    for (int l : picked)
      xsym = xsym * src.participant_cards[static_cast<std::size_t>(l)] +
             xs[static_cast<std::size_t>(l)];
    pair.p[static_cast<std::size_t>(xsym) * pair.y_card + y] += mass;
  }
  return pair;
}

double conditional_entropy(const JointSource& src, std::uint32_t subset_mask) {
  const PairPmf pair = restrict_pair(src, subset_mask);
  const double joint = entropy_bits(pair.p);
  const double side = entropy_bits(pair.x_marginal());
  return joint - side;
}

double conditional_mutual_information(const JointSource& src,
                                      std::uint32_t a_mask,
                                      std::uint32_t u_mask) {
  check_subset(src, a_mask, "A");
  check_subset(src, u_mask, "U");
  return conditional_entropy(src, u_mask) -
         conditional_entropy(src, a_mask | u_mask);
}

std::vector<std::uint32_t> SampleBlock::project(
    const JointSource& src, std::uint32_t subset_mask) const {
  std::vector<int> picked;
  for (int l = 0; l < src.participant_count; ++l)
    if (subset_mask & (1u << l)) picked.push_back(l);

  std::vector<std::uint32_t> out(dealer.size(), 0);
  for (std::size_t i = 0; i < dealer.size(); ++i) {
    std::uint64_t sym = 0;
    for (int l : picked)
      sym = sym * src.participant_cards[static_cast<std::size_t>(l)] +
            participants[static_cast<std::size_t>(l)][i];
    out[i] = static_cast<std::uint32_t>(sym);
  }
  return out;
}

SampleBlock sample_block(const JointSource& src, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_block: n must be >= 1");

  // Inverse-CDF over the dense table; the cumulative sums and the 53-bit
  // uniforms are both exact, so blocks are platform-independent.
  std::vector<double> cdf(src.pmf.size());
  KahanSum acc;
  for (std::size_t i = 0; i < src.pmf.size(); ++i) {
    acc.add(src.pmf[i]);
    cdf[i] = acc.value();
  }
  cdf.back() = 1.0;

  rng::SplitMix64 gen(rng::derive_stream(seed, rng::Domain::kSampling, {}));

  SampleBlock block;
  block.dealer.resize(static_cast<std::size_t>(n));
  block.participants.assign(
      static_cast<std::size_t>(src.participant_count),
      std::vector<std::uint32_t>(static_cast<std::size_t>(n)));

  std::vector<std::uint32_t> xs(static_cast<std::size_t>(src.participant_count));
  for (int i = 0; i < n; ++i) {
    const double u = gen.next_unit();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t cell = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    std::uint32_t y = 0;
    src.decode_cell(cell, y, xs);
    block.dealer[static_cast<std::size_t>(i)] = y;
    for (int l = 0; l < src.participant_count; ++l)
      block.participants[static_cast<std::size_t>(l)]
                        [static_cast<std::size_t>(i)] =
          xs[static_cast<std::size_t>(l)];
  }
  return block;
}

std::uint32_t mask_from_members(const std::vector<int>& members, int L) {
  std::uint32_t mask = 0;
  for (int m : members) {
    if (m < 1 || m > L)
      throw std::out_of_range("IndexOutOfRange: participant " +
                              std::to_string(m) + " outside [1," +
                              std::to_string(L) + "]");
    mask |= 1u << (m - 1);
  }
  return mask;
}

std::vector<int> members_from_mask(std::uint32_t mask) {
  std::vector<int> members;
  for (int l = 0; mask != 0; ++l, mask >>= 1)
    if (mask & 1u) members.push_back(l + 1);
  return members;
}

std::string format_set(std::uint32_t mask) {
  std::string out = "{";
  bool first = true;
  for (int m : members_from_mask(mask)) {
    if (!first) out += ",";
    out += std::to_string(m);
    first = false;
  }
  return out + "}";
}

}  // namespace aassim
