#include "aassim/typicality.hpp"

#include <cmath>
#include <stdexcept>

#include "aassim/errors.hpp"

namespace aassim {

bool is_typical(std::span<const std::uint32_t> seq, std::span<const double> pmf,
                const TypicalityParams& params) {
  if (params.epsilon <= 0.0 || params.n < 1)
    throw std::invalid_argument("typicality needs epsilon > 0 and n >= 1");
  if (static_cast<int>(seq.size()) != params.n)
    throw std::invalid_argument("LengthMismatch: sequence length " +
                                std::to_string(seq.size()) + ", n = " +
                                std::to_string(params.n));

  std::vector<int> counts(pmf.size(), 0);
  for (std::uint32_t s : seq) {
    if (s >= pmf.size())
      throw std::out_of_range("symbol outside the pmf alphabet");
    ++counts[s];
  }
  for (std::size_t sym = 0; sym < pmf.size(); ++sym)
    if (!count_in_band(counts[sym], params.n, pmf[sym], params.epsilon))
      return false;
  return true;
}

bool is_jointly_typical(std::span<const std::uint32_t> x_seq,
                        std::span<const std::uint32_t> y_seq,
                        const PairPmf& pair, const TypicalityParams& params) {
  if (x_seq.size() != y_seq.size())
    throw std::invalid_argument("LengthMismatch: aligned sequences have "
                                "lengths " +
                                std::to_string(x_seq.size()) + " and " +
                                std::to_string(y_seq.size()));

  std::vector<std::uint32_t> combined(x_seq.size());
  for (std::size_t i = 0; i < x_seq.size(); ++i) {
    if (x_seq[i] >= pair.x_card || y_seq[i] >= pair.y_card)
      throw std::out_of_range("symbol outside the pair alphabet");
    combined[i] = x_seq[i] * pair.y_card + y_seq[i];
  }
  return is_typical(combined, pair.p, params);
}

CountBands count_bands(std::span<const double> pmf,
                       const TypicalityParams& params) {
  CountBands bands;
  bands.lo.resize(pmf.size());
  bands.hi.resize(pmf.size());
  for (std::size_t sym = 0; sym < pmf.size(); ++sym) {
    int lo = params.n + 1, hi = -1;
    for (int c = 0; c <= params.n; ++c) {
      if (count_in_band(c, params.n, pmf[sym], params.epsilon)) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
    }
    bands.lo[sym] = lo;
    bands.hi[sym] = hi;
  }
  return bands;
}

namespace detail {

namespace {

struct Walker {
  const PairPmf& pair;
  std::span<const std::uint32_t> x_side;
  const CountBands& bands;
  const std::function<bool(std::span<const std::uint32_t>)>& visit;

  int n = 0;
  std::vector<std::uint32_t> candidate;
  std::vector<int> counts;     // per pair cell
  std::vector<int> deficit;    // per x group: sum of unmet lower bounds
  std::vector<int> headroom;   // per x group: sum of hi - count
  std::vector<int> remaining;  // per x group: unassigned positions
  std::uint64_t nodes = 0;
  std::uint64_t node_budget = 0;
  bool stopped = false;

  std::size_t cell(std::uint32_t x, std::uint32_t y) const {
    return static_cast<std::size_t>(x) * pair.y_card + y;
  }

  bool feasible(std::uint32_t group) const {
    return deficit[group] <= remaining[group] &&
           remaining[group] <= headroom[group];
  }

  void run() {
    // Initial feasibility for every group (covers empty groups whose cells
    // still demand occurrences, and bands with no admissible integer).
    for (std::uint32_t x = 0; x < pair.x_card; ++x)
      if (!feasible(x)) return;
    descend(0);
  }

  void descend(int depth) {
    if (stopped) return;
    if (++nodes > node_budget)
      throw BudgetExceeded(static_cast<double>(nodes),
                           static_cast<double>(node_budget),
                           "typical-sequence walk");
    if (depth == n) {
      if (!visit(candidate)) stopped = true;
      return;
    }

    const std::uint32_t group = x_side[static_cast<std::size_t>(depth)];
    --remaining[group];
    for (std::uint32_t y = 0; y < pair.y_card && !stopped; ++y) {
      const std::size_t c = cell(group, y);
      if (counts[c] >= bands.hi[c]) continue;  // also skips lo > hi cells
      ++counts[c];
      --headroom[group];
      if (counts[c] <= bands.lo[c]) --deficit[group];
      if (feasible(group)) {
        candidate[static_cast<std::size_t>(depth)] = y;
        descend(depth + 1);
      }
      if (counts[c] <= bands.lo[c]) ++deficit[group];
      ++headroom[group];
      --counts[c];
    }
    ++remaining[group];
  }
};

}  // namespace

std::uint64_t walk_conditionally_typical(
    const PairPmf& pair, std::span<const std::uint32_t> x_side,
    const CountBands& bands, std::uint64_t node_budget,
    const std::function<bool(std::span<const std::uint32_t>)>& visit) {
  Walker w{pair, x_side, bands, visit};
  w.n = static_cast<int>(x_side.size());
  w.candidate.resize(x_side.size());
  w.counts.assign(pair.p.size(), 0);
  w.deficit.assign(pair.x_card, 0);
  w.headroom.assign(pair.x_card, 0);
  w.remaining.assign(pair.x_card, 0);
  w.node_budget = node_budget;

  for (std::uint32_t s : x_side) {
    if (s >= pair.x_card)
      throw std::out_of_range("symbol outside the pair alphabet");
    ++w.remaining[s];
  }
  for (std::uint32_t x = 0; x < pair.x_card; ++x) {
    for (std::uint32_t y = 0; y < pair.y_card; ++y) {
      const std::size_t c = w.cell(x, y);
      if (bands.lo[c] <= bands.hi[c]) {
        w.deficit[x] += bands.lo[c];
        w.headroom[x] += bands.hi[c];
      } else if (bands.lo[c] > 0) {
        // No admissible count exists for this cell; nothing is typical.
        w.deficit[x] += bands.lo[c];
      }
    }
  }
  w.run();
  return w.nodes;
}

}  // namespace detail

std::uint64_t enumerate_conditionally_typical(
    const PairPmf& pair, std::span<const std::uint32_t> x_side,
    const TypicalityParams& params, double space_budget,
    const std::function<bool(std::span<const std::uint32_t>)>& visit,
    std::uint64_t node_budget) {
  if (static_cast<int>(x_side.size()) != params.n)
    throw std::invalid_argument("LengthMismatch: x side has length " +
                                std::to_string(x_side.size()) + ", n = " +
                                std::to_string(params.n));
  const double space =
      std::pow(static_cast<double>(pair.y_card), params.n);
  if (space > space_budget)
    throw BudgetExceeded(space, space_budget, "conditional sequence space");

  const CountBands bands = count_bands(pair.p, params);
  std::uint64_t count = 0;
  detail::walk_conditionally_typical(
      pair, x_side, bands, node_budget,
      [&](std::span<const std::uint32_t> y) {
        ++count;
        return visit(y);
      });
  return count;
}

}  // namespace aassim
