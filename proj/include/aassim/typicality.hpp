#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aassim/source.hpp"

namespace aassim {

struct TypicalityParams {
  double epsilon = 0.0;
  int n = 0;
};

/// The single comparison every typicality decision reduces to: is `count`
/// occurrences out of n inside the band |count - n p| <= epsilon n p?
/// Symbols with p = 0 therefore must not appear at all.
inline bool count_in_band(int count, int n, double p, double epsilon) {
  const double expected = static_cast<double>(n) * p;
  return std::abs(static_cast<double>(count) - expected) <=
         epsilon * expected;
}

/// Letter-typicality of a sequence against a marginal pmf.
bool is_typical(std::span<const std::uint32_t> seq, std::span<const double> pmf,
                const TypicalityParams& params);

/// Joint typicality of an aligned pair, evaluated as letter-typicality of the
/// pair sequence over the product alphabet. Throws std::invalid_argument
/// ("LengthMismatch") when the sequences differ in length.
bool is_jointly_typical(std::span<const std::uint32_t> x_seq,
                        std::span<const std::uint32_t> y_seq,
                        const PairPmf& pair, const TypicalityParams& params);

/// Admissible count ranges per symbol, derived from count_in_band so the
/// enumerator accepts exactly the sequences is_typical accepts.
/// lo > hi marks a symbol whose band contains no integer.
struct CountBands {
  std::vector<int> lo;
  std::vector<int> hi;
};

CountBands count_bands(std::span<const double> pmf,
                       const TypicalityParams& params);

/// Yields, in ascending order (position 0 most significant), every y-sequence
/// jointly typical with x_side. The visitor returns false to stop early.
/// Returns the number of sequences visited.
///
/// Guards: the full conditional space |Y|^n must stay within space_budget
/// (throws BudgetExceeded otherwise); the pruned walk itself is additionally
/// capped at node_budget visited nodes.
std::uint64_t enumerate_conditionally_typical(
    const PairPmf& pair, std::span<const std::uint32_t> x_side,
    const TypicalityParams& params, double space_budget,
    const std::function<bool(std::span<const std::uint32_t>)>& visit,
    std::uint64_t node_budget = 100'000'000);

namespace detail {

/// Depth-first walk over y-sequences whose pair counts stay inside the given
/// bands; exact feasibility pruning per x-symbol group. Shared by the
/// enumerator and the decoder. Visits sequences in ascending order.
std::uint64_t walk_conditionally_typical(
    const PairPmf& pair, std::span<const std::uint32_t> x_side,
    const CountBands& pair_bands, std::uint64_t node_budget,
    const std::function<bool(std::span<const std::uint32_t>)>& visit);

}  // namespace detail

}  // namespace aassim
