#include "aassim/binning.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aassim/errors.hpp"
#include "aassim/numeric.hpp"
#include "aassim/rng.hpp"

namespace aassim {

namespace {

// n * epsilon above this would overflow the 64-bit bin index space.
constexpr double kMaxRateBits = 62.0;

std::uint64_t keyed_bin(const BinningFamily& family, rng::Domain domain,
                        int index, std::uint64_t range,
                        std::span<const std::uint32_t> y_seq) {
  if (index < 1 || index > family.binning_count)
    throw std::out_of_range("IndexOutOfRange: binning index " +
                            std::to_string(index) + " outside [1," +
                            std::to_string(family.binning_count) + "]");
  if (static_cast<int>(y_seq.size()) != family.n)
    throw std::invalid_argument("binning expects a length-" +
                                std::to_string(family.n) + " sequence");

  std::uint64_t state = rng::mix64(family.seed);
  state = rng::absorb(state, static_cast<std::uint64_t>(domain));
  state = rng::absorb(state, static_cast<std::uint64_t>(index));
  state = rng::absorb(state, static_cast<std::uint64_t>(family.n));
  for (std::uint32_t sym : y_seq) {
    if (sym >= family.dealer_card)
      throw std::out_of_range("symbol outside the dealer alphabet");
    state = rng::absorb(state, sym);
  }

  rng::SplitMix64 gen(state);
  return rng::bounded<std::uint64_t>(range, [&] { return gen.next(); }) + 1;
}

}  // namespace

BinningFamily make_family(std::uint64_t seed, int n, double epsilon,
                          std::uint32_t dealer_card) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (dealer_card < 2)
    throw std::invalid_argument("dealer alphabet must have >= 2 symbols");

  const double rate_bits = static_cast<double>(n) * epsilon;
  if (rate_bits > kMaxRateBits)
    throw BudgetExceeded(rate_bits, kMaxRateBits,
                         "bin index space (n * epsilon bits)");

  BinningFamily family;
  family.seed = seed;
  family.n = n;
  family.epsilon = epsilon;
  family.dealer_card = dealer_card;
  family.binning_count = static_cast<int>(
      guarded_ceil(std::log2(static_cast<double>(dealer_card)) / epsilon));
  family.message_bins =
      static_cast<std::uint64_t>(guarded_ceil(std::exp2(rate_bits)));
  family.secret_bins = static_cast<std::uint64_t>(
      std::max<std::int64_t>(1, guarded_floor(std::exp2(rate_bits))));

  if (family.message_bins == 0 || family.secret_bins == 0)
    throw std::domain_error("DegenerateBins: empty bin index range");
  return family;
}

std::uint64_t message_bin(const BinningFamily& family, int index,
                          std::span<const std::uint32_t> y_seq) {
  return keyed_bin(family, rng::Domain::kMessageBinning, index,
                   family.message_bins, y_seq);
}

std::uint64_t secret_bin(const BinningFamily& family, int index,
                         std::span<const std::uint32_t> y_seq) {
  return keyed_bin(family, rng::Domain::kSecretBinning, index,
                   family.secret_bins, y_seq);
}

}  // namespace aassim
