#pragma once

#include <cstdint>
#include <span>

namespace aassim {

/// The quantized family of seeded binnings: `binning_count` message binnings
/// into [1, message_bins] and as many secret binnings into [1, secret_bins].
/// Each binning is a deterministic keyed function of the dealer sequence;
/// message and secret binnings live in disjoint derivation domains.
struct BinningFamily {
  std::uint64_t seed = 0;
  int n = 0;
  double epsilon = 0.0;
  std::uint32_t dealer_card = 0;

  int binning_count = 0;           // b = ceil(log2|Y| / epsilon)
  std::uint64_t message_bins = 0;  // ceil(2^(n epsilon))
  std::uint64_t secret_bins = 0;   // max(1, floor(2^(n epsilon)))
};

BinningFamily make_family(std::uint64_t seed, int n, double epsilon,
                          std::uint32_t dealer_card);

/// g_i: bin index in [1, message_bins] for the i-th message binning,
/// 1 <= index <= binning_count.
std::uint64_t message_bin(const BinningFamily& family, int index,
                          std::span<const std::uint32_t> y_seq);

/// h_j: bin index in [1, secret_bins] for the j-th secret binning.
std::uint64_t secret_bin(const BinningFamily& family, int index,
                         std::span<const std::uint32_t> y_seq);

}  // namespace aassim
