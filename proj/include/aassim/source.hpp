#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aassim/errors.hpp"

namespace aassim {

/// Joint probability model of the dealer symbol and the L participant
/// symbols over finite alphabets. The table is dense, dealer-major:
/// cell(y, x_1, ..., x_L) = pmf[((y * |X_1| + x_1) * |X_2| + x_2) ...].
struct JointSource {
  int participant_count = 0;                    // L
  std::uint32_t dealer_card = 0;                // |Y|
  std::vector<std::uint32_t> participant_cards; // |X_l|, l = 1..L
  std::vector<double> pmf;

  // Set by make_keys_source; lets consumers report the per-key entropy.
  bool keys_model = false;
  std::uint32_t key_alphabet = 0;

  std::size_t cell_count() const;
  /// Decompose a flat cell index into (y, x_1..x_L).
  void decode_cell(std::size_t cell, std::uint32_t& y,
                   std::span<std::uint32_t> xs) const;
};

inline constexpr double kMassTolerance = 1e-12;
inline constexpr std::size_t kDefaultTableBudget = 1'000'000;

/// Checks non-negativity and unit total mass. Reports the first violated
/// invariant (NegativeMass or MassNotOne).
ValidationReport validate_source(const JointSource& src,
                                 double tolerance = kMassTolerance);

/// Independent uniform private keys: Y is the tuple (X_1,...,X_L), each X_l
/// uniform over `key_alphabet` symbols and mutually independent.
JointSource make_keys_source(int participant_count,
                             std::uint32_t key_alphabet,
                             std::size_t table_budget = kDefaultTableBudget);

/// Joint distribution of (X_S, Y) for a participant subset S given as a
/// membership mask (bit l-1 = participant l). X_S is flattened into a
/// single symbol, mixed-radix with the lowest-numbered participant as the
/// most significant digit. Index layout: p[x * y_card + y].
struct PairPmf {
  std::uint32_t x_card = 1;
  std::uint32_t y_card = 1;
  std::vector<double> p;

  double at(std::uint32_t x, std::uint32_t y) const {
    return p[static_cast<std::size_t>(x) * y_card + y];
  }
  std::vector<double> x_marginal() const;
  std::vector<double> y_marginal() const;
};

PairPmf restrict_pair(const JointSource& src, std::uint32_t subset_mask);

/// H(Y | X_S) in bits from the exact table; S may be empty (H(Y)).
double conditional_entropy(const JointSource& src, std::uint32_t subset_mask);

/// I(Y; X_A | X_U) = H(Y|X_U) - H(Y|X_{A u U}), in bits.
double conditional_mutual_information(const JointSource& src,
                                      std::uint32_t a_mask,
                                      std::uint32_t u_mask);

/// One i.i.d. block of observations.
struct SampleBlock {
  std::vector<std::uint32_t> dealer;                    // Y^n
  std::vector<std::vector<std::uint32_t>> participants; // X_l^n per l

  int length() const { return static_cast<int>(dealer.size()); }
  /// Flattened X_S sequence aligned with `dealer`, same radix order as
  /// restrict_pair.
  std::vector<std::uint32_t> project(const JointSource& src,
                                     std::uint32_t subset_mask) const;
};

/// n i.i.d. draws from the joint table; bit-deterministic given the seed.
SampleBlock sample_block(const JointSource& src, int n, std::uint64_t seed);

/// Membership-mask helpers shared across modules (participants are 1-based
/// in all external interfaces, bit l-1 internally).
std::uint32_t mask_from_members(const std::vector<int>& members, int L);
std::vector<int> members_from_mask(std::uint32_t mask);
std::string format_set(std::uint32_t mask);

}  // namespace aassim
