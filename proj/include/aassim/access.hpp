#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aassim/errors.hpp"

namespace aassim {

/// Participant subsets are L-bit membership masks (bit l-1 = participant l).
/// Families are kept as sorted lists of masks; closures are computed on
/// demand. L is capped so 2^L enumeration stays exact.
inline constexpr int kMaxParticipants = 16;

struct SetFamily {
  std::vector<std::uint32_t> members;  // sorted, unique

  bool contains(std::uint32_t mask) const;
  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }

  static SetFamily from_unsorted(std::vector<std::uint32_t> masks);
};

struct AccessStructure {
  int participant_count = 0;
  SetFamily authorized;    // monotone family
  SetFamily unauthorized;  // disjoint from authorized
};

struct AASTimeline {
  int participant_count = 0;
  std::vector<AccessStructure> steps;  // steps[t-1] is the structure at t

  int step_count() const { return static_cast<int>(steps.size()); }
};

/// Per-step authorization / unauthorized size thresholds.
struct ThresholdParams {
  std::vector<int> f1;  // minimum authorized size per step
  std::vector<int> f2;  // maximum unauthorized size per step
};

/// Upward closure {B : exists A in minimal_sets with A subseteq B}.
SetFamily monotone_closure(int participant_count,
                           const std::vector<std::uint32_t>& minimal_sets);

/// The antichain of minimal members of a family.
std::vector<std::uint32_t> minimal_sets(const SetFamily& family);

/// Checks that the authorized family is monotone and does not intersect the
/// unauthorized family. Adds a non-fatal notice when the unauthorized family
/// is not downward closed.
ValidationReport validate_access_structure(const AccessStructure& s);

/// Checks strict growth of the authorized families, weak shrinkage of the
/// unauthorized families, and per-step validity.
ValidationReport validate_aas(const AASTimeline& timeline);

/// Authorized = all sets of size >= u, unauthorized = all sets of size <= v.
AccessStructure threshold_structure(int participant_count, int u, int v);

/// Builds the per-step threshold structures and validates the result.
/// Throws std::invalid_argument carrying the validation diagnostic when the
/// thresholds do not produce a valid timeline.
AASTimeline taas_timeline(int participant_count, const ThresholdParams& params);

/// One step of incremental construction: the sets newly authorized at this
/// step (as minimal generators) and, optionally, an explicit unauthorized
/// family. Without the override the unauthorized family is the full
/// complement of the authorized family.
struct StepEvents {
  std::vector<std::uint32_t> newly_authorized;
  std::optional<std::vector<std::uint32_t>> explicit_unauthorized;
};

AASTimeline aas_from_events(int participant_count,
                            const std::vector<StepEvents>& events);

/// All subsets of [1,L] not in `family`, sorted.
SetFamily complement_family(int participant_count, const SetFamily& family);

/// If the structure is exactly a pair of size thresholds, returns (u, v).
std::optional<std::pair<int, int>> as_threshold(const AccessStructure& s);

}  // namespace aassim
