#include "aassim/access.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "aassim/source.hpp"

namespace aassim {

namespace {

void check_participant_count(int L) {
  if (L < 1 || L > kMaxParticipants)
    throw std::invalid_argument("participant count must be in [1," +
                                std::to_string(kMaxParticipants) + "]");
}

void check_masks(int L, const std::vector<std::uint32_t>& masks) {
  const std::uint32_t all = (L == 32) ? ~0u : ((1u << L) - 1u);
  for (std::uint32_t m : masks)
    if ((m & ~all) != 0)
      throw std::out_of_range("IndexOutOfRange: set " + format_set(m) +
                              " names a participant beyond L=" +
                              std::to_string(L));
}

}  // namespace

bool SetFamily::contains(std::uint32_t mask) const {
  return std::binary_search(members.begin(), members.end(), mask);
}

SetFamily SetFamily::from_unsorted(std::vector<std::uint32_t> masks) {
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  return SetFamily{std::move(masks)};
}

SetFamily monotone_closure(int participant_count,
                           const std::vector<std::uint32_t>& minimal) {
  check_participant_count(participant_count);
  check_masks(participant_count, minimal);

  const std::uint32_t universe = 1u << participant_count;
  std::vector<std::uint32_t> closed;
  for (std::uint32_t b = 0; b < universe; ++b) {
    for (std::uint32_t a : minimal) {
      if ((a & b) == a) {
        closed.push_back(b);
        break;
      }
    }
  }
  return SetFamily{std::move(closed)};
}

std::vector<std::uint32_t> minimal_sets(const SetFamily& family) {
  std::vector<std::uint32_t> result;
  for (std::uint32_t a : family.members) {
    bool minimal = true;
    for (std::uint32_t other : family.members) {
      if (other != a && (other & a) == other) {
        minimal = false;
        break;
      }
    }
    if (minimal) result.push_back(a);
  }
  return result;
}

ValidationReport validate_access_structure(const AccessStructure& s) {
  ValidationReport report;
  check_participant_count(s.participant_count);
  check_masks(s.participant_count, s.authorized.members);
  check_masks(s.participant_count, s.unauthorized.members);

  // Monotonicity: closure under single-element extension implies closure
  // under arbitrary supersets.
  for (std::uint32_t a : s.authorized.members) {
    for (int l = 0; l < s.participant_count; ++l) {
      const std::uint32_t grown = a | (1u << l);
      if (grown != a && !s.authorized.contains(grown)) {
        report.fail("NotMonotone", "authorized family contains " +
                                       format_set(a) + " but not its superset " +
                                       format_set(grown));
        return report;
      }
    }
  }

  for (std::uint32_t u : s.unauthorized.members) {
    if (s.authorized.contains(u)) {
      report.fail("Overlap",
                  format_set(u) + " is both authorized and unauthorized");
      return report;
    }
  }

  // Downward closure of the unauthorized family is not required; surface a
  // notice when it fails so threshold-style consumers can tell.
  for (std::uint32_t u : s.unauthorized.members) {
    for (int l = 0; l < s.participant_count; ++l) {
      if ((u & (1u << l)) != 0 && !s.unauthorized.contains(u & ~(1u << l))) {
        report.notice("UnauthorizedNotDownwardClosed",
                      "unauthorized family contains " + format_set(u) +
                          " but not its subset " +
                          format_set(u & ~(1u << l)));
        return report;
      }
    }
  }
  return report;
}

ValidationReport validate_aas(const AASTimeline& timeline) {
  ValidationReport report;
  check_participant_count(timeline.participant_count);
  if (timeline.steps.empty()) {
    report.fail("EmptyTimeline", "timeline has no steps");
    return report;
  }

  const std::uint32_t universe = 1u << timeline.participant_count;
  SetFamily previous_authorized;  // empty at t = 0
  SetFamily previous_unauthorized;
  previous_unauthorized.members.resize(universe);
  for (std::uint32_t m = 0; m < universe; ++m)
    previous_unauthorized.members[m] = m;  // the full powerset at t = 0

  for (int t = 1; t <= timeline.step_count(); ++t) {
    const AccessStructure& step = timeline.steps[static_cast<std::size_t>(t - 1)];
    if (step.participant_count != timeline.participant_count) {
      report.fail("StepInvalid",
                  "t=" + std::to_string(t) + ": participant count mismatch");
      return report;
    }

    ValidationReport inner = validate_access_structure(step);
    for (auto& n : inner.notices)
      report.notice(n.code, "t=" + std::to_string(t) + ": " + n.message);
    if (!inner.ok()) {
      report.fail("StepInvalid", "t=" + std::to_string(t) + ": " +
                                     inner.first_error().code + ": " +
                                     inner.first_error().message);
      return report;
    }

    for (std::uint32_t a : previous_authorized.members) {
      if (!step.authorized.contains(a)) {
        report.fail("NotGrowing", "t=" + std::to_string(t) + ": " +
                                      format_set(a) +
                                      " lost its authorization");
        return report;
      }
    }
    if (step.authorized.size() <= previous_authorized.size()) {
      report.fail("NotGrowing",
                  "t=" + std::to_string(t) + ": no newly authorized group");
      return report;
    }

    for (std::uint32_t u : step.unauthorized.members) {
      if (!previous_unauthorized.contains(u)) {
        report.fail("UnauthorizedGrew",
                    "t=" + std::to_string(t) + ": " + format_set(u) +
                        " became unauthorized again");
        return report;
      }
    }

    previous_authorized = step.authorized;
    previous_unauthorized = step.unauthorized;
  }
  return report;
}

AccessStructure threshold_structure(int participant_count, int u, int v) {
  check_participant_count(participant_count);
  if (v < 0 || u > participant_count || v >= u)
    throw std::invalid_argument("BadThresholds: need 0 <= v < u <= L, got u=" +
                                std::to_string(u) + " v=" + std::to_string(v));

  AccessStructure s;
  s.participant_count = participant_count;
  const std::uint32_t universe = 1u << participant_count;
  for (std::uint32_t m = 0; m < universe; ++m) {
    const int size = std::popcount(m);
    if (size >= u) s.authorized.members.push_back(m);
    if (size <= v) s.unauthorized.members.push_back(m);
  }
  return s;
}

AASTimeline taas_timeline(int participant_count, const ThresholdParams& params) {
  if (params.f1.size() != params.f2.size() || params.f1.empty())
    throw std::invalid_argument(
        "threshold timeline needs matching, non-empty f1/f2");

  AASTimeline timeline;
  timeline.participant_count = participant_count;
  for (std::size_t t = 0; t < params.f1.size(); ++t)
    timeline.steps.push_back(
        threshold_structure(participant_count, params.f1[t], params.f2[t]));

  ValidationReport report = validate_aas(timeline);
  if (!report.ok())
    throw std::invalid_argument(report.first_error().code + ": " +
                                report.first_error().message);
  return timeline;
}

SetFamily complement_family(int participant_count, const SetFamily& family) {
  const std::uint32_t universe = 1u << participant_count;
  SetFamily out;
  for (std::uint32_t m = 0; m < universe; ++m)
    if (!family.contains(m)) out.members.push_back(m);
  return out;
}

AASTimeline aas_from_events(int participant_count,
                            const std::vector<StepEvents>& events) {
  check_participant_count(participant_count);
  if (events.empty())
    throw std::invalid_argument("aas_from_events: no steps given");

  AASTimeline timeline;
  timeline.participant_count = participant_count;

  std::vector<std::uint32_t> generators;
  for (const StepEvents& step : events) {
    generators.insert(generators.end(), step.newly_authorized.begin(),
                      step.newly_authorized.end());
    AccessStructure s;
    s.participant_count = participant_count;
    s.authorized = monotone_closure(participant_count, generators);
    if (step.explicit_unauthorized.has_value()) {
      check_masks(participant_count, *step.explicit_unauthorized);
      s.unauthorized = SetFamily::from_unsorted(*step.explicit_unauthorized);
    } else {
      s.unauthorized = complement_family(participant_count, s.authorized);
    }
    timeline.steps.push_back(std::move(s));
  }

  ValidationReport report = validate_aas(timeline);
  if (!report.ok())
    throw std::invalid_argument(report.first_error().code + ": " +
                                report.first_error().message);
  return timeline;
}

std::optional<std::pair<int, int>> as_threshold(const AccessStructure& s) {
  if (s.authorized.empty() || s.unauthorized.empty()) return std::nullopt;

  int u = s.participant_count + 1;
  for (std::uint32_t a : s.authorized.members) u = std::min(u, std::popcount(a));
  int v = -1;
  for (std::uint32_t m : s.unauthorized.members) v = std::max(v, std::popcount(m));

  const std::uint32_t universe = 1u << s.participant_count;
  std::size_t expect_a = 0, expect_u = 0;
  for (std::uint32_t m = 0; m < universe; ++m) {
    if (std::popcount(m) >= u) ++expect_a;
    if (std::popcount(m) <= v) ++expect_u;
  }
  if (expect_a != s.authorized.size() || expect_u != s.unauthorized.size())
    return std::nullopt;
  if (v >= u) return std::nullopt;
  return std::make_pair(u, v);
}

}  // namespace aassim
