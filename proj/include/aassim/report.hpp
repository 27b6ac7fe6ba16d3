#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "aassim/eval.hpp"
#include "aassim/protocol.hpp"
#include "aassim/rates.hpp"

namespace aassim {

/// Structured records for files and stdout. All emitters are deterministic:
/// insertion-ordered JSON, no timestamps, no environment-dependent fields.
nlohmann::ordered_json plan_to_json(const RatePlan& plan);
nlohmann::ordered_json transcript_to_json(const Transcript& transcript,
                                          bool reveal_secrets);
nlohmann::ordered_json run_to_json(const TimelineRun& run, bool reveal_secrets);
nlohmann::ordered_json reliability_to_json(const ReliabilityReport& report);
nlohmann::ordered_json secrecy_cells_to_json(
    const std::vector<SecrecyCell>& cells, int n);

std::string reliability_csv_header();
std::string reliability_csv_rows(const ReliabilityReport& report);
std::string secrecy_csv_header();
std::string secrecy_csv_rows(const std::vector<SecrecyCell>& cells, int n);

/// Digest of the secret digit sequence, for transcripts that do not reveal
/// secrets. Not cryptographic.
std::uint64_t secret_commitment(const std::vector<std::uint64_t>& digits);

}  // namespace aassim
