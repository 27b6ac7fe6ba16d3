#include "aassim/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "aassim/rng.hpp"

namespace aassim {

using json = nlohmann::ordered_json;

namespace {

json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

const char* status_name(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::kSuccess: return "success";
    case DecodeStatus::kNoCandidate: return "no_candidate";
    case DecodeStatus::kAmbiguous: return "ambiguous";
  }
  return "unknown";
}

std::string csv_double(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// Set fields carry commas, so they are always quoted.
std::string csv_set(std::uint32_t mask) { return '"' + format_set(mask) + '"'; }

}  // namespace

json plan_to_json(const RatePlan& plan) {
  json steps = json::array();
  for (const PlanStep& s : plan.steps) {
    json step;
    step["t"] = s.t;
    step["k"] = s.k;
    step["sigma"] = s.sigma;
    step["message_rate"] = s.message_rate;
    step["secret_rate"] = s.secret_rate;
    step["max_authorized_entropy"] = s.max_authorized_entropy;
    step["min_unauthorized_entropy"] =
        finite_or_null(s.min_unauthorized_entropy);
    step["argmax_authorized"] = members_from_mask(s.argmax_authorized);
    step["argmin_unauthorized"] = members_from_mask(s.argmin_unauthorized);
    step["zero_rate"] = s.zero_rate;
    step["strict_secrecy_margin_ok"] = s.strict_secrecy_margin_ok;
    step["warnings"] = s.warnings;
    steps.push_back(std::move(step));
  }
  json doc;
  doc["epsilon"] = plan.epsilon;
  doc["delta"] = plan.delta;
  doc["binning_count"] = plan.binning_count;
  doc["cumulative_message_rate"] = plan.cumulative_message_rate();
  doc["steps"] = std::move(steps);
  return doc;
}

std::uint64_t secret_commitment(const std::vector<std::uint64_t>& digits) {
  std::uint64_t state = rng::mix64(static_cast<std::uint64_t>(digits.size()));
  state = rng::absorb(state, static_cast<std::uint64_t>(rng::Domain::kCommitment));
  for (std::uint64_t d : digits) state = rng::absorb(state, d);
  return state;
}

json transcript_to_json(const Transcript& transcript, bool reveal_secrets) {
  json steps = json::array();
  for (const StepOutput& s : transcript.steps) {
    json step;
    step["step"] = s.t;
    step["k"] = s.k;
    step["sigma"] = s.sigma;
    step["m_t"] = s.message;
    step["s_t_commitment"] = secret_commitment(s.secret);
    if (reveal_secrets) step["s_t"] = s.secret;
    steps.push_back(std::move(step));
  }
  json doc;
  doc["n"] = transcript.n;
  doc["epsilon"] = transcript.epsilon;
  doc["binning_seed"] = transcript.binning_seed;
  doc["sample_seed"] = transcript.sample_seed;
  doc["steps"] = std::move(steps);
  return doc;
}

json run_to_json(const TimelineRun& run, bool reveal_secrets) {
  json doc = transcript_to_json(run.transcript, reveal_secrets);
  json decodes = json::array();
  for (const GroupDecodeRecord& r : run.decodes) {
    json record;
    record["t"] = r.t;
    record["group"] = members_from_mask(r.group_mask);
    record["status"] = status_name(r.status);
    record["sequence_correct"] = r.sequence_correct;
    record["secret_correct"] = r.secret_correct;
    decodes.push_back(std::move(record));
  }
  doc["decode_results"] = std::move(decodes);
  return doc;
}

json reliability_to_json(const ReliabilityReport& report) {
  json cells = json::array();
  for (const ReliabilityCell& c : report.cells) {
    json cell;
    cell["t"] = c.t;
    cell["group"] = members_from_mask(c.group_mask);
    cell["trials"] = c.trials;
    cell["secret_failures"] = c.secret_failures;
    cell["sequence_failures"] = c.sequence_failures;
    cell["error_rate"] = c.secret_failure_rate();
    cell["ci95_halfwidth"] = binomial_halfwidth95(c.secret_failures, c.trials);
    cell["no_candidate"] = c.no_candidate;
    cell["ambiguous"] = c.ambiguous;
    cell["wrong_sequence"] = c.wrong_sequence;
    cells.push_back(std::move(cell));
  }
  json doc;
  doc["n"] = report.n;
  doc["dominance_violations"] = report.dominance_violations;
  doc["cells"] = std::move(cells);
  return doc;
}

json secrecy_cells_to_json(const std::vector<SecrecyCell>& cells, int n) {
  json rows = json::array();
  double worst_tv = -1.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const SecrecyCell& c = cells[i];
    if (c.tv_uniform_product > worst_tv) {
      worst_tv = c.tv_uniform_product;
      worst = i;
    }
    json row;
    row["t"] = c.t;
    row["U"] = members_from_mask(c.u_mask);
    row["method"] = c.method;
    row["samples"] = c.samples;
    row["tv_to_uniform_product"] = c.tv_uniform_product;
    row["mi_estimate"] = c.mi_bits;
    row["uniformity_gap"] = c.uniformity_gap_bits;
    rows.push_back(std::move(row));
  }
  json doc;
  doc["n"] = n;
  doc["worst_row"] = cells.empty() ? json(nullptr) : json(worst);
  doc["cells"] = std::move(rows);
  return doc;
}

std::string reliability_csv_header() {
  return "n,t,group,trials,error_rate,ci95_halfwidth,sequence_failures,"
         "no_candidate,ambiguous,wrong_sequence\n";
}

std::string reliability_csv_rows(const ReliabilityReport& report) {
  std::ostringstream out;
  for (const ReliabilityCell& c : report.cells) {
    out << report.n << ',' << c.t << ',' << csv_set(c.group_mask) << ','
        << c.trials << ',' << csv_double(c.secret_failure_rate()) << ','
        << csv_double(binomial_halfwidth95(c.secret_failures, c.trials)) << ','
        << c.sequence_failures << ',' << c.no_candidate << ',' << c.ambiguous
        << ',' << c.wrong_sequence << '\n';
  }
  return out.str();
}

std::string secrecy_csv_header() {
  return "n,t,U,method,samples,tv_to_uniform_product,mi_estimate,"
         "uniformity_gap\n";
}

std::string secrecy_csv_rows(const std::vector<SecrecyCell>& cells, int n) {
  std::ostringstream out;
  for (const SecrecyCell& c : cells) {
    out << n << ',' << c.t << ',' << csv_set(c.u_mask) << ',' << c.method
        << ',' << c.samples << ',' << csv_double(c.tv_uniform_product) << ','
        << csv_double(c.mi_bits) << ',' << csv_double(c.uniformity_gap_bits)
        << '\n';
  }
  return out.str();
}

}  // namespace aassim
