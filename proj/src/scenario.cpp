#include "aassim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace aassim {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioParseError(where + ": " + what);
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) fail(key, "missing field");
  return doc.at(key);
}

int require_int(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<int>();
}

double parse_probability(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "probabilities must be decimal strings");
  const std::string& text = v.get_ref<const std::string&>();
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) fail(where, "trailing characters in '" + text + "'");
    return value;
  } catch (const std::logic_error&) {
    fail(where, "not a decimal number: '" + text + "'");
  }
}

std::vector<std::uint32_t> parse_set_list(const json& v, int L,
                                          const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of participant sets");
  std::vector<std::uint32_t> masks;
  for (const json& set : v) {
    if (!set.is_array()) fail(where, "each set is an array of participants");
    std::vector<int> members;
    for (const json& m : set) {
      if (!m.is_number_integer()) fail(where, "participants are integers");
      members.push_back(m.get<int>());
    }
    try {
      masks.push_back(mask_from_members(members, L));
    } catch (const std::out_of_range& e) {
      fail(where, e.what());
    }
  }
  return masks;
}

json set_list_to_json(const std::vector<std::uint32_t>& masks) {
  json out = json::array();
  for (std::uint32_t m : masks) out.push_back(members_from_mask(m));
  return out;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(e.what());
  }
  if (!doc.is_object()) fail("document", "top level must be an object");

  Scenario sc;
  sc.participant_count = require_int(doc, "L");
  if (sc.participant_count < 1 || sc.participant_count > kMaxParticipants)
    fail("L", "must be in [1," + std::to_string(kMaxParticipants) + "]");

  const json& source = require(doc, "source");
  if (source.contains("keys")) {
    const json& keys = source.at("keys");
    sc.keys_alphabet = static_cast<std::uint32_t>(require_int(keys, "alphabet"));
    if (keys.contains("L") && keys.at("L").get<int>() != sc.participant_count)
      fail("source.keys.L", "inconsistent with top-level L");
  } else if (source.contains("pmf")) {
    const json& pmf = source.at("pmf");
    PmfSpec spec;
    spec.alphabet_y = static_cast<std::uint32_t>(require_int(pmf, "alphabet_y"));
    for (const json& c : require(pmf, "alphabets_x")) {
      if (!c.is_number_integer()) fail("source.pmf.alphabets_x", "integers");
      spec.alphabets_x.push_back(c.get<std::uint32_t>());
    }
    if (static_cast<int>(spec.alphabets_x.size()) != sc.participant_count)
      fail("source.pmf.alphabets_x", "needs one alphabet per participant");
    for (const json& p : require(pmf, "probabilities")) {
      parse_probability(p, "source.pmf.probabilities");
      spec.probabilities.push_back(p.get<std::string>());
    }
    sc.pmf = std::move(spec);
  } else {
    fail("source", "needs either 'keys' or 'pmf'");
  }

  const json& timeline = require(doc, "timeline");
  if (timeline.contains("threshold")) {
    const json& th = timeline.at("threshold");
    ThresholdParams params;
    for (const json& v : require(th, "f1")) params.f1.push_back(v.get<int>());
    for (const json& v : require(th, "f2")) params.f2.push_back(v.get<int>());
    if (params.f1.size() != params.f2.size() || params.f1.empty())
      fail("timeline.threshold", "f1 and f2 need equal non-zero lengths");
    sc.threshold = std::move(params);
  } else if (timeline.contains("events")) {
    std::vector<StepEvents> steps;
    const json& events = timeline.at("events");
    if (!events.is_array() || events.empty())
      fail("timeline.events", "expected a non-empty array of steps");
    for (std::size_t t = 0; t < events.size(); ++t) {
      StepEvents step;
      step.newly_authorized = parse_set_list(
          events[t], sc.participant_count,
          "timeline.events[" + std::to_string(t) + "]");
      steps.push_back(std::move(step));
    }
    sc.events = std::move(steps);
  } else {
    fail("timeline", "needs either 'threshold' or 'events'");
  }

  const json& unauthorized = require(doc, "unauthorized");
  if (unauthorized.is_string()) {
    if (unauthorized.get<std::string>() != "complement")
      fail("unauthorized", "expected \"complement\" or {\"explicit\": ...}");
  } else if (unauthorized.is_object() && unauthorized.contains("explicit")) {
    if (!sc.events.has_value())
      fail("unauthorized.explicit", "only usable with an events timeline");
    const json& steps = unauthorized.at("explicit");
    if (!steps.is_array() || steps.size() != sc.events->size())
      fail("unauthorized.explicit", "needs one family per step");
    for (std::size_t t = 0; t < steps.size(); ++t)
      (*sc.events)[t].explicit_unauthorized = parse_set_list(
          steps[t], sc.participant_count,
          "unauthorized.explicit[" + std::to_string(t) + "]");
  } else {
    fail("unauthorized", "expected \"complement\" or {\"explicit\": ...}");
  }

  for (const json& v : require(doc, "n")) {
    if (!v.is_number_integer() || v.get<int>() < 1)
      fail("n", "block lengths are integers >= 1");
    sc.block_lengths.push_back(v.get<int>());
  }
  if (sc.block_lengths.empty()) fail("n", "needs at least one block length");

  const json& eps = require(doc, "epsilon");
  if (!eps.is_number() || eps.get<double>() <= 0.0)
    fail("epsilon", "must be a number > 0");
  sc.epsilon = eps.get<double>();

  if (doc.contains("margins")) {
    const json& margins = doc.at("margins");
    if (margins.contains("delta") && !margins.at("delta").is_null())
      sc.margins.delta = margins.at("delta").get<double>();
    if (margins.contains("secrecy_margin_multiplier"))
      sc.margins.secrecy_margin_multiplier =
          margins.at("secrecy_margin_multiplier").get<double>();
    if (sc.margins.secrecy_margin_multiplier < 1.0)
      fail("margins.secrecy_margin_multiplier", "must be >= 1");
  }

  if (doc.contains("seeds")) {
    const json& seeds = doc.at("seeds");
    if (seeds.contains("binning"))
      sc.binning_seed = seeds.at("binning").get<std::uint64_t>();
    if (seeds.contains("sampling"))
      sc.sampling_seed = seeds.at("sampling").get<std::uint64_t>();
  }
  if (doc.contains("trials")) {
    sc.trials = doc.at("trials").get<std::uint64_t>();
    if (sc.trials < 1) fail("trials", "must be >= 1");
  }
  if (doc.contains("budget")) {
    sc.budget = doc.at("budget").get<double>();
    if (sc.budget <= 0) fail("budget", "must be > 0");
  }
  if (doc.contains("reveal_secrets"))
    sc.reveal_secrets = doc.at("reveal_secrets").get<bool>();

  if (doc.contains("audit_witnesses"))
    sc.audit_witnesses = parse_set_list(doc.at("audit_witnesses"),
                                        sc.participant_count,
                                        "audit_witnesses");

  if (doc.contains("plan_override")) {
    const json& po = doc.at("plan_override");
    PlanOverride ov;
    for (const json& v : require(po, "k")) ov.k.push_back(v.get<int>());
    for (const json& v : require(po, "sigma")) ov.sigma.push_back(v.get<int>());
    if (ov.k.size() != ov.sigma.size())
      fail("plan_override", "k and sigma need equal lengths");
    sc.plan_override = std::move(ov);
  }

  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

std::string normalized_scenario(const Scenario& sc) {
  json doc;
  doc["L"] = sc.participant_count;

  json source;
  if (sc.keys_alphabet.has_value()) {
    source["keys"] = {{"L", sc.participant_count},
                      {"alphabet", *sc.keys_alphabet}};
  } else {
    json pmf;
    pmf["alphabet_y"] = sc.pmf->alphabet_y;
    pmf["alphabets_x"] = sc.pmf->alphabets_x;
    pmf["probabilities"] = sc.pmf->probabilities;
    source["pmf"] = std::move(pmf);
  }
  doc["source"] = std::move(source);

  json timeline;
  if (sc.threshold.has_value()) {
    timeline["threshold"] = {{"f1", sc.threshold->f1},
                             {"f2", sc.threshold->f2}};
  } else {
    json events = json::array();
    for (const StepEvents& step : *sc.events)
      events.push_back(set_list_to_json(step.newly_authorized));
    timeline["events"] = std::move(events);
  }
  doc["timeline"] = std::move(timeline);

  bool any_explicit =
      sc.events.has_value() &&
      std::any_of(sc.events->begin(), sc.events->end(), [](const StepEvents& s) {
        return s.explicit_unauthorized.has_value();
      });
  if (any_explicit) {
    json steps = json::array();
    for (const StepEvents& step : *sc.events)
      steps.push_back(step.explicit_unauthorized.has_value()
                          ? set_list_to_json(*step.explicit_unauthorized)
                          : json::array());
    doc["unauthorized"] = {{"explicit", std::move(steps)}};
  } else {
    doc["unauthorized"] = "complement";
  }

  doc["n"] = sc.block_lengths;
  doc["epsilon"] = sc.epsilon;
  json margins;
  margins["delta"] =
      sc.margins.delta.has_value() ? json(*sc.margins.delta) : json(nullptr);
  margins["secrecy_margin_multiplier"] = sc.margins.secrecy_margin_multiplier;
  doc["margins"] = std::move(margins);
  doc["seeds"] = {{"binning", sc.binning_seed}, {"sampling", sc.sampling_seed}};
  doc["trials"] = sc.trials;
  doc["budget"] = sc.budget;
  doc["reveal_secrets"] = sc.reveal_secrets;
  if (sc.audit_witnesses.has_value())
    doc["audit_witnesses"] = set_list_to_json(*sc.audit_witnesses);
  if (sc.plan_override.has_value())
    doc["plan_override"] = {{"k", sc.plan_override->k},
                            {"sigma", sc.plan_override->sigma}};

  return doc.dump(2) + "\n";
}

JointSource build_source(const Scenario& sc) {
  if (sc.keys_alphabet.has_value())
    return make_keys_source(sc.participant_count, *sc.keys_alphabet);

  const PmfSpec& spec = *sc.pmf;
  JointSource src;
  src.participant_count = sc.participant_count;
  src.dealer_card = spec.alphabet_y;
  src.participant_cards = spec.alphabets_x;

  std::size_t cells = spec.alphabet_y;
  for (std::uint32_t c : spec.alphabets_x) cells *= c;
  if (cells > kDefaultTableBudget)
    throw BudgetExceeded(static_cast<double>(cells),
                         static_cast<double>(kDefaultTableBudget),
                         "source table");
  if (spec.probabilities.size() != cells)
    throw ScenarioParseError("source.pmf.probabilities: expected " +
                             std::to_string(cells) + " entries, got " +
                             std::to_string(spec.probabilities.size()));
  src.pmf.reserve(cells);
  for (const std::string& p : spec.probabilities)
    src.pmf.push_back(std::stod(p));

  // Semantic violations are validation failures, not parse failures.
  const ValidationReport report = validate_source(src);
  if (!report.ok())
    throw std::invalid_argument(report.first_error().code + ": " +
                                report.first_error().message);
  return src;
}

AASTimeline build_timeline(const Scenario& sc) {
  if (sc.threshold.has_value())
    return taas_timeline(sc.participant_count, *sc.threshold);
  return aas_from_events(sc.participant_count, *sc.events);
}

RatePlan build_plan(const Scenario& sc, const JointSource& src,
                    const AASTimeline& timeline, const BinningFamily& family) {
  RatePlan plan = plan_timeline(src, timeline, sc.epsilon, sc.margins, family);
  if (!sc.plan_override.has_value()) return plan;

  const PlanOverride& ov = *sc.plan_override;
  if (ov.k.size() != plan.steps.size())
    throw ScenarioParseError("plan_override: needs one entry per step");
  int k_prev = 0;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    PlanStep& step = plan.steps[i];
    if (ov.k[i] < k_prev || ov.k[i] > family.binning_count ||
        ov.sigma[i] < 0 || ov.sigma[i] > family.binning_count)
      throw ScenarioParseError("plan_override: step " + std::to_string(i + 1) +
                               " violates 0 <= k_prev <= k <= b");
    step.k = ov.k[i];
    step.sigma = ov.sigma[i];
    step.message_rate = static_cast<double>(step.k - k_prev) * sc.epsilon;
    step.secret_rate = static_cast<double>(step.sigma) * sc.epsilon;
    step.zero_rate = (step.sigma == 0);
    step.warnings.push_back("PlanOverride");
    k_prev = step.k;
  }
  return plan;
}

}  // namespace aassim
