#include "publist/session.hpp"

#include "publist/disambiguate.hpp"
#include "publist/text.hpp"

#include <algorithm>

namespace publist {

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::accepted: return "ACCEPTED";
    case Tier::uncertain: return "UNCERTAIN";
    case Tier::rejected: return "REJECTED";
    case Tier::human_accepted: return "HUMAN_ACCEPTED";
    case Tier::human_rejected: return "HUMAN_REJECTED";
  }
  return "UNCERTAIN";
}

std::optional<Tier> parse_tier(std::string_view s) {
  const auto v = text::fold_lower(text::trim(s));
  for (auto t : {Tier::accepted, Tier::uncertain, Tier::rejected, Tier::human_accepted, Tier::human_rejected})
    if (text::fold_lower(to_string(t)) == v) return t;
  return std::nullopt;
}

std::size_t CandidateAssignment::present_count() const {
  return static_cast<std::size_t>(std::count_if(weights_used.begin(), weights_used.end(), [](double w) { return w > 0.0; }));
}

std::string_view to_string(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

std::optional<Decision> parse_decision(std::string_view s) {
  const auto v = text::fold_lower(text::trim(s));
  if (v == "accept") return Decision::accept;
  if (v == "reject") return Decision::reject;
  return std::nullopt;
}

void Session::register_source(const SourceTag& source) {
  if (source.source_id.empty()) throw ValidationError("source_id must be non-empty");
  if (source.trust_rank < 0) throw ValidationError("trust_rank must be non-negative");
  for (const auto& s : sources) {
    if (s.source_id == source.source_id) {
      if (s.trust_rank != source.trust_rank)
        throw ValidationError("source " + source.source_id + " already registered with trust_rank " +
                              std::to_string(s.trust_rank));
      return;
    }
    if (s.trust_rank == source.trust_rank)
      throw ValidationError("trust_rank " + std::to_string(source.trust_rank) + " already used by " + s.source_id);
  }
  sources.push_back(source);
}

std::optional<std::string> resolve_record_id(const Session& s, const std::string& id) {
  if (s.canonical.count(id)) return id;
  for (const auto& c : s.clusters)
    if (c.member_ids.count(id)) return c.canonical.record_id;
  return std::nullopt;
}

void run_session(Session& s) {
  std::vector<std::string> problems;
  for (auto& v : validate_config(s.config)) problems.push_back("config: " + v);
  for (auto& v : validate_profile(s.input_profile)) problems.push_back("profile: " + v);
  for (auto& v : validate_sources(s.sources)) problems.push_back("sources: " + v);
  const int year = current_year();
  for (const auto& r : s.records)
    for (auto& v : validate_record(r, year)) problems.push_back("record " + r.record_id + ": " + v);
  if (!problems.empty()) throw ValidationError(text::join(problems, "; "));

  s.clusters = merge::dedup(s.records, s.config);
  s.canonical.clear();
  for (auto& c : s.clusters) {
    auto [it, fresh] = s.canonical.emplace(c.canonical.record_id, c.canonical);
    if (!fresh) c.conflicts.push_back("record_id shared with an unrelated cluster; first cluster kept for scoring");
  }
  s.decisions.clear();
  s.scored = true;
  disambiguate::score_all(s);
}

void replay(Session& s) {
  auto log = s.decisions;
  run_session(s);
  for (const auto& d : log) disambiguate::apply_decision(s, d.record_id, d.decision, d.note, d.override_auto, d.timestamp);
}

namespace {

json components_json(const PerDimension<std::optional<double>>& c) {
  json j = json::object();
  for (auto d : kDimensions) {
    const auto& v = c[index(d)];
    j[std::string(to_string(d))] = v ? json(*v) : json(nullptr);
  }
  return j;
}

}  // namespace

void to_json(json& j, const CandidateAssignment& a) {
  json weights = json::object();
  for (auto d : kDimensions) weights[std::string(to_string(d))] = a.weights_used[index(d)];
  j = json{{"record_id", a.record_id},
           {"components", components_json(a.components)},
           {"weights_used", weights},
           {"combined", a.combined},
           {"tier", std::string(to_string(a.tier))},
           {"inclusion_round", a.inclusion_round ? json(*a.inclusion_round) : json(nullptr)},
           {"evidence", a.evidence}};
}

void from_json(const json& j, CandidateAssignment& a) {
  a = CandidateAssignment{};
  a.record_id = j.at("record_id").get<std::string>();
  for (auto d : kDimensions) {
    const auto name = std::string(to_string(d));
    if (auto it = j.at("components").find(name); it != j.at("components").end() && !it->is_null())
      a.components[index(d)] = it->get<double>();
    a.weights_used[index(d)] = j.at("weights_used").value(name, 0.0);
  }
  a.combined = j.at("combined").get<double>();
  auto tier = parse_tier(j.at("tier").get<std::string>());
  if (!tier) throw ValidationError("unknown tier " + j.at("tier").dump());
  a.tier = *tier;
  if (auto it = j.find("inclusion_round"); it != j.end() && !it->is_null()) a.inclusion_round = it->get<int>();
  a.evidence = j.value("evidence", std::vector<std::string>{});
}

void to_json(json& j, const DecisionEntry& d) {
  j = json{{"record_id", d.record_id},
           {"decision", std::string(to_string(d.decision))},
           {"note", d.note},
           {"timestamp", d.timestamp},
           {"override", d.override_auto}};
}

void from_json(const json& j, DecisionEntry& d) {
  d.record_id = j.at("record_id").get<std::string>();
  auto decision = parse_decision(j.at("decision").get<std::string>());
  if (!decision) throw ValidationError("unknown decision " + j.at("decision").dump());
  d.decision = *decision;
  d.note = j.value("note", std::string());
  d.timestamp = j.value("timestamp", std::string());
  d.override_auto = j.value("override", false);
}

void to_json(json& j, const RescoreChange& c) {
  j = json{{"record_id", c.record_id},
           {"old_combined", c.old_combined},
           {"new_combined", c.new_combined},
           {"old_tier", std::string(to_string(c.old_tier))},
           {"new_tier", std::string(to_string(c.new_tier))},
           {"assignment", c.assignment}};
}

json run_summary(const Session& s) {
  json tiers = json::object();
  for (auto t : {Tier::accepted, Tier::uncertain, Tier::rejected, Tier::human_accepted, Tier::human_rejected})
    tiers[std::string(to_string(t))] = 0;
  for (const auto& [id, a] : s.assignments) tiers[std::string(to_string(a.tier))] = tiers[std::string(to_string(a.tier))].get<int>() + 1;
  return json{{"records", s.records.size()}, {"clusters", s.clusters.size()}, {"pool_size", s.pool.size()}, {"tiers", tiers}};
}

}  // namespace publist

namespace publist::merge {

void to_json(json& j, const MergeCluster& c) {
  j = json{{"member_ids", c.member_ids},
           {"canonical", c.canonical},
           {"field_provenance", c.field_provenance},
           {"conflicts", c.conflicts}};
}

void from_json(const json& j, MergeCluster& c) {
  c.member_ids = j.at("member_ids").get<std::set<std::string>>();
  c.canonical = j.at("canonical").get<PublicationRecord>();
  c.field_provenance = j.value("field_provenance", std::map<std::string, std::vector<std::string>>{});
  c.conflicts = j.value("conflicts", std::vector<std::string>{});
}

}  // namespace publist::merge

namespace publist::ingest {

void to_json(json& j, const Violation& v) {
  j = json{{"first_line", v.first_line}, {"last_line", v.last_line}, {"message", v.message}};
}

void to_json(json& j, const IngestReport& r) {
  j = json{{"source_id", r.source_id},
           {"records_parsed", r.records_parsed},
           {"records_rejected", r.records_rejected},
           {"violations", r.violations}};
}

}  // namespace publist::ingest
