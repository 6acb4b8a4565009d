#pragma once

#include "publist/ingest.hpp"
#include "publist/json_io.hpp"
#include "publist/merge.hpp"
#include "publist/model.hpp"
#include "publist/stylometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace publist {

enum class Tier { accepted, uncertain, rejected, human_accepted, human_rejected };

std::string_view to_string(Tier t);
/// Case-insensitive; accepts "uncertain" as well as "UNCERTAIN".
std::optional<Tier> parse_tier(std::string_view s);

struct CandidateAssignment {
  std::string record_id;
  PerDimension<std::optional<double>> components{};
  PerDimension<double> weights_used{};  // zero on absent dimensions
  double combined = 0.0;
  Tier tier = Tier::uncertain;
  std::optional<int> inclusion_round;
  std::vector<std::string> evidence;

  std::size_t present_count() const;
  bool operator==(const CandidateAssignment&) const = default;
};

enum class Decision { accept, reject };
std::string_view to_string(Decision d);
std::optional<Decision> parse_decision(std::string_view s);

struct DecisionEntry {
  std::string record_id;
  Decision decision = Decision::accept;
  std::string note;
  std::string timestamp;  // ISO-8601 UTC; empty in deterministic mode
  bool override_auto = false;
};

struct RescoreChange {
  std::string record_id;
  double old_combined = 0.0;
  double new_combined = 0.0;
  Tier old_tier = Tier::uncertain;
  Tier new_tier = Tier::uncertain;
  CandidateAssignment assignment;  // full state after the decision
};

using RescoreDelta = std::vector<RescoreChange>;

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request conflicts with session state (not yet run, stale revision,
/// decision on an automatic tier without override).
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Session {
  std::string session_id;
  std::uint64_t revision = 0;
  Config config;
  ResearcherProfile input_profile;  // as supplied, before any run or decision
  std::vector<SourceTag> sources;
  std::vector<PublicationRecord> records;  // as ingested, all sources
  std::optional<std::vector<PublicationRecord>> gold;  // external publication list

  // Run state.
  bool scored = false;
  std::vector<merge::MergeCluster> clusters;
  std::map<std::string, PublicationRecord> canonical;  // by record_id
  ResearcherProfile profile;                           // effective, with derived signature
  std::vector<stylometry::StyleVector> style_corpus;
  std::set<std::string> seeds;
  std::map<std::string, int> inclusion;  // record_id -> round
  std::vector<std::string> pool;
  std::map<std::string, CandidateAssignment> assignments;
  std::vector<DecisionEntry> decisions;

  /// Adds a source or confirms an identical one; throws ValidationError when
  /// the id or trust rank clashes.
  void register_source(const SourceTag& source);
};

/// Validates inputs, deduplicates, and scores. Throws ValidationError on any
/// invariant violation. Clears earlier run state and decisions.
void run_session(Session& s);

/// Re-runs from the ingested records and re-applies the decision log.
void replay(Session& s);

/// Resolves a record id to its canonical id via cluster membership.
std::optional<std::string> resolve_record_id(const Session& s, const std::string& id);

void to_json(json& j, const CandidateAssignment& a);
void from_json(const json& j, CandidateAssignment& a);
void to_json(json& j, const DecisionEntry& d);
void from_json(const json& j, DecisionEntry& d);
void to_json(json& j, const RescoreChange& c);

/// Pool size and per-tier counts.
json run_summary(const Session& s);

}  // namespace publist

namespace publist::merge {
void to_json(json& j, const MergeCluster& c);
void from_json(const json& j, MergeCluster& c);
}  // namespace publist::merge

namespace publist::ingest {
void to_json(json& j, const Violation& v);
void to_json(json& j, const IngestReport& r);
}  // namespace publist::ingest
