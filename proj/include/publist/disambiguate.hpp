#pragma once

#include "publist/model.hpp"
#include "publist/session.hpp"
#include "publist/stylometry.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace publist::disambiguate {

using RecordIndex = std::map<std::string, PublicationRecord>;
using CoauthorSets = std::map<std::string, std::set<std::string>>;

/// Records with an author whose K2 key equals some variant's K2 key, in input order.
std::vector<std::string> candidate_pool(std::span<const PublicationRecord> records, const ResearcherProfile& profile);
bool in_pool(const PublicationRecord& record, const ResearcherProfile& profile);

struct AddressMatch {
  double score = 0.0;
  std::size_t key_index = 0;  // into profile.trajectory
  std::string address;
};

std::optional<AddressMatch> best_address_match(const PublicationRecord& record, const ResearcherProfile& profile);
std::optional<double> address_score(const PublicationRecord& record, const ResearcherProfile& profile);

/// K2 keys of the record's authors, variant keys removed.
std::set<std::string> coauthor_keys(const PublicationRecord& record, const ResearcherProfile& profile);
std::optional<double> coauthor_score(const PublicationRecord& record, const ResearcherProfile& profile);

/// Fingerprint tokens of keywords and venue.
std::set<std::string> subject_tokens(const PublicationRecord& record);
std::optional<double> subject_score(const PublicationRecord& record, const ResearcherProfile& profile);

std::optional<double> citedref_score(const PublicationRecord& record, const ResearcherProfile& profile);

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

struct Combination {
  double combined = 0.0;
  PerDimension<double> weights_used{};
};

/// Redistributes the weight of absent (or zero-weighted) dimensions over the
/// present ones.
Combination combine(const PerDimension<std::optional<double>>& components, const PerDimension<double>& weights);

Tier assign_tier(const CandidateAssignment& assignment, const Config& cfg);

std::set<std::string> select_seeds(std::span<const PublicationRecord> pool, const ResearcherProfile& profile, const Config& cfg);

/// Synchronous rounds of co-author closure from the seeds. Returns the round
/// in which each record entered (seeds at 0).
std::map<std::string, int> recursive_coauthor_inclusion(const std::set<std::string>& seeds, const CoauthorSets& pool,
                                                        int k, int max_rounds);

/// Recomputes the profile's derived fields and the style corpus from the
/// accepted records.
void refresh_signature(ResearcherProfile& profile, const RecordIndex& records, const Config& cfg,
                       std::vector<stylometry::StyleVector>& style_corpus);

/// Components, combination and evidence for one record; tier left UNCERTAIN.
CandidateAssignment score_record(const PublicationRecord& record, const ResearcherProfile& profile,
                                 std::span<const stylometry::StyleVector> style_corpus, const Config& cfg);

/// Scores the session's canonical records. Requires canonical records to be
/// present; fills pool, seeds, inclusion, profile and assignments.
std::vector<CandidateAssignment> score_all(Session& session);

/// Applies a curator decision and rescores the remaining UNCERTAIN records.
/// Throws NotFoundError for unknown ids, ConflictError for automatic tiers
/// without override.
RescoreDelta apply_decision(Session& session, const std::string& record_id, Decision decision, const std::string& note,
                            bool override_auto = false, const std::string& timestamp = {});

}  // namespace publist::disambiguate
