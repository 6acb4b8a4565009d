#include "publist/disambiguate.hpp"

#include "publist/ingest.hpp"
#include "publist/text.hpp"

#include <algorithm>
#include <cstdio>

namespace publist::disambiguate {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string signed_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.3f", v);
  return buf;
}

std::set<std::string> variant_k2(const ResearcherProfile& profile) {
  std::set<std::string> keys;
  for (const auto& v : profile.variants) keys.insert(ingest::k2_key(v));
  return keys;
}

std::set<std::string> variant_k1(const ResearcherProfile& profile) {
  std::set<std::string> keys;
  for (const auto& v : profile.variants) keys.insert(ingest::match_keys(v).k1);
  return keys;
}

std::set<std::string> intersection(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool contains_sequence(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

bool year_in_window(int year, const AddressKey& key) {
  if (key.year_start && year < *key.year_start - 1) return false;
  if (key.year_end && year > *key.year_end + 2) return false;
  return true;
}

}  // namespace

bool in_pool(const PublicationRecord& record, const ResearcherProfile& profile) {
  const auto keys = variant_k2(profile);
  return std::any_of(record.authors.begin(), record.authors.end(),
                     [&](const AuthorName& a) { return keys.count(ingest::k2_key(a)) > 0; });
}

std::vector<std::string> candidate_pool(std::span<const PublicationRecord> records, const ResearcherProfile& profile) {
  std::vector<std::string> pool;
  for (const auto& r : records)
    if (in_pool(r, profile)) pool.push_back(r.record_id);
  return pool;
}

std::optional<AddressMatch> best_address_match(const PublicationRecord& record, const ResearcherProfile& profile) {
  if (record.addresses.empty() || profile.trajectory.empty()) return std::nullopt;
  std::optional<AddressMatch> best;
  for (const auto& address : record.addresses) {
    const auto tokens = text::alnum_tokens(text::fold_lower(address));
    const std::set<std::string> token_set(tokens.begin(), tokens.end());
    for (std::size_t ki = 0; ki < profile.trajectory.size(); ++ki) {
      const auto& key = profile.trajectory[ki];
      double org = 0.0;
      if (!key.org_tokens.empty())
        org = static_cast<double>(intersection(key.org_tokens, token_set).size()) / static_cast<double>(key.org_tokens.size());
      double city = 0.0;
      if (key.city && contains_sequence(tokens, text::alnum_tokens(*key.city))) city = 1.0;
      double score = 0.7 * org + 0.3 * city;
      const bool has_years = key.year_start || key.year_end;
      if (has_years && !year_in_window(record.year, key)) score *= 0.5;
      if (!best || score > best->score) best = AddressMatch{score, ki, address};
    }
  }
  return best;
}

std::optional<double> address_score(const PublicationRecord& record, const ResearcherProfile& profile) {
  auto m = best_address_match(record, profile);
  if (!m) return std::nullopt;
  return m->score;
}

std::set<std::string> coauthor_keys(const PublicationRecord& record, const ResearcherProfile& profile) {
  const auto own = variant_k2(profile);
  std::set<std::string> keys;
  for (const auto& a : record.authors) {
    auto k = ingest::k2_key(a);
    if (!own.count(k)) keys.insert(std::move(k));
  }
  return keys;
}

std::optional<double> coauthor_score(const PublicationRecord& record, const ResearcherProfile& profile) {
  const auto keys = coauthor_keys(record, profile);
  if (keys.empty()) return std::nullopt;
  return static_cast<double>(intersection(keys, profile.coauthor_keys).size()) / static_cast<double>(keys.size());
}

std::set<std::string> subject_tokens(const PublicationRecord& record) {
  std::set<std::string> tokens;
  for (const auto& k : record.keywords)
    for (auto& t : fingerprint_tokens(k)) tokens.insert(std::move(t));
  if (record.venue)
    for (auto& t : fingerprint_tokens(*record.venue)) tokens.insert(std::move(t));
  return tokens;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  const auto shared = intersection(a, b).size();
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

std::optional<double> subject_score(const PublicationRecord& record, const ResearcherProfile& profile) {
  const auto tokens = subject_tokens(record);
  if (tokens.empty() || profile.subject_vocab.empty()) return std::nullopt;
  return jaccard(tokens, profile.subject_vocab);
}

std::optional<double> citedref_score(const PublicationRecord& record, const ResearcherProfile& profile) {
  if (!record.cited_refs || record.cited_refs->empty() || profile.accepted_refs.empty()) return std::nullopt;
  const std::set<std::string> refs(record.cited_refs->begin(), record.cited_refs->end());
  return jaccard(refs, profile.accepted_refs);
}

Combination combine(const PerDimension<std::optional<double>>& components, const PerDimension<double>& weights) {
  Combination out;
  double total = 0.0;
  for (auto d : kDimensions)
    if (components[index(d)] && weights[index(d)] > 0.0) total += weights[index(d)];
  if (!(total > 0.0)) return out;
  for (auto d : kDimensions) {
    const auto i = index(d);
    if (!components[i] || !(weights[i] > 0.0)) continue;
    out.weights_used[i] = weights[i] / total;
    out.combined += out.weights_used[i] * *components[i];
  }
  out.combined = std::clamp(out.combined, 0.0, 1.0);
  return out;
}

Tier assign_tier(const CandidateAssignment& a, const Config& cfg) {
  if (a.present_count() < 2) return Tier::uncertain;
  if (a.combined >= cfg.tau_hi) return Tier::accepted;
  if (a.combined <= cfg.tau_lo) return Tier::rejected;
  return Tier::uncertain;
}

std::set<std::string> select_seeds(std::span<const PublicationRecord> pool, const ResearcherProfile& profile, const Config&) {
  const auto k1 = variant_k1(profile);
  std::set<std::string> seeds;
  for (const auto& r : pool) {
    if (profile.rejected_ids.count(r.record_id)) continue;
    if (profile.seed_ids.count(r.record_id)) {
      seeds.insert(r.record_id);
      continue;
    }
    const bool exact = std::any_of(r.authors.begin(), r.authors.end(),
                                   [&](const AuthorName& a) { return k1.count(ingest::match_keys(a).k1) > 0; });
    if (!exact) continue;
    auto addr = address_score(r, profile);
    if (addr && *addr >= 0.7) seeds.insert(r.record_id);
  }
  return seeds;
}

std::map<std::string, int> recursive_coauthor_inclusion(const std::set<std::string>& seeds, const CoauthorSets& pool,
                                                        int k, int max_rounds) {
  std::map<std::string, int> rounds;
  std::set<std::string> reached;
  for (const auto& s : seeds) {
    rounds[s] = 0;
    if (auto it = pool.find(s); it != pool.end()) reached.insert(it->second.begin(), it->second.end());
  }
  std::vector<const CoauthorSets::value_type*> waiting;
  for (const auto& entry : pool)
    if (!rounds.count(entry.first)) waiting.push_back(&entry);

  for (int round = 1; round <= max_rounds && !waiting.empty(); ++round) {
    std::vector<const CoauthorSets::value_type*> added, still;
    for (const auto* entry : waiting) {
      std::size_t shared = 0;
      for (const auto& key : entry->second) shared += reached.count(key);
      (shared >= static_cast<std::size_t>(k) ? added : still).push_back(entry);
    }
    if (added.empty()) break;
    for (const auto* entry : added) {
      rounds[entry->first] = round;
      reached.insert(entry->second.begin(), entry->second.end());
    }
    waiting = std::move(still);
  }
  return rounds;
}

void refresh_signature(ResearcherProfile& profile, const RecordIndex& records, const Config& cfg,
                       std::vector<stylometry::StyleVector>& style_corpus) {
  profile.coauthor_keys.clear();
  profile.subject_vocab.clear();
  profile.accepted_refs.clear();
  style_corpus.clear();
  for (const auto& id : profile.accepted_ids) {
    auto it = records.find(id);
    if (it == records.end()) continue;
    const auto& r = it->second;
    for (auto& k : coauthor_keys(r, profile)) profile.coauthor_keys.insert(std::move(k));
    for (auto& t : subject_tokens(r)) profile.subject_vocab.insert(std::move(t));
    if (r.cited_refs) profile.accepted_refs.insert(r.cited_refs->begin(), r.cited_refs->end());
    if (r.abstract && !text::trim(*r.abstract).empty())
      style_corpus.push_back(stylometry::style_features(r.title, r.abstract, cfg.function_words));
  }
}

CandidateAssignment score_record(const PublicationRecord& record, const ResearcherProfile& profile,
                                 std::span<const stylometry::StyleVector> style_corpus, const Config& cfg) {
  CandidateAssignment a;
  a.record_id = record.record_id;
  auto& c = a.components;

  if (auto m = best_address_match(record, profile)) {
    c[index(Dimension::address)] = m->score;
    a.evidence.push_back("address " + fixed(m->score) + ": trajectory line '" + profile.trajectory[m->key_index].line +
                         "' matched '" + m->address + "'");
  } else {
    a.evidence.push_back(record.addresses.empty() ? "address absent: record has no address"
                                                  : "address absent: profile has no trajectory");
  }

  const auto keys = coauthor_keys(record, profile);
  if (auto s = coauthor_score(record, profile)) {
    c[index(Dimension::coauthor)] = *s;
    const auto shared = intersection(keys, profile.coauthor_keys);
    std::vector<std::string> names(shared.begin(), shared.end());
    a.evidence.push_back("coauthor " + fixed(*s) + ": " + std::to_string(shared.size()) + " of " +
                         std::to_string(keys.size()) + " known [" + text::join(names, ", ") + "]");
  } else {
    a.evidence.push_back("coauthor absent: no co-authors");
  }

  if (auto s = subject_score(record, profile)) {
    c[index(Dimension::subject)] = *s;
    const auto shared = intersection(subject_tokens(record), profile.subject_vocab);
    std::vector<std::string> words(shared.begin(), shared.end());
    a.evidence.push_back("subject " + fixed(*s) + ": shared terms [" + text::join(words, ", ") + "]");
  }

  if (auto s = citedref_score(record, profile)) {
    c[index(Dimension::citedrefs)] = *s;
    a.evidence.push_back("citedrefs " + fixed(*s));
  }

  if (auto style = stylometry::style_score(record, style_corpus, cfg)) {
    c[index(Dimension::style)] = style->score;
    a.evidence.push_back("style " + fixed(style->score) + ": delta " + fixed(style->delta) + " against " +
                         std::to_string(style_corpus.size()) + " accepted abstracts");
    for (const auto& z : style->comparisons)
      a.evidence.push_back("style z '" + z.word + "': doc " + signed_fixed(z.doc_z) + " vs centroid " +
                           signed_fixed(z.centroid_z));
  } else {
    a.evidence.push_back("style absent: needs an abstract and at least " + std::to_string(cfg.n_min_style) +
                         " accepted abstracts (have " + std::to_string(style_corpus.size()) + ")");
  }

  const auto combination = combine(c, cfg.weights);
  a.combined = combination.combined;
  a.weights_used = combination.weights_used;
  a.tier = Tier::uncertain;
  return a;
}

std::vector<CandidateAssignment> score_all(Session& s) {
  const Config& cfg = s.config;
  s.profile = s.input_profile;
  s.profile.coauthor_keys.clear();
  s.profile.subject_vocab.clear();
  s.profile.accepted_refs.clear();
  // Profile ids may name any cluster member; map them to canonical ids.
  for (auto* ids : {&s.profile.seed_ids, &s.profile.accepted_ids, &s.profile.rejected_ids}) {
    std::set<std::string> resolved;
    for (const auto& id : *ids)
      if (auto r = resolve_record_id(s, id)) resolved.insert(*r);
    *ids = std::move(resolved);
  }
  const auto manual_seeds = s.profile.seed_ids;

  std::vector<PublicationRecord> canon;
  canon.reserve(s.canonical.size());
  for (const auto& [id, r] : s.canonical) canon.push_back(r);

  s.pool = candidate_pool(canon, s.profile);
  std::vector<PublicationRecord> pool_records;
  for (const auto& r : canon)
    if (in_pool(r, s.profile)) pool_records.push_back(r);

  s.seeds = select_seeds(pool_records, s.profile, cfg);

  CoauthorSets sets;
  for (const auto& r : pool_records)
    if (!s.profile.rejected_ids.count(r.record_id)) sets[r.record_id] = coauthor_keys(r, s.profile);
  s.inclusion = recursive_coauthor_inclusion(s.seeds, sets, cfg.k_coauthor, cfg.max_inclusion_rounds);

  s.profile.seed_ids.insert(s.seeds.begin(), s.seeds.end());
  for (const auto& [id, round] : s.inclusion) s.profile.accepted_ids.insert(id);
  refresh_signature(s.profile, s.canonical, cfg, s.style_corpus);

  s.assignments.clear();
  std::vector<CandidateAssignment> out;
  for (const auto& r : pool_records) {
    auto a = score_record(r, s.profile, s.style_corpus, cfg);
    if (auto it = s.inclusion.find(r.record_id); it != s.inclusion.end()) {
      a.inclusion_round = it->second;
      a.tier = Tier::accepted;
      if (it->second == 0)
        a.evidence.push_back(manual_seeds.count(r.record_id) ? "seed: listed in profile"
                                                                           : "seed: exact name key and address >= 0.7");
      else
        a.evidence.push_back("co-author inclusion in round " + std::to_string(it->second));
    } else if (s.profile.rejected_ids.count(r.record_id)) {
      a.tier = Tier::rejected;
      a.evidence.push_back("listed as rejected in profile");
    } else if (s.profile.accepted_ids.count(r.record_id)) {
      a.tier = Tier::accepted;
      a.evidence.push_back("listed as accepted in profile");
    } else {
      a.tier = assign_tier(a, cfg);
    }
    s.assignments[a.record_id] = a;
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

void carry_over(CandidateAssignment& fresh, const CandidateAssignment& old) {
  fresh.tier = old.tier;
  fresh.inclusion_round = old.inclusion_round;
}

}  // namespace

RescoreDelta apply_decision(Session& s, const std::string& record_id, Decision decision, const std::string& note,
                            bool override_auto, const std::string& timestamp) {
  if (!s.scored) throw ConflictError("session has not been run");
  auto it = s.assignments.find(record_id);
  if (it == s.assignments.end()) throw NotFoundError("record " + record_id + " is not in the candidate pool");
  CandidateAssignment& target = it->second;
  if ((target.tier == Tier::accepted || target.tier == Tier::rejected) && !override_auto)
    throw ConflictError("record " + record_id + " has automatic tier " + std::string(to_string(target.tier)) +
                        "; pass override to revise it");

  s.decisions.push_back({record_id, decision, note, timestamp, override_auto});

  const auto before_basis = s.profile.accepted_ids;
  if (decision == Decision::accept) {
    s.profile.rejected_ids.erase(record_id);
    s.profile.accepted_ids.insert(record_id);
  } else {
    s.profile.accepted_ids.erase(record_id);
    s.profile.seed_ids.erase(record_id);
    s.profile.rejected_ids.insert(record_id);
  }

  RescoreDelta delta;
  const Tier old_tier = target.tier;
  target.tier = decision == Decision::accept ? Tier::human_accepted : Tier::human_rejected;
  target.evidence.push_back(std::string("curator ") + (decision == Decision::accept ? "accepted" : "rejected") +
                            (note.empty() ? "" : ": " + note));
  delta.push_back({record_id, target.combined, target.combined, old_tier, target.tier, target});

  if (s.profile.accepted_ids == before_basis) return delta;

  refresh_signature(s.profile, s.canonical, s.config, s.style_corpus);
  for (auto& [id, a] : s.assignments) {
    if (id == record_id || a.tier != Tier::uncertain) continue;
    auto fresh = score_record(s.canonical.at(id), s.profile, s.style_corpus, s.config);
    carry_over(fresh, a);
    fresh.tier = assign_tier(fresh, s.config);
    if (fresh == a) continue;
    RescoreChange change{id, a.combined, fresh.combined, a.tier, fresh.tier, fresh};
    a = std::move(fresh);
    delta.push_back(std::move(change));
  }
  return delta;
}

}  // namespace publist::disambiguate
