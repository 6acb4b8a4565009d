#pragma once

#include "publist/merge.hpp"
#include "publist/model.hpp"
#include "publist/session.hpp"

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace publist::testing {

using Rng = std::mt19937_64;

std::filesystem::path fixture_dir();
std::string read_fixture(const std::string& name);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
bool chance(Rng& rng, double p);
template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[uniform(rng, 0, v.size() - 1)];
}

std::string random_words(Rng& rng, std::size_t min_words, std::size_t max_words);
std::string random_raw_name(Rng& rng);

/// A valid record whose fields all survive RIS (no native ids, no cited refs).
PublicationRecord random_ris_record(Rng& rng, const SourceTag& source);

/// Works with injected duplicates: title typos of at most two edits, year
/// shifts of one, shared DOIs, truncated author lists, several sources.
std::vector<PublicationRecord> dedup_corpus(Rng& rng, std::size_t max_records);

/// Partition of record indices under the transitive closure of is_duplicate
/// over all pairs; groups sorted, ordered by smallest index.
std::vector<std::vector<std::size_t>> all_pairs_partition(const std::vector<PublicationRecord>& records,
                                                          const Config& cfg);

/// Least fixpoint of co-author inclusion by naive iteration: the set by
/// chaotic single-record additions, the rounds by recomputing each round
/// from the previous round's set.
std::map<std::string, int> inclusion_oracle(const std::set<std::string>& seeds,
                                            const std::map<std::string, std::set<std::string>>& pool, int k,
                                            int max_rounds);

/// Two homonymous researchers sharing the name key maes|n, plus unrelated
/// records. truth holds the ids planted for the target researcher.
struct PlantedCorpus {
  std::vector<PublicationRecord> records;
  ResearcherProfile profile;
  std::set<std::string> truth;
  std::vector<SourceTag> sources;
};
PlantedCorpus planted_corpus(Rng& rng, std::size_t n_records);

/// A session over the given records, run with the default config.
Session run_records(std::vector<PublicationRecord> records, const ResearcherProfile& profile, Config cfg = {});

/// Same assignments, ignoring evidence strings.
bool same_scores(const CandidateAssignment& a, const CandidateAssignment& b);

}  // namespace publist::testing
