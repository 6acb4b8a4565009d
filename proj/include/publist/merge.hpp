#pragma once

#include "publist/model.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace publist::merge {

struct MergeCluster {
  std::set<std::string> member_ids;
  PublicationRecord canonical;
  // field name -> sources whose member supplied the chosen value
  std::map<std::string, std::vector<std::string>> field_provenance;
  // Disagreements resolved by trust precedence, e.g. differing years.
  std::vector<std::string> conflicts;
};

std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// 1 - edit distance / longer length, over title fingerprints; 1 when both
/// fingerprints are empty.
double title_similarity(std::string_view a, std::string_view b);

bool is_duplicate(const PublicationRecord& a, const PublicationRecord& b, const Config& cfg);

/// Connected components of is_duplicate over blocked candidate pairs, as
/// sorted index lists, ordered by their smallest index.
std::vector<std::vector<std::size_t>> duplicate_components(std::span<const PublicationRecord> records, const Config& cfg);

/// Clusters sorted by canonical record_id; independent of input order.
std::vector<MergeCluster> dedup(std::span<const PublicationRecord> records, const Config& cfg);

/// Throws ValidationError on an empty member list.
PublicationRecord merge_cluster(std::span<const PublicationRecord> members, const std::vector<std::string>& trust_order);

MergeCluster build_cluster(std::span<const PublicationRecord> members, const std::vector<std::string>& trust_order);

}  // namespace publist::merge
