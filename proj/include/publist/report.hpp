#pragma once

#include "publist/session.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace publist::report {

enum class Reason { source_missing, no_address_match, not_in_cluster, name_variant_miss, field_incomplete, other };

std::string_view to_string(Reason r);

/// Sources each method may draw on; an empty set means every source.
struct MethodSources {
  std::set<std::string> a;
  std::set<std::string> b;
};

struct MethodComparison {
  std::set<std::string> set_a, set_b;
  std::set<std::string> only_a, only_b, both;
  std::optional<double> recall_a, recall_b, recall_union;
  std::map<std::string, Reason> reasons;
  std::set<std::string> missed_gold;         // resolved gold found by neither method
  std::vector<std::string> unmatched_gold;   // gold entries with no session record
  std::size_t gold_size = 0;
};

/// Method A: seeds, co-author closure and records scoring at least tau_hi.
std::set<std::string> run_method_cluster(const Session& s, const std::set<std::string>& sources = {});

/// Method B: pool records whose address score reaches the configured floor.
std::set<std::string> run_method_address(const Session& s, const std::set<std::string>& sources = {});

/// Matches an external publication list to canonical records by DOI, then by
/// title fingerprint and year. Unmatched entries come back as descriptive
/// labels that will not resolve.
std::vector<std::string> match_gold(std::span<const PublicationRecord> gold, const Session& s);

/// Set algebra, recalls against gold ids (when given) and one reason code per
/// record found by only one method.
MethodComparison compare_methods(const std::set<std::string>& set_a, const std::set<std::string>& set_b,
                                 const std::optional<std::vector<std::string>>& gold, const Session& s,
                                 const MethodSources& sources = {});

json to_json(const MethodComparison& c);
std::string comparison_table(const MethodComparison& c);

json descriptive_stats(const Session& s);

enum class ExportFormat { json, csv, ris };
std::optional<ExportFormat> parse_export_format(std::string_view name);
std::string_view content_type(ExportFormat f);

/// ACCEPTED and HUMAN_ACCEPTED records, newest first, then by title.
std::vector<PublicationRecord> final_list(const Session& s);

std::string export_list(const Session& s, ExportFormat format);

std::string csv_escape(std::string_view field);

}  // namespace publist::report
