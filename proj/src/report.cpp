#include "publist/report.hpp"

#include "publist/disambiguate.hpp"
#include "publist/ingest.hpp"
#include "publist/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace publist::report {

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::source_missing: return "SOURCE_MISSING";
    case Reason::no_address_match: return "NO_ADDRESS_MATCH";
    case Reason::not_in_cluster: return "NOT_IN_CLUSTER";
    case Reason::name_variant_miss: return "NAME_VARIANT_MISS";
    case Reason::field_incomplete: return "FIELD_INCOMPLETE";
    case Reason::other: return "OTHER";
  }
  return "OTHER";
}

namespace {

bool drawn_from(const PublicationRecord& r, const std::set<std::string>& sources) {
  if (sources.empty()) return true;
  return std::any_of(r.provenance.begin(), r.provenance.end(),
                     [&](const SourceTag& t) { return sources.count(t.source_id) > 0; });
}

const PublicationRecord* find_record(const Session& s, const std::string& id) {
  auto it = s.canonical.find(id);
  return it == s.canonical.end() ? nullptr : &it->second;
}

std::optional<double> ratio(std::size_t hits, std::size_t total) {
  if (total == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::size_t count_in(const std::set<std::string>& set, const std::set<std::string>& of) {
  return static_cast<std::size_t>(std::count_if(of.begin(), of.end(), [&](const std::string& id) { return set.count(id) > 0; }));
}

Reason explain(const std::string& id, bool missing_from_b, const Session& s, const MethodSources& sources) {
  const PublicationRecord* r = find_record(s, id);
  if (!r) return Reason::other;
  if (!drawn_from(*r, missing_from_b ? sources.b : sources.a)) return Reason::source_missing;
  if (missing_from_b) {
    auto addr = disambiguate::address_score(*r, s.profile);
    if (r->addresses.empty() || !addr || *addr < s.config.address_floor) return Reason::no_address_match;
  } else {
    auto it = s.assignments.find(id);
    const bool linked = s.inclusion.count(id) > 0;
    const bool high = it != s.assignments.end() && it->second.combined >= s.config.tau_hi;
    if (!linked && !high) return Reason::not_in_cluster;
  }
  if (!disambiguate::in_pool(*r, s.profile)) return Reason::name_variant_miss;
  if (text::trim(r->title).empty() || r->authors.empty()) return Reason::field_incomplete;
  return Reason::other;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::set<std::string> run_method_cluster(const Session& s, const std::set<std::string>& sources) {
  std::set<std::string> out;
  auto admit = [&](const std::string& id) {
    if (const auto* r = find_record(s, id); r && drawn_from(*r, sources)) out.insert(id);
  };
  for (const auto& id : s.seeds) admit(id);
  for (const auto& [id, round] : s.inclusion) admit(id);
  for (const auto& [id, a] : s.assignments)
    if (a.combined >= s.config.tau_hi) admit(id);
  return out;
}

std::set<std::string> run_method_address(const Session& s, const std::set<std::string>& sources) {
  std::set<std::string> out;
  for (const auto& [id, a] : s.assignments) {
    const auto& addr = a.components[index(Dimension::address)];
    if (!addr || *addr < s.config.address_floor) continue;
    if (const auto* r = find_record(s, id); r && drawn_from(*r, sources)) out.insert(id);
  }
  return out;
}

std::vector<std::string> match_gold(std::span<const PublicationRecord> gold, const Session& s) {
  std::map<std::string, std::string> by_doi;
  std::map<std::pair<std::string, int>, std::string> by_title;
  for (const auto& [id, r] : s.canonical) {
    if (r.doi && !r.doi->empty()) by_doi.emplace(text::fold_lower(*r.doi), id);
    by_title.emplace(std::make_pair(text::join(fingerprint_tokens(r.title), " "), r.year), id);
  }
  std::vector<std::string> ids;
  for (const auto& g : gold) {
    if (g.doi && !g.doi->empty()) {
      if (auto it = by_doi.find(text::fold_lower(*g.doi)); it != by_doi.end()) {
        ids.push_back(it->second);
        continue;
      }
    }
    if (auto it = by_title.find({text::join(fingerprint_tokens(g.title), " "), g.year}); it != by_title.end()) {
      ids.push_back(it->second);
      continue;
    }
    ids.push_back("unmatched: " + g.title + " (" + std::to_string(g.year) + ")");
  }
  return ids;
}

MethodComparison compare_methods(const std::set<std::string>& set_a, const std::set<std::string>& set_b,
                                 const std::optional<std::vector<std::string>>& gold, const Session& s,
                                 const MethodSources& sources) {
  MethodComparison c;
  c.set_a = set_a;
  c.set_b = set_b;
  for (const auto& id : set_a) (set_b.count(id) ? c.both : c.only_a).insert(id);
  for (const auto& id : set_b)
    if (!set_a.count(id)) c.only_b.insert(id);
  for (const auto& id : c.only_a) c.reasons[id] = explain(id, true, s, sources);
  for (const auto& id : c.only_b) c.reasons[id] = explain(id, false, s, sources);

  if (gold) {
    std::set<std::string> resolved;
    std::set<std::string> unmatched;
    for (const auto& g : *gold) {
      if (auto id = resolve_record_id(s, g)) resolved.insert(*id);
      else unmatched.insert(g);
    }
    c.unmatched_gold.assign(unmatched.begin(), unmatched.end());
    c.gold_size = resolved.size() + unmatched.size();
    std::set<std::string> either = set_a;
    either.insert(set_b.begin(), set_b.end());
    c.recall_a = ratio(count_in(set_a, resolved), c.gold_size);
    c.recall_b = ratio(count_in(set_b, resolved), c.gold_size);
    c.recall_union = ratio(count_in(either, resolved), c.gold_size);
    for (const auto& id : resolved)
      if (!either.count(id)) c.missed_gold.insert(id);
  }
  return c;
}

json to_json(const MethodComparison& c) {
  json reasons = json::object();
  for (const auto& [id, r] : c.reasons) reasons[id] = std::string(to_string(r));
  json reason_counts = json::object();
  for (const auto& [id, r] : c.reasons) {
    auto key = std::string(to_string(r));
    reason_counts[key] = reason_counts.value(key, 0) + 1;
  }
  std::set<std::string> either = c.set_a;
  either.insert(c.set_b.begin(), c.set_b.end());
  json j{{"set_a", c.set_a},
         {"set_b", c.set_b},
         {"only_a", c.only_a},
         {"only_b", c.only_b},
         {"both", c.both},
         {"counts",
          {{"a", c.set_a.size()}, {"b", c.set_b.size()}, {"only_a", c.only_a.size()}, {"only_b", c.only_b.size()},
           {"both", c.both.size()}, {"union", either.size()}}},
         {"reasons", reasons},
         {"reason_counts", reason_counts}};
  if (c.recall_a) {
    j["recall_a"] = *c.recall_a;
    j["recall_b"] = *c.recall_b;
    j["recall_union"] = *c.recall_union;
    j["gold_size"] = c.gold_size;
    j["missed_gold"] = c.missed_gold;
    j["unmatched_gold"] = c.unmatched_gold;
  } else if (!c.unmatched_gold.empty()) {
    j["unmatched_gold"] = c.unmatched_gold;
  }
  return j;
}

std::string comparison_table(const MethodComparison& c) {
  std::ostringstream out;
  std::set<std::string> either = c.set_a;
  either.insert(c.set_b.begin(), c.set_b.end());
  out << "method A (cluster)   " << c.set_a.size() << "\n"
      << "method B (address)   " << c.set_b.size() << "\n"
      << "only A               " << c.only_a.size() << "\n"
      << "only B               " << c.only_b.size() << "\n"
      << "both                 " << c.both.size() << "\n"
      << "union                " << either.size() << "\n";
  if (c.recall_a) {
    out << "gold entries         " << c.gold_size << "\n"
        << "recall A             " << fixed(*c.recall_a, 4) << "\n"
        << "recall B             " << fixed(*c.recall_b, 4) << "\n"
        << "recall A or B        " << fixed(*c.recall_union, 4) << "\n";
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& [id, r] : c.reasons) ++counts[std::string(to_string(r))];
  if (!counts.empty()) {
    out << "reasons:\n";
    for (const auto& [name, n] : counts) out << "  " << name << " " << n << "\n";
  }
  for (const auto& u : c.unmatched_gold) out << "unmatched gold: " << u << "\n";
  return out.str();
}

std::vector<PublicationRecord> final_list(const Session& s) {
  std::vector<PublicationRecord> out;
  for (const auto& [id, a] : s.assignments)
    if (a.tier == Tier::accepted || a.tier == Tier::human_accepted) out.push_back(s.canonical.at(id));
  std::sort(out.begin(), out.end(), [](const PublicationRecord& a, const PublicationRecord& b) {
    if (a.year != b.year) return a.year > b.year;
    if (a.title != b.title) return a.title < b.title;
    return a.record_id < b.record_id;
  });
  return out;
}

json descriptive_stats(const Session& s) {
  json tiers = json::object();
  for (auto t : {Tier::accepted, Tier::uncertain, Tier::rejected, Tier::human_accepted, Tier::human_rejected})
    tiers[std::string(to_string(t))] = 0;
  json histograms = json::object();
  std::map<Dimension, std::vector<int>> bins;
  for (auto d : kDimensions) bins[d].assign(10, 0);

  auto tally = [](const std::vector<const PublicationRecord*>& recs) {
    json by_source = json::object(), by_year = json::object(), by_type = json::object();
    for (const auto* r : recs) {
      for (const auto& p : r->provenance) by_source[p.source_id] = by_source.value(p.source_id, 0) + 1;
      auto y = std::to_string(r->year);
      by_year[y] = by_year.value(y, 0) + 1;
      auto t = std::string(to_string(r->doc_type));
      by_type[t] = by_type.value(t, 0) + 1;
    }
    return json{{"count", recs.size()}, {"by_source", by_source}, {"by_year", by_year}, {"by_doc_type", by_type}};
  };

  std::vector<const PublicationRecord*> pool_records;
  for (const auto& [id, a] : s.assignments) {
    auto key = std::string(to_string(a.tier));
    tiers[key] = tiers[key].get<int>() + 1;
    for (auto d : kDimensions) {
      const auto& v = a.components[index(d)];
      if (!v) continue;
      auto bin = static_cast<std::size_t>(std::clamp(std::floor(*v * 10.0), 0.0, 9.0));
      ++bins[d][bin];
    }
    pool_records.push_back(&s.canonical.at(id));
  }
  for (auto d : kDimensions) histograms[std::string(to_string(d))] = bins[d];

  std::vector<const PublicationRecord*> accepted_records;
  const auto list = final_list(s);
  for (const auto& r : list) accepted_records.push_back(&s.canonical.at(r.record_id));

  std::size_t human_accepts = 0;
  for (const auto& d : s.decisions) human_accepts += d.decision == Decision::accept;

  return json{{"records_ingested", s.records.size()},
              {"clusters", s.clusters.size()},
              {"pool_size", s.pool.size()},
              {"tiers", tiers},
              {"decisions", {{"total", s.decisions.size()}, {"accept", human_accepts}, {"reject", s.decisions.size() - human_accepts}}},
              {"pool", tally(pool_records)},
              {"final_list", tally(accepted_records)},
              {"histograms", histograms}};
}

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  const auto n = text::fold_lower(text::trim(name));
  if (n == "json") return ExportFormat::json;
  if (n == "csv") return ExportFormat::csv;
  if (n == "ris") return ExportFormat::ris;
  return std::nullopt;
}

std::string_view content_type(ExportFormat f) {
  switch (f) {
    case ExportFormat::json: return "application/json";
    case ExportFormat::csv: return "text/csv";
    case ExportFormat::ris: return "application/x-research-info-systems";
  }
  return "application/octet-stream";
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string export_list(const Session& s, ExportFormat format) {
  const auto list = final_list(s);
  switch (format) {
    case ExportFormat::json: return json(list).dump(2) + "\n";
    case ExportFormat::ris: return ingest::serialize_ris(list);
    case ExportFormat::csv: {
      std::string out = "record_id,doi,year,title,venue,doc_type,tier,combined\r\n";
      for (const auto& r : list) {
        const auto& a = s.assignments.at(r.record_id);
        std::vector<std::string> cells = {r.record_id,
                                          r.doi.value_or(""),
                                          std::to_string(r.year),
                                          r.title,
                                          r.venue.value_or(""),
                                          std::string(to_string(r.doc_type)),
                                          std::string(to_string(a.tier)),
                                          fixed(a.combined, 6)};
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) out.push_back(',');
          out += csv_escape(cells[i]);
        }
        out += "\r\n";
      }
      return out;
    }
  }
  return {};
}

}  // namespace publist::report
