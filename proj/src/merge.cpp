#include "publist/merge.hpp"

#include "publist/ingest.hpp"
#include "publist/json_io.hpp"
#include "publist/text.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace publist::merge {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

struct Features {
  std::u32string fingerprint;
  std::set<std::string> k2;
  int year = 0;
  std::string doi;  // empty when absent
};

Features features_of(const PublicationRecord& r) {
  Features f;
  f.fingerprint = text::to_code_points(text::join(fingerprint_tokens(r.title), " "));
  for (const auto& a : r.authors) f.k2.insert(ingest::k2_key(a));
  f.year = r.year;
  if (r.doi && !r.doi->empty()) f.doi = text::fold_lower(*r.doi);
  return f;
}

double similarity(const std::u32string& a, const std::u32string& b) {
  std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else return true;
  }
  return false;
}

bool duplicate(const Features& a, const Features& b, double threshold) {
  if (!a.doi.empty() && a.doi == b.doi) return true;
  if (std::abs(a.year - b.year) > 1) return false;
  if (!intersects(a.k2, b.k2)) return false;
  std::size_t longest = std::max(a.fingerprint.size(), b.fingerprint.size());
  if (longest > 0) {
    // Edit distance is at least the length difference.
    std::size_t gap = a.fingerprint.size() > b.fingerprint.size() ? a.fingerprint.size() - b.fingerprint.size()
                                                                   : b.fingerprint.size() - a.fingerprint.size();
    if (1.0 - static_cast<double>(gap) / static_cast<double>(longest) < threshold) return false;
  }
  return similarity(a.fingerprint, b.fingerprint) >= threshold;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Position of a source in the trust ordering; unlisted sources follow the
// listed ones, ordered by their own trust_rank.
std::size_t source_rank(const SourceTag& s, const std::vector<std::string>& trust_order) {
  auto it = std::find(trust_order.begin(), trust_order.end(), s.source_id);
  if (it != trust_order.end()) return static_cast<std::size_t>(it - trust_order.begin());
  return trust_order.size() + static_cast<std::size_t>(std::max(0, s.trust_rank));
}

std::size_t member_rank(const PublicationRecord& r, const std::vector<std::string>& trust_order) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& s : r.provenance) best = std::min(best, source_rank(s, trust_order));
  return best;
}

// Members ordered most-trusted first; ties resolved on content so the result
// does not depend on input order.
std::vector<const PublicationRecord*> by_trust(std::span<const PublicationRecord> members,
                                               const std::vector<std::string>& trust_order) {
  struct Keyed {
    std::size_t rank;
    std::string id;
    std::string body;
    const PublicationRecord* rec;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(members.size());
  for (const auto& m : members) keyed.push_back({member_rank(m, trust_order), m.record_id, json(m).dump(), &m});
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.rank, a.id, a.body) < std::tie(b.rank, b.id, b.body);
  });
  std::vector<const PublicationRecord*> out;
  for (const auto& k : keyed) out.push_back(k.rec);
  return out;
}

std::vector<std::string> source_ids(const PublicationRecord& r) {
  std::vector<std::string> ids;
  for (const auto& s : r.provenance) ids.push_back(s.source_id);
  return ids;
}

template <typename Pred>
std::vector<std::string> contributing_sources(const std::vector<const PublicationRecord*>& ordered, Pred contributes) {
  std::vector<std::string> out;
  for (const auto* m : ordered) {
    if (!contributes(*m)) continue;
    for (auto& id : source_ids(*m))
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(std::move(id));
  }
  return out;
}

void append_unique(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& v : from)
    if (std::find(into.begin(), into.end(), v) == into.end()) into.push_back(v);
}

template <typename Has>
const PublicationRecord* first_with(const std::vector<const PublicationRecord*>& ordered, Has has) {
  for (const auto* m : ordered)
    if (has(*m)) return m;
  return ordered.front();
}

MergeCluster merge_ordered(const std::vector<const PublicationRecord*>& ordered, const std::vector<std::string>& trust_order) {
  MergeCluster cluster;
  PublicationRecord& c = cluster.canonical;
  auto& fp = cluster.field_provenance;

  const auto* title_src = first_with(ordered, [](const auto& m) { return !text::trim(m.title).empty(); });
  c.title = title_src->title;
  fp["title"] = contributing_sources(ordered, [&](const auto& m) { return m.title == c.title; });

  const auto* year_src = ordered.front();
  c.year = year_src->year;
  fp["year"] = contributing_sources(ordered, [&](const auto& m) { return m.year == c.year; });
  for (const auto* m : ordered) {
    if (m->year != c.year) {
      cluster.conflicts.push_back("year " + std::to_string(c.year) + " kept over " + std::to_string(m->year) + " from " +
                                  text::join(source_ids(*m), ","));
    }
  }

  auto scalar = [&](const char* field, std::optional<std::string> PublicationRecord::*member) -> std::optional<std::string> {
    for (const auto* m : ordered) {
      const auto& v = m->*member;
      if (v && !v->empty()) {
        fp[field] = contributing_sources(ordered, [&](const PublicationRecord& x) { return x.*member == v; });
        return v;
      }
    }
    return std::nullopt;
  };
  c.doi = scalar("doi", &PublicationRecord::doi);
  c.venue = scalar("venue", &PublicationRecord::venue);
  c.abstract = scalar("abstract", &PublicationRecord::abstract);

  // doc_type "other" counts as unset when a member knows better.
  const auto* type_src = first_with(ordered, [](const auto& m) { return m.doc_type != DocType::other; });
  c.doc_type = type_src->doc_type;
  fp["doc_type"] = contributing_sources(ordered, [&](const auto& m) { return m.doc_type == c.doc_type; });

  const PublicationRecord* author_src = ordered.front();
  for (const auto* m : ordered)
    if (m->authors.size() > author_src->authors.size()) author_src = m;
  c.authors = author_src->authors;
  fp["authors"] = contributing_sources(ordered, [&](const auto& m) { return m.authors == c.authors; });

  for (const auto* m : ordered) {
    append_unique(c.keywords, m->keywords);
    append_unique(c.addresses, m->addresses);
    if (m->cited_refs) {
      if (!c.cited_refs) c.cited_refs.emplace();
      append_unique(*c.cited_refs, *m->cited_refs);
    }
    for (const auto& [src, id] : m->native_ids) c.native_ids.emplace(src, id);
    for (const auto& s : m->provenance) {
      auto same = [&](const SourceTag& t) { return t.source_id == s.source_id; };
      if (std::none_of(c.provenance.begin(), c.provenance.end(), same)) c.provenance.push_back(s);
    }
  }
  auto non_empty_list = [](const auto& field) { return [field](const PublicationRecord& m) { return !(m.*field).empty(); }; };
  if (!c.keywords.empty()) fp["keywords"] = contributing_sources(ordered, non_empty_list(&PublicationRecord::keywords));
  if (!c.addresses.empty()) fp["addresses"] = contributing_sources(ordered, non_empty_list(&PublicationRecord::addresses));
  if (!c.native_ids.empty()) fp["native_ids"] = contributing_sources(ordered, non_empty_list(&PublicationRecord::native_ids));
  if (c.cited_refs)
    fp["cited_refs"] = contributing_sources(ordered, [](const auto& m) { return m.cited_refs && !m.cited_refs->empty(); });

  std::stable_sort(c.provenance.begin(), c.provenance.end(), [&](const SourceTag& a, const SourceTag& b) {
    return std::make_tuple(source_rank(a, trust_order), a.source_id) < std::make_tuple(source_rank(b, trust_order), b.source_id);
  });
  assign_record_id(c);
  for (const auto* m : ordered) cluster.member_ids.insert(m->record_id);
  return cluster;
}

}  // namespace

double title_similarity(std::string_view a, std::string_view b) {
  return similarity(text::to_code_points(text::join(fingerprint_tokens(a), " ")),
                    text::to_code_points(text::join(fingerprint_tokens(b), " ")));
}

bool is_duplicate(const PublicationRecord& a, const PublicationRecord& b, const Config& cfg) {
  return duplicate(features_of(a), features_of(b), cfg.title_sim_threshold);
}

std::vector<std::vector<std::size_t>> duplicate_components(std::span<const PublicationRecord> records, const Config& cfg) {
  std::vector<Features> feats;
  feats.reserve(records.size());
  for (const auto& r : records) feats.push_back(features_of(r));

  DisjointSets sets(records.size());

  // DOI block.
  std::unordered_map<std::string, std::size_t> by_doi;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    if (feats[i].doi.empty()) continue;
    auto [it, fresh] = by_doi.emplace(feats[i].doi, i);
    if (!fresh) sets.unite(it->second, i);
  }

  // Author-key block: a non-DOI duplicate must share a K2 key and lie within
  // one year, so every such pair meets inside one of these buckets.
  std::map<std::string, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < feats.size(); ++i)
    for (const auto& k : feats[i].k2) by_key[k].push_back(i);
  for (auto& [key, members] : by_key) {
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return feats[a].year < feats[b].year; });
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        std::size_t i = members[x], j = members[y];
        if (feats[j].year - feats[i].year > 1) break;
        if (sets.find(i) == sets.find(j)) continue;
        if (duplicate(feats[i], feats[j], cfg.title_sim_threshold)) sets.unite(i, j);
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) groups[sets.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

std::vector<MergeCluster> dedup(std::span<const PublicationRecord> records, const Config& cfg) {
  std::vector<MergeCluster> clusters;
  for (const auto& component : duplicate_components(records, cfg)) {
    std::vector<PublicationRecord> members;
    for (auto i : component) members.push_back(records[i]);
    clusters.push_back(build_cluster(members, cfg.trust_order));
  }
  std::sort(clusters.begin(), clusters.end(), [](const MergeCluster& a, const MergeCluster& b) {
    if (a.canonical.record_id != b.canonical.record_id) return a.canonical.record_id < b.canonical.record_id;
    if (a.member_ids != b.member_ids) return a.member_ids < b.member_ids;
    return json(a.canonical).dump() < json(b.canonical).dump();
  });
  return clusters;
}

PublicationRecord merge_cluster(std::span<const PublicationRecord> members, const std::vector<std::string>& trust_order) {
  return build_cluster(members, trust_order).canonical;
}

MergeCluster build_cluster(std::span<const PublicationRecord> members, const std::vector<std::string>& trust_order) {
  if (members.empty()) throw ValidationError("cannot merge an empty cluster");
  return merge_ordered(by_trust(members, trust_order), trust_order);
}

}  // namespace publist::merge
