#include "publist/model.hpp"

#include "publist/text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace publist {

std::string_view to_string(DocType t) {
  switch (t) {
    case DocType::article: return "article";
    case DocType::review: return "review";
    case DocType::proceedings: return "proceedings";
    case DocType::other: return "other";
  }
  return "other";
}

DocType parse_doc_type(std::string_view s) {
  auto v = text::fold_lower(text::trim(s));
  if (v == "article" || v == "journal article") return DocType::article;
  if (v == "review") return DocType::review;
  if (v == "proceedings" || v == "proceedings paper" || v == "conference paper") return DocType::proceedings;
  return DocType::other;
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::address: return "address";
    case Dimension::coauthor: return "coauthor";
    case Dimension::subject: return "subject";
    case Dimension::citedrefs: return "citedrefs";
    case Dimension::style: return "style";
  }
  return "address";
}

std::optional<Dimension> parse_dimension(std::string_view s) {
  for (auto d : kDimensions)
    if (to_string(d) == s) return d;
  return std::nullopt;
}

std::vector<std::string> default_function_words() {
  return {"the", "of", "and", "a",    "in",  "to", "is",  "for", "with", "on",
          "that", "by", "as", "are", "this", "we", "be", "an",  "which", "from",
          "at",  "or", "it", "can", "has", "have", "not", "but", "its", "these"};
}

std::vector<std::string> validate_config(const Config& cfg) {
  std::vector<std::string> v;
  double sum = 0.0;
  for (auto d : kDimensions) {
    double w = cfg.weights[index(d)];
    if (!std::isfinite(w) || w < 0.0) v.push_back("weight " + std::string(to_string(d)) + " must be non-negative");
    else sum += w;
  }
  if (!(sum > 0.0)) v.push_back("weights sum must be positive");
  auto unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  if (!unit(cfg.tau_hi) || !unit(cfg.tau_lo)) v.push_back("tau_hi and tau_lo must lie in [0,1]");
  if (!(cfg.tau_lo < cfg.tau_hi)) v.push_back("tau_lo must be below tau_hi");
  if (cfg.k_coauthor < 1) v.push_back("k_coauthor must be at least 1");
  if (!unit(cfg.title_sim_threshold)) v.push_back("title_sim_threshold must lie in [0,1]");
  if (cfg.n_min_style < 1) v.push_back("n_min_style must be at least 1");
  if (!unit(cfg.address_floor)) v.push_back("address_floor must lie in [0,1]");
  if (cfg.max_inclusion_rounds < 0) v.push_back("max_inclusion_rounds must be non-negative");
  std::set<std::string> seen;
  for (const auto& s : cfg.trust_order)
    if (!seen.insert(s).second) v.push_back("trust_order lists " + s + " twice");
  return v;
}

std::vector<std::string> validate_profile(const ResearcherProfile& p) {
  std::vector<std::string> v;
  if (p.variants.empty()) v.push_back("profile needs at least one name variant");
  for (const auto& id : p.accepted_ids)
    if (p.rejected_ids.count(id)) v.push_back("record " + id + " is both accepted and rejected");
  for (const auto& id : p.seed_ids)
    if (!p.accepted_ids.count(id)) v.push_back("seed " + id + " is not accepted");
  for (const auto& k : p.trajectory) {
    if (k.org_tokens.empty() && !k.city) v.push_back("trajectory entry needs organisation or city");
    if (k.year_start && k.year_end && *k.year_start > *k.year_end) v.push_back("trajectory years out of order");
  }
  return v;
}

std::vector<std::string> fingerprint_tokens(std::string_view title) {
  auto tokens = text::alnum_tokens(text::fold_lower(title));
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

std::string title_fingerprint(std::string_view title) {
  if (text::trim(title).empty()) throw ValidationError("title must be non-empty");
  return text::join(fingerprint_tokens(title), " ");
}

std::string normalize_doi(std::string_view doi) {
  auto s = text::fold_lower(text::trim(doi));
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "http://dx.doi.org/", "doi:"}) {
    if (s.rfind(prefix, 0) == 0) {
      s.erase(0, prefix.size());
      break;
    }
  }
  return std::string(text::trim(s));
}

std::string normalize_ref_key(std::string_view ref) { return text::collapse_whitespace(text::fold_lower(ref)); }

std::string derive_record_id(const PublicationRecord& r) {
  if (r.doi && !r.doi->empty()) return "doi:" + text::fold_lower(*r.doi);
  auto fp = text::join(fingerprint_tokens(r.title), " ");
  return "fp:" + text::hex64(text::fnv1a64(fp + ":" + std::to_string(r.year)));
}

PublicationRecord& assign_record_id(PublicationRecord& r) {
  r.record_id = derive_record_id(r);
  return r;
}

int current_year() {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(system_clock::now())};
  return static_cast<int>(ymd.year());
}

std::vector<std::string> validate_record(const PublicationRecord& r, int this_year) {
  std::vector<std::string> v;
  if (text::trim(r.title).empty()) v.push_back("title non-empty");
  if (r.year < 1500 || r.year > this_year + 1) v.push_back("year range");
  if (r.authors.empty()) v.push_back("authors non-empty");
  for (const auto& a : r.authors)
    if (a.surname.empty()) {
      v.push_back("author surname non-empty");
      break;
    }
  if (r.provenance.empty()) v.push_back("provenance non-empty");
  if (!text::trim(r.title).empty() && r.record_id != derive_record_id(r)) v.push_back("record_id mismatch");
  return v;
}

std::vector<std::string> validate_sources(const std::vector<SourceTag>& sources) {
  std::vector<std::string> v;
  std::set<std::string> ids;
  std::set<int> ranks;
  for (const auto& s : sources) {
    if (s.source_id.empty()) v.push_back("source_id must be non-empty");
    else if (!ids.insert(s.source_id).second) v.push_back("duplicate source_id " + s.source_id);
    if (s.trust_rank < 0) v.push_back("trust_rank must be non-negative");
    else if (!ranks.insert(s.trust_rank).second) v.push_back("duplicate trust_rank " + std::to_string(s.trust_rank));
  }
  return v;
}

}  // namespace publist
