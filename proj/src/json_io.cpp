#include "publist/json_io.hpp"

#include "publist/ingest.hpp"
#include "publist/text.hpp"

namespace publist {

namespace {

template <typename T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
void optional_from_json(const json& j, const char* key, std::optional<T>& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->template get<T>();
  else out.reset();
}

template <typename T>
void value_or_default(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->template get<T>();
}

}  // namespace

void to_json(json& j, const SourceTag& s) {
  j = json{{"source_id", s.source_id}, {"source_name", s.source_name}, {"trust_rank", s.trust_rank}};
}

void from_json(const json& j, SourceTag& s) {
  s.source_id = j.at("source_id").get<std::string>();
  s.source_name = j.value("source_name", s.source_id);
  s.trust_rank = j.value("trust_rank", 0);
}

void to_json(json& j, const AuthorName& a) {
  j = json{{"raw", a.raw}, {"surname", a.surname}, {"given_tokens", a.given_tokens}, {"initials", a.initials}};
}

void from_json(const json& j, AuthorName& a) {
  if (j.is_string()) {
    a = ingest::normalize_name(j.get<std::string>());
    return;
  }
  if (!j.contains("surname")) {
    a = ingest::normalize_name(j.at("raw").get<std::string>());
    return;
  }
  a.raw = j.value("raw", std::string());
  a.surname = j.at("surname").get<std::string>();
  a.given_tokens = j.value("given_tokens", std::vector<std::string>{});
  a.initials = j.value("initials", std::string());
}

void to_json(json& j, const AddressKey& k) {
  j = json{{"org_tokens", k.org_tokens},        {"city", optional_to_json(k.city)},
           {"country", optional_to_json(k.country)}, {"year_start", optional_to_json(k.year_start)},
           {"year_end", optional_to_json(k.year_end)}, {"line", k.line}};
}

void from_json(const json& j, AddressKey& k) {
  k.org_tokens = j.value("org_tokens", std::set<std::string>{});
  optional_from_json(j, "city", k.city);
  optional_from_json(j, "country", k.country);
  optional_from_json(j, "year_start", k.year_start);
  optional_from_json(j, "year_end", k.year_end);
  k.line = j.value("line", std::string());
}

void to_json(json& j, const PublicationRecord& r) {
  j = json{{"record_id", r.record_id},
           {"doi", optional_to_json(r.doi)},
           {"native_ids", r.native_ids},
           {"title", r.title},
           {"abstract", optional_to_json(r.abstract)},
           {"year", r.year},
           {"venue", optional_to_json(r.venue)},
           {"doc_type", std::string(to_string(r.doc_type))},
           {"authors", r.authors},
           {"addresses", r.addresses},
           {"keywords", r.keywords},
           {"cited_refs", optional_to_json(r.cited_refs)},
           {"provenance", r.provenance}};
}

void from_json(const json& j, PublicationRecord& r) {
  r.title = j.at("title").get<std::string>();
  r.year = j.at("year").get<int>();
  optional_from_json(j, "doi", r.doi);
  if (r.doi) r.doi = normalize_doi(*r.doi);
  r.native_ids = j.value("native_ids", std::map<std::string, std::string>{});
  optional_from_json(j, "abstract", r.abstract);
  optional_from_json(j, "venue", r.venue);
  r.doc_type = parse_doc_type(j.value("doc_type", std::string("article")));
  r.authors = j.value("authors", std::vector<AuthorName>{});
  r.addresses = j.value("addresses", std::vector<std::string>{});
  r.keywords = j.value("keywords", std::vector<std::string>{});
  optional_from_json(j, "cited_refs", r.cited_refs);
  r.provenance = j.value("provenance", std::vector<SourceTag>{});
  if (auto it = j.find("record_id"); it != j.end() && it->is_string() && !it->get<std::string>().empty())
    r.record_id = it->get<std::string>();
  else
    assign_record_id(r);
}

void to_json(json& j, const Config& c) {
  json weights = json::object();
  for (auto d : kDimensions) weights[std::string(to_string(d))] = c.weights[index(d)];
  j = json{{"weights", weights},
           {"tau_hi", c.tau_hi},
           {"tau_lo", c.tau_lo},
           {"k_coauthor", c.k_coauthor},
           {"title_sim_threshold", c.title_sim_threshold},
           {"n_min_style", c.n_min_style},
           {"function_words", c.function_words},
           {"trust_order", c.trust_order},
           {"address_floor", c.address_floor},
           {"max_inclusion_rounds", c.max_inclusion_rounds}};
}

void from_json(const json& j, Config& c) {
  c = Config{};
  if (auto it = j.find("weights"); it != j.end()) {
    for (const auto& [name, value] : it->items()) {
      auto d = parse_dimension(name);
      if (!d) throw ValidationError("unknown weight dimension '" + name + "'");
      c.weights[index(*d)] = value.get<double>();
    }
  }
  value_or_default(j, "tau_hi", c.tau_hi);
  value_or_default(j, "tau_lo", c.tau_lo);
  value_or_default(j, "k_coauthor", c.k_coauthor);
  value_or_default(j, "title_sim_threshold", c.title_sim_threshold);
  value_or_default(j, "n_min_style", c.n_min_style);
  value_or_default(j, "function_words", c.function_words);
  value_or_default(j, "trust_order", c.trust_order);
  value_or_default(j, "address_floor", c.address_floor);
  value_or_default(j, "max_inclusion_rounds", c.max_inclusion_rounds);
}

void to_json(json& j, const ResearcherProfile& p) {
  j = json{{"variants", p.variants},
           {"trajectory", p.trajectory},
           {"seed_ids", p.seed_ids},
           {"accepted_ids", p.accepted_ids},
           {"rejected_ids", p.rejected_ids},
           {"coauthor_keys", p.coauthor_keys},
           {"subject_vocab", p.subject_vocab},
           {"accepted_refs", p.accepted_refs}};
}

void from_json(const json& j, ResearcherProfile& p) {
  p = ResearcherProfile{};
  p.variants = j.value("variants", std::vector<AuthorName>{});
  if (auto it = j.find("trajectory"); it != j.end() && !it->is_null()) {
    if (it->is_string()) p.trajectory = ingest::parse_trajectory(it->get<std::string>());
    else p.trajectory = it->get<std::vector<AddressKey>>();
  }
  p.seed_ids = j.value("seed_ids", std::set<std::string>{});
  p.accepted_ids = j.value("accepted_ids", std::set<std::string>{});
  p.rejected_ids = j.value("rejected_ids", std::set<std::string>{});
  p.accepted_ids.insert(p.seed_ids.begin(), p.seed_ids.end());
}

std::vector<json> parse_jsonl(std::string_view input) {
  std::vector<json> out;
  std::size_t line_no = 0;
  for (const auto& line : text::split(input, "\n")) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace publist
