#pragma once

#include "publist/model.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace publist {

using json = nlohmann::json;

void to_json(json& j, const SourceTag& s);
void from_json(const json& j, SourceTag& s);

void to_json(json& j, const AuthorName& a);
/// Accepts either the object form or a bare string (normalized on load).
void from_json(const json& j, AuthorName& a);

void to_json(json& j, const AddressKey& k);
void from_json(const json& j, AddressKey& k);

void to_json(json& j, const PublicationRecord& r);
/// A missing record_id is derived; a present one is kept as written.
void from_json(const json& j, PublicationRecord& r);

void to_json(json& j, const Config& c);
/// Missing fields keep their defaults; unknown weight dimensions throw.
void from_json(const json& j, Config& c);

void to_json(json& j, const ResearcherProfile& p);
/// Derived signature fields are ignored on load. `trajectory` may be a list of
/// objects or a string in trajectory-file syntax.
void from_json(const json& j, ResearcherProfile& p);

/// One compact JSON document per line.
template <typename T>
std::string to_jsonl(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    out += json(item).dump();
    out.push_back('\n');
  }
  return out;
}

/// Parses newline-delimited JSON, skipping blank lines. Throws ValidationError
/// naming the offending line.
std::vector<json> parse_jsonl(std::string_view text);

}  // namespace publist
