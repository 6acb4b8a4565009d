#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace publist {

/// Raised when an input violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceTag {
  std::string source_id;
  std::string source_name;
  int trust_rank = 0;  // 0 = most trusted

  bool operator==(const SourceTag&) const = default;
};

struct AuthorName {
  std::string raw;
  std::string surname;
  std::vector<std::string> given_tokens;
  std::string initials;

  bool operator==(const AuthorName&) const = default;
};

struct AddressKey {
  std::set<std::string> org_tokens;
  std::optional<std::string> city;
  std::optional<std::string> country;
  std::optional<int> year_start;
  std::optional<int> year_end;
  std::string line;  // trajectory line as written, used verbatim in evidence

  bool operator==(const AddressKey&) const = default;
};

enum class DocType { article, review, proceedings, other };

std::string_view to_string(DocType t);
DocType parse_doc_type(std::string_view s);  // unknown values map to other

struct PublicationRecord {
  std::string record_id;
  std::optional<std::string> doi;
  std::map<std::string, std::string> native_ids;
  std::string title;
  std::optional<std::string> abstract;
  int year = 0;
  std::optional<std::string> venue;
  DocType doc_type = DocType::article;
  std::vector<AuthorName> authors;
  std::vector<std::string> addresses;
  std::vector<std::string> keywords;
  std::optional<std::vector<std::string>> cited_refs;
  std::vector<SourceTag> provenance;

  bool operator==(const PublicationRecord&) const = default;
};

enum class Dimension { address = 0, coauthor, subject, citedrefs, style };
inline constexpr std::size_t kDimensionCount = 5;
inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::address, Dimension::coauthor, Dimension::subject, Dimension::citedrefs, Dimension::style};

std::string_view to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);

template <typename T>
using PerDimension = std::array<T, kDimensionCount>;

inline constexpr std::size_t index(Dimension d) { return static_cast<std::size_t>(d); }

std::vector<std::string> default_function_words();

struct Config {
  PerDimension<double> weights = {0.30, 0.30, 0.20, 0.10, 0.10};
  double tau_hi = 0.70;
  double tau_lo = 0.20;
  int k_coauthor = 1;
  double title_sim_threshold = 0.90;
  int n_min_style = 5;
  std::vector<std::string> function_words = default_function_words();
  std::vector<std::string> trust_order;
  // Floor for the address-based retrieval method.
  double address_floor = 0.5;
  int max_inclusion_rounds = 1000;

  bool operator==(const Config&) const = default;
};

/// Every violated Config invariant; empty iff valid.
std::vector<std::string> validate_config(const Config& cfg);

struct ResearcherProfile {
  std::vector<AuthorName> variants;
  std::vector<AddressKey> trajectory;
  std::set<std::string> seed_ids;
  std::set<std::string> accepted_ids;
  std::set<std::string> rejected_ids;

  // Derived from accepted records; see disambiguate::refresh_signature.
  std::set<std::string> coauthor_keys;
  std::set<std::string> subject_vocab;
  std::set<std::string> accepted_refs;
};

std::vector<std::string> validate_profile(const ResearcherProfile& p);

/// Sorted, de-duplicated alphanumeric tokens of the folded title.
std::vector<std::string> fingerprint_tokens(std::string_view title);

/// Throws ValidationError on an empty title.
std::string title_fingerprint(std::string_view title);

std::string normalize_doi(std::string_view doi);
std::string normalize_ref_key(std::string_view ref);

std::string derive_record_id(const PublicationRecord& r);

/// Sets record_id from the record's own fields and returns the record.
PublicationRecord& assign_record_id(PublicationRecord& r);

int current_year();

/// Every violated PublicationRecord invariant; empty iff valid.
std::vector<std::string> validate_record(const PublicationRecord& r, int this_year = current_year());

/// Every violated invariant of a session's source list.
std::vector<std::string> validate_sources(const std::vector<SourceTag>& sources);

}  // namespace publist
