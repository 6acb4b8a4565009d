#pragma once

#include "publist/model.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace publist::ingest {

struct Violation {
  std::size_t first_line = 0;  // 1-based, inclusive
  std::size_t last_line = 0;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct IngestReport {
  std::string source_id;
  std::size_t records_parsed = 0;
  std::size_t records_rejected = 0;
  std::vector<Violation> violations;
};

struct ParseResult {
  std::vector<PublicationRecord> records;
  IngestReport report;
};

/// Normalizes a raw author string. Throws ValidationError on blank input or
/// when no surname can be recovered.
AuthorName normalize_name(std::string_view raw);

/// "surname, given tokens" form; normalize_name(render_name(n)) reproduces n
/// apart from the raw field.
std::string render_name(const AuthorName& name);

struct MatchKeys {
  std::string k1;  // surname|all initials
  std::string k2;  // surname|first initial
  std::string k3;  // surname
};

MatchKeys match_keys(const AuthorName& name);
inline std::string k2_key(const AuthorName& name) { return match_keys(name).k2; }

/// Parses RIS text. Malformed blocks are reported, never thrown.
ParseResult parse_ris(std::string_view text, const SourceTag& source);

std::string serialize_ris(const std::vector<PublicationRecord>& records);

enum class Field { title, authors, year, abstract, venue, doi, keywords, addresses, doc_type, cited_refs, native_id };

using ColumnMap = std::map<std::string, Field>;

/// Header names of common tabular exports (WoS field tags and plain English).
ColumnMap default_column_map();

/// Parses delimited text whose first line is a header; quoting follows
/// RFC 4180. Multi-valued cells are split on "; ".
ParseResult parse_table(std::string_view text, const ColumnMap& columns, const SourceTag& source, char delimiter = ',');

/// Splits one RFC 4180 document into rows; each row carries its 1-based
/// starting line.
struct TableRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};
std::vector<TableRow> read_table(std::string_view text, char delimiter);

class TrajectoryError : public ValidationError {
 public:
  TrajectoryError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses `YYYY-YYYY | organisation | city | CC` lines; throws TrajectoryError.
std::vector<AddressKey> parse_trajectory(std::string_view text);

/// One word per line; blank lines and `#` comments skipped.
std::vector<std::string> load_function_words(std::string_view text);

enum class Format { ris, csv, tsv };

std::optional<Format> parse_format(std::string_view name);
std::optional<Format> format_from_path(std::string_view path);

ParseResult parse(std::string_view text, Format format, const SourceTag& source);

}  // namespace publist::ingest
