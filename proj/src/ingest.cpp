#include "publist/ingest.hpp"

#include "publist/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace publist::ingest {

namespace {

constexpr std::array<std::string_view, 10> kParticles = {"van", "de", "der", "den", "von", "da", "del", "di", "la", "le"};

bool is_particle(std::string_view t) {
  return std::find(kParticles.begin(), kParticles.end(), t) != kParticles.end();
}

std::vector<std::string> split_any(std::string_view s, std::string_view seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string_view::npos) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

constexpr std::string_view kWhitespace = " \t\r\n";
constexpr std::string_view kGivenSeparators = " \t\r\n.-,;";

std::string strip_periods(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != '.') out.push_back(c);
  return out;
}

void append_given(std::vector<std::string>& given, std::string_view part) {
  for (auto& t : split_any(part, kGivenSeparators)) given.push_back(std::move(t));
}

// First four characters are digits and the fifth, if any, is not.
std::optional<int> leading_year(std::string_view s) {
  s = text::trim(s);
  if (s.size() < 4) return std::nullopt;
  for (std::size_t i = 0; i < 4; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  if (s.size() > 4 && std::isdigit(static_cast<unsigned char>(s[4]))) return std::nullopt;
  return std::stoi(std::string(s.substr(0, 4)));
}

std::optional<std::string> non_empty(std::string_view s) {
  auto t = text::trim(s);
  if (t.empty()) return std::nullopt;
  return std::string(t);
}

std::string one_line(std::string_view s) {
  std::string out(text::trim(s));
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  return out;
}

}  // namespace

AuthorName normalize_name(std::string_view raw) {
  auto trimmed = text::trim(raw);
  if (trimmed.empty()) throw ValidationError("author name must be non-empty");

  AuthorName name;
  name.raw = std::string(trimmed);
  const std::string folded = text::fold_lower(trimmed);

  if (auto comma = folded.find(','); comma != std::string::npos) {
    name.surname = text::collapse_whitespace(std::string_view(folded).substr(0, comma));
    append_given(name.given_tokens, std::string_view(folded).substr(comma + 1));
  } else {
    auto tokens = split_any(folded, kWhitespace);
    if (tokens.size() >= 2 && text::code_point_count(strip_periods(tokens.back())) == 1) {
      // "SURNAME X": leading particles plus the first real token form the surname.
      std::size_t end = 0;
      while (end + 1 < tokens.size() && is_particle(tokens[end])) ++end;
      std::vector<std::string> surname(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(end) + 1);
      name.surname = text::join(surname, " ");
      for (std::size_t i = end + 1; i < tokens.size(); ++i) append_given(name.given_tokens, tokens[i]);
    } else if (!tokens.empty()) {
      std::size_t start = tokens.size() - 1;
      while (start > 0 && is_particle(tokens[start - 1])) --start;
      std::vector<std::string> surname(tokens.begin() + static_cast<std::ptrdiff_t>(start), tokens.end());
      name.surname = text::join(surname, " ");
      for (std::size_t i = 0; i < start; ++i) append_given(name.given_tokens, tokens[i]);
    }
  }
  if (name.surname.empty()) throw ValidationError("no surname in author name '" + name.raw + "'");
  for (const auto& g : name.given_tokens) name.initials += text::first_code_point(g);
  return name;
}

std::string render_name(const AuthorName& name) {
  std::string out = name.surname + ",";
  if (!name.given_tokens.empty()) out += " " + text::join(name.given_tokens, " ");
  return out;
}

MatchKeys match_keys(const AuthorName& name) {
  MatchKeys keys;
  keys.k1 = name.surname + "|" + name.initials;
  keys.k2 = name.surname + "|" + text::first_code_point(name.initials);
  keys.k3 = name.surname;
  return keys;
}

// ---------------------------------------------------------------------------
// RIS

namespace {

struct RisLine {
  std::string tag;
  std::string value;
};

std::optional<RisLine> split_ris_line(std::string_view line) {
  if (line.size() < 3) return std::nullopt;
  auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  auto upper_or_digit = [&](char c) { return upper(c) || (c >= '0' && c <= '9'); };
  if (!upper(line[0]) || !upper_or_digit(line[1])) return std::nullopt;
  std::size_t i = 2;
  while (i < line.size() && line[i] == ' ') ++i;
  if (i == 2 || i >= line.size() || line[i] != '-') return std::nullopt;
  ++i;
  return RisLine{std::string(line.substr(0, 2)), std::string(text::trim(line.substr(i)))};
}

struct RisBlock {
  std::size_t first_line = 0;
  std::size_t last_line = 0;
  std::vector<RisLine> lines;
  bool terminated = false;
};

DocType ris_doc_type(std::string_view ty, std::string_view m3) {
  if (text::fold_lower(text::trim(m3)) == "review") return DocType::review;
  if (ty == "JOUR" || ty == "JFULL" || ty == "EJOUR" || ty == "MGZN") return DocType::article;
  if (ty == "CONF" || ty == "CPAPER") return DocType::proceedings;
  return DocType::other;
}

void build_ris_record(const RisBlock& block, const SourceTag& source, ParseResult& out) {
  PublicationRecord r;
  std::string ty, m3;
  std::optional<int> year;
  bool saw_year = false;
  std::vector<std::string> problems;

  for (const auto& [tag, value] : block.lines) {
    if (tag == "TY") ty = value;
    else if (tag == "M3") m3 = value;
    else if (tag == "TI" || tag == "T1") {
      if (r.title.empty()) r.title = value;
    } else if (tag == "AU" || tag == "A1") {
      if (!value.empty()) {
        try {
          r.authors.push_back(normalize_name(value));
        } catch (const ValidationError& e) {
          problems.emplace_back(e.what());
        }
      }
    } else if (tag == "PY" || tag == "Y1") {
      if (!saw_year) {
        saw_year = true;
        year = leading_year(value);
      }
    } else if (tag == "AB" || tag == "N2") {
      if (!r.abstract) r.abstract = non_empty(value);
    } else if (tag == "T2" || tag == "JO" || tag == "JF") {
      if (!r.venue) r.venue = non_empty(value);
    } else if (tag == "KW") {
      if (!value.empty()) r.keywords.push_back(value);
    } else if (tag == "DO") {
      if (!r.doi && !value.empty()) r.doi = normalize_doi(value);
    } else if (tag == "AD" || tag == "C1") {
      if (!value.empty()) r.addresses.push_back(value);
    }
  }

  if (!block.terminated) problems.emplace_back("block not terminated by ER");
  if (r.title.empty()) problems.emplace_back("missing title (TI/T1)");
  if (r.authors.empty()) problems.emplace_back("missing author (AU/A1)");
  if (!year) problems.emplace_back("missing or unparseable year (PY/Y1)");
  else {
    r.year = *year;
    if (r.year < 1500 || r.year > current_year() + 1) problems.emplace_back("year range");
  }

  if (!problems.empty()) {
    ++out.report.records_rejected;
    for (auto& p : problems) out.report.violations.push_back({block.first_line, block.last_line, std::move(p)});
    return;
  }
  r.doc_type = ris_doc_type(ty, m3);
  r.provenance = {source};
  assign_record_id(r);
  out.records.push_back(std::move(r));
  ++out.report.records_parsed;
}

}  // namespace

ParseResult parse_ris(std::string_view input, const SourceTag& source) {
  ParseResult out;
  out.report.source_id = source.source_id;
  if (input.substr(0, 3) == "\xEF\xBB\xBF") input.remove_prefix(3);

  std::optional<RisBlock> block;
  std::size_t line_no = 0;
  for (const auto& raw_line : text::split(input, "\n")) {
    ++line_no;
    std::string_view line = raw_line;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto parsed = split_ris_line(line);
    if (!parsed) {
      // Continuation of a wrapped value.
      if (block && !block->lines.empty() && !text::trim(line).empty()) {
        auto& last = block->lines.back().value;
        if (!last.empty()) last.push_back(' ');
        last.append(text::trim(line));
        block->last_line = line_no;
      }
      continue;
    }
    if (parsed->tag == "TY") {
      if (block) build_ris_record(*block, source, out);
      block = RisBlock{line_no, line_no, {}, false};
      block->lines.push_back(std::move(*parsed));
    } else if (parsed->tag == "ER") {
      if (block) {
        block->last_line = line_no;
        block->terminated = true;
        build_ris_record(*block, source, out);
        block.reset();
      }
    } else if (block) {
      block->lines.push_back(std::move(*parsed));
      block->last_line = line_no;
    }
  }
  if (block) build_ris_record(*block, source, out);
  return out;
}

std::string serialize_ris(const std::vector<PublicationRecord>& records) {
  std::string out;
  auto emit = [&out](std::string_view tag, std::string_view value) {
    out.append(tag);
    out.append("  - ");
    out.append(one_line(value));
    out.push_back('\n');
  };
  for (const auto& r : records) {
    switch (r.doc_type) {
      case DocType::article: emit("TY", "JOUR"); break;
      case DocType::review:
        emit("TY", "JOUR");
        emit("M3", "Review");
        break;
      case DocType::proceedings: emit("TY", "CPAPER"); break;
      case DocType::other: emit("TY", "GEN"); break;
    }
    for (const auto& a : r.authors) emit("AU", a.raw.empty() ? render_name(a) : a.raw);
    emit("TI", r.title);
    emit("PY", std::to_string(r.year));
    if (r.abstract) emit("AB", *r.abstract);
    if (r.venue) emit("JO", *r.venue);
    for (const auto& k : r.keywords) emit("KW", k);
    if (r.doi) emit("DO", *r.doi);
    for (const auto& a : r.addresses) emit("AD", a);
    out.append("ER  - \n\n");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tables

ColumnMap default_column_map() {
  return {
      {"TI", Field::title},         {"Title", Field::title},
      {"AU", Field::authors},       {"AF", Field::authors},          {"Authors", Field::authors},
      {"PY", Field::year},          {"Year", Field::year},
      {"AB", Field::abstract},      {"Abstract", Field::abstract},
      {"SO", Field::venue},         {"Source", Field::venue},        {"Venue", Field::venue},
      {"DI", Field::doi},           {"DOI", Field::doi},
      {"DE", Field::keywords},      {"Keywords", Field::keywords},
      {"C1", Field::addresses},     {"Addresses", Field::addresses},
      {"DT", Field::doc_type},      {"Document Type", Field::doc_type},
      {"CR", Field::cited_refs},    {"Cited References", Field::cited_refs},
      {"UT", Field::native_id},     {"Accession Number", Field::native_id},
  };
}

std::vector<TableRow> read_table(std::string_view input, char delimiter) {
  std::vector<TableRow> rows;
  TableRow row;
  std::string cell;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t line = 1;
  row.line = 1;

  auto end_cell = [&] {
    row.cells.push_back(std::move(cell));
    cell.clear();
  };
  auto end_row = [&] {
    end_cell();
    if (row_has_content || row.cells.size() > 1 || !row.cells.front().empty()) rows.push_back(std::move(row));
    row = TableRow{};
    row_has_content = false;
  };

  for (std::size_t i = 0; i < input.size(); ++i) {
    char c = input[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < input.size() && input[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"' && cell.empty()) {
      in_quotes = true;
      row_has_content = true;
    } else if (c == delimiter) {
      end_cell();
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      end_row();
      ++line;
      row.line = line;
    } else {
      cell.push_back(c);
    }
  }
  if (!cell.empty() || !row.cells.empty() || row_has_content) end_row();
  return rows;
}

namespace {

std::vector<std::string> split_multi(std::string_view cell) {
  std::vector<std::string> out;
  for (auto& part : text::split(cell, "; ")) {
    auto t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

ParseResult parse_table(std::string_view input, const ColumnMap& columns, const SourceTag& source, char delimiter) {
  ParseResult out;
  out.report.source_id = source.source_id;
  if (input.substr(0, 3) == "\xEF\xBB\xBF") input.remove_prefix(3);
  auto rows = read_table(input, delimiter);
  if (rows.empty()) return out;

  std::vector<std::optional<Field>> header;
  for (const auto& name : rows.front().cells) {
    auto it = columns.find(std::string(text::trim(name)));
    header.push_back(it == columns.end() ? std::nullopt : std::optional<Field>(it->second));
  }

  for (std::size_t ri = 1; ri < rows.size(); ++ri) {
    const auto& row = rows[ri];
    std::vector<std::string> problems;
    if (row.cells.size() != header.size())
      problems.push_back("expected " + std::to_string(header.size()) + " cells, found " + std::to_string(row.cells.size()));

    PublicationRecord r;
    std::optional<int> year;
    bool saw_year = false;
    for (std::size_t ci = 0; ci < row.cells.size() && ci < header.size() && problems.empty(); ++ci) {
      if (!header[ci]) continue;
      std::string_view cell = row.cells[ci];
      switch (*header[ci]) {
        case Field::title:
          if (r.title.empty()) r.title = std::string(text::trim(cell));
          break;
        case Field::authors:
          if (!r.authors.empty()) break;
          for (const auto& a : split_multi(cell)) {
            try {
              r.authors.push_back(normalize_name(a));
            } catch (const ValidationError& e) {
              problems.emplace_back(e.what());
            }
          }
          break;
        case Field::year:
          saw_year = true;
          year = leading_year(cell);
          break;
        case Field::abstract:
          if (!r.abstract) r.abstract = non_empty(cell);
          break;
        case Field::venue:
          if (!r.venue) r.venue = non_empty(cell);
          break;
        case Field::doi:
          if (!r.doi && !text::trim(cell).empty()) r.doi = normalize_doi(cell);
          break;
        case Field::keywords:
          for (auto& k : split_multi(cell)) r.keywords.push_back(std::move(k));
          break;
        case Field::addresses:
          for (auto& a : split_multi(cell)) r.addresses.push_back(std::move(a));
          break;
        case Field::doc_type:
          r.doc_type = parse_doc_type(cell);
          break;
        case Field::cited_refs: {
          auto refs = split_multi(cell);
          if (!refs.empty()) {
            if (!r.cited_refs) r.cited_refs.emplace();
            for (const auto& ref : refs) r.cited_refs->push_back(normalize_ref_key(ref));
          }
          break;
        }
        case Field::native_id:
          if (!text::trim(cell).empty()) r.native_ids[source.source_id] = std::string(text::trim(cell));
          break;
      }
    }

    if (problems.empty()) {
      if (r.title.empty()) problems.emplace_back("missing title");
      if (r.authors.empty()) problems.emplace_back("missing author");
      if (!year) problems.emplace_back(saw_year ? "unparseable year" : "missing year");
      else {
        r.year = *year;
        if (r.year < 1500 || r.year > current_year() + 1) problems.emplace_back("year range");
      }
    }
    std::size_t last_line = ri + 1 < rows.size() ? rows[ri + 1].line - 1 : row.line;
    if (!problems.empty()) {
      ++out.report.records_rejected;
      for (auto& p : problems) out.report.violations.push_back({row.line, std::max(row.line, last_line), std::move(p)});
      continue;
    }
    r.provenance = {source};
    assign_record_id(r);
    out.records.push_back(std::move(r));
    ++out.report.records_parsed;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trajectory

TrajectoryError::TrajectoryError(std::size_t line, const std::string& message)
    : ValidationError("trajectory line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::optional<int> strict_year(std::string_view s) {
  s = text::trim(s);
  if (s.size() != 4 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  return std::stoi(std::string(s));
}

}  // namespace

std::vector<AddressKey> parse_trajectory(std::string_view input) {
  std::vector<AddressKey> keys;
  std::size_t line_no = 0;
  for (const auto& raw_line : text::split(input, "\n")) {
    ++line_no;
    std::string_view line = raw_line;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (text::trim(line).empty()) continue;

    auto fields = text::split(line, "|");
    if (fields.size() < 2 || fields.size() > 4)
      throw TrajectoryError(line_no, "expected 2 to 4 '|'-separated fields");

    AddressKey key;
    key.line = std::string(text::trim(raw_line));

    auto years = text::trim(fields[0]);
    if (!years.empty()) {
      auto dash = years.find('-');
      if (dash == std::string_view::npos) {
        auto y = strict_year(years);
        if (!y) throw TrajectoryError(line_no, "bad year '" + std::string(years) + "'");
        key.year_start = key.year_end = y;
      } else {
        auto start = text::trim(years.substr(0, dash));
        auto end = text::trim(years.substr(dash + 1));
        if (!start.empty()) {
          key.year_start = strict_year(start);
          if (!key.year_start) throw TrajectoryError(line_no, "bad start year '" + std::string(start) + "'");
        }
        if (!end.empty()) {
          key.year_end = strict_year(end);
          if (!key.year_end) throw TrajectoryError(line_no, "bad end year '" + std::string(end) + "'");
        }
        if (!key.year_start && !key.year_end) throw TrajectoryError(line_no, "empty year range");
      }
      if (key.year_start && key.year_end && *key.year_start > *key.year_end)
        throw TrajectoryError(line_no, "start year after end year");
    }

    for (auto& t : fingerprint_tokens(fields[1])) key.org_tokens.insert(std::move(t));
    if (fields.size() >= 3) {
      auto city = text::collapse_whitespace(text::fold_lower(fields[2]));
      if (!city.empty()) key.city = city;
    }
    if (fields.size() >= 4) {
      auto cc = std::string(text::trim(fields[3]));
      if (!cc.empty()) {
        if (cc.size() != 2 || !std::isalpha(static_cast<unsigned char>(cc[0])) ||
            !std::isalpha(static_cast<unsigned char>(cc[1])))
          throw TrajectoryError(line_no, "country must be a 2-letter code");
        for (auto& c : cc) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        key.country = cc;
      }
    }
    if (key.org_tokens.empty() && !key.city) throw TrajectoryError(line_no, "needs an organisation or a city");
    keys.push_back(std::move(key));
  }
  return keys;
}

std::vector<std::string> load_function_words(std::string_view input) {
  std::vector<std::string> words;
  std::set<std::string> seen;
  for (const auto& raw_line : text::split(input, "\n")) {
    std::string_view line = raw_line;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto w = text::fold_lower(text::trim(line));
    if (!w.empty() && seen.insert(w).second) words.push_back(w);
  }
  return words;
}

std::optional<Format> parse_format(std::string_view name) {
  auto n = text::fold_lower(text::trim(name));
  if (n == "ris") return Format::ris;
  if (n == "csv") return Format::csv;
  if (n == "tsv") return Format::tsv;
  return std::nullopt;
}

std::optional<Format> format_from_path(std::string_view path) {
  auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  return parse_format(path.substr(dot + 1));
}

ParseResult parse(std::string_view input, Format format, const SourceTag& source) {
  switch (format) {
    case Format::ris: return parse_ris(input, source);
    case Format::csv: return parse_table(input, default_column_map(), source, ',');
    case Format::tsv: return parse_table(input, default_column_map(), source, '\t');
  }
  return {};
}

}  // namespace publist::ingest
