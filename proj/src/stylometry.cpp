#include "publist/stylometry.hpp"

#include "publist/text.hpp"

#include <cmath>
#include <set>

namespace publist::stylometry {

std::vector<std::string> split_sentences(std::string_view input) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    auto s = text::trim(input.substr(start, end - start));
    if (!s.empty()) out.emplace_back(s);
    start = end;
  };
  for (std::size_t i = 0; i < input.size(); ++i) {
    char c = input[i];
    if (c != '.' && c != '?' && c != '!') continue;
    bool boundary = i + 1 == input.size() || input[i + 1] == ' ' || input[i + 1] == '\t' || input[i + 1] == '\n' ||
                    input[i + 1] == '\r';
    if (boundary) flush(i + 1);
  }
  flush(input.size());
  return out;
}

namespace {

struct TextCounts {
  std::vector<std::string> tokens;
  std::size_t sentences = 0;
  Punctuation punct;
};

void count_into(std::string_view part, TextCounts& counts) {
  for (std::size_t i = 0; i < part.size(); ++i) {
    switch (part[i]) {
      case ',': counts.punct.comma += 1; break;
      case ';': counts.punct.semicolon += 1; break;
      case ':': counts.punct.colon += 1; break;
      case '(': counts.punct.parenthesis += 1; break;
      case '-': counts.punct.hyphen += 1; break;
      default: break;
    }
  }
  counts.sentences += split_sentences(part).size();
  for (auto& t : text::alpha_tokens(text::fold_lower(part))) counts.tokens.push_back(std::move(t));
}

}  // namespace

StyleVector style_features(std::string_view title, const std::optional<std::string>& abstract,
                           const std::vector<std::string>& function_words) {
  TextCounts counts;
  count_into(title, counts);
  if (abstract) count_into(*abstract, counts);

  StyleVector v;
  const double n = static_cast<double>(counts.tokens.size());
  v.token_count = counts.tokens.size();
  if (counts.sentences > 0) v.mean_sentence_len = n / static_cast<double>(counts.sentences);
  if (n > 0) {
    std::set<std::string> types(counts.tokens.begin(), counts.tokens.end());
    v.type_token_ratio = static_cast<double>(types.size()) / n;
    const double scale = 100.0 / n;
    v.punct_per_100 = {counts.punct.comma * scale, counts.punct.semicolon * scale, counts.punct.colon * scale,
                       counts.punct.parenthesis * scale, counts.punct.hyphen * scale};
  }

  auto trimmed_title = text::trim(title);
  v.title_flags.has_colon = trimmed_title.find(':') != std::string_view::npos;
  v.title_flags.is_question = !trimmed_title.empty() && trimmed_title.back() == '?';
  auto title_tokens = text::alpha_tokens(text::fold_lower(trimmed_title));
  v.title_flags.starts_gerund = !title_tokens.empty() && title_tokens.front().size() >= 5 &&
                                title_tokens.front().ends_with("ing");

  v.fword_freq.assign(function_words.size(), 0.0);
  if (n > 0) {
    for (std::size_t w = 0; w < function_words.size(); ++w) {
      std::size_t hits = 0;
      for (const auto& t : counts.tokens)
        if (t == function_words[w]) ++hits;
      v.fword_freq[w] = static_cast<double>(hits) / n;
    }
  }
  return v;
}

CorpusStats corpus_stats(std::span<const StyleVector> docs) {
  if (docs.empty()) throw ValidationError("corpus statistics need at least one document");
  const std::size_t words = docs.front().fword_freq.size();
  CorpusStats stats;
  stats.doc_count = docs.size();
  stats.mean.assign(words, 0.0);
  stats.stddev.assign(words, 0.0);
  const double n = static_cast<double>(docs.size());
  for (std::size_t w = 0; w < words; ++w) {
    double sum = 0.0;
    for (const auto& d : docs) sum += d.fword_freq.at(w);
    const double mean = sum / n;
    double sq = 0.0;
    bool constant = true;
    for (const auto& d : docs) {
      sq += (d.fword_freq[w] - mean) * (d.fword_freq[w] - mean);
      constant = constant && d.fword_freq[w] == docs.front().fword_freq[w];
    }
    stats.mean[w] = constant ? docs.front().fword_freq[w] : mean;
    // Rounding in the mean must not turn a constant frequency into a tiny spread.
    stats.stddev[w] = constant ? 0.0 : std::sqrt(sq / n);
  }
  return stats;
}

StyleVector centroid(std::span<const StyleVector> docs) {
  if (docs.empty()) throw ValidationError("centroid of an empty corpus");
  const double n = static_cast<double>(docs.size());
  StyleVector c;
  c.fword_freq.assign(docs.front().fword_freq.size(), 0.0);
  double gerund = 0, colon = 0, question = 0, tokens = 0;
  for (const auto& d : docs) {
    c.mean_sentence_len += d.mean_sentence_len / n;
    c.type_token_ratio += d.type_token_ratio / n;
    c.punct_per_100.comma += d.punct_per_100.comma / n;
    c.punct_per_100.semicolon += d.punct_per_100.semicolon / n;
    c.punct_per_100.colon += d.punct_per_100.colon / n;
    c.punct_per_100.parenthesis += d.punct_per_100.parenthesis / n;
    c.punct_per_100.hyphen += d.punct_per_100.hyphen / n;
    for (std::size_t w = 0; w < c.fword_freq.size(); ++w) c.fword_freq[w] += d.fword_freq.at(w) / n;
    colon += d.title_flags.has_colon;
    question += d.title_flags.is_question;
    gerund += d.title_flags.starts_gerund;
    tokens += static_cast<double>(d.token_count);
  }
  // Majority vote for the flags.
  c.title_flags = {colon * 2 > n, question * 2 > n, gerund * 2 > n};
  c.token_count = static_cast<std::size_t>(std::llround(tokens / n));
  return c;
}

double burrows_delta(const StyleVector& doc, const StyleVector& centre, const CorpusStats& stats) {
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t w = 0; w < stats.stddev.size(); ++w) {
    const double sd = stats.stddev[w];
    if (!(sd > 0.0)) continue;
    const double z_doc = (doc.fword_freq.at(w) - stats.mean[w]) / sd;
    const double z_centre = (centre.fword_freq.at(w) - stats.mean[w]) / sd;
    total += std::abs(z_doc - z_centre);
    ++used;
  }
  return used == 0 ? 0.0 : total / static_cast<double>(used);
}

std::vector<ZComparison> z_comparisons(const StyleVector& doc, const StyleVector& centre, const CorpusStats& stats,
                                       const std::vector<std::string>& function_words) {
  std::vector<ZComparison> out;
  for (std::size_t w = 0; w < stats.stddev.size() && w < function_words.size(); ++w) {
    const double sd = stats.stddev[w];
    if (!(sd > 0.0)) continue;
    out.push_back({function_words[w], (doc.fword_freq.at(w) - stats.mean[w]) / sd,
                   (centre.fword_freq.at(w) - stats.mean[w]) / sd});
  }
  return out;
}

std::optional<StyleResult> style_score(const PublicationRecord& record, std::span<const StyleVector> accepted_corpus,
                                       const Config& cfg) {
  if (!record.abstract || text::trim(*record.abstract).empty()) return std::nullopt;
  if (accepted_corpus.size() < static_cast<std::size_t>(cfg.n_min_style)) return std::nullopt;

  const StyleVector doc = style_features(record.title, record.abstract, cfg.function_words);
  std::vector<StyleVector> pooled(accepted_corpus.begin(), accepted_corpus.end());
  pooled.push_back(doc);
  const CorpusStats stats = corpus_stats(pooled);
  const StyleVector centre = centroid(accepted_corpus);

  StyleResult result;
  result.delta = burrows_delta(doc, centre, stats);
  result.score = 1.0 / (1.0 + result.delta);
  result.comparisons = z_comparisons(doc, centre, stats, cfg.function_words);
  return result;
}

}  // namespace publist::stylometry
