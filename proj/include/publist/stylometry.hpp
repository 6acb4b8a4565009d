#pragma once

#include "publist/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace publist::stylometry {

struct Punctuation {
  double comma = 0.0;
  double semicolon = 0.0;
  double colon = 0.0;
  double parenthesis = 0.0;
  double hyphen = 0.0;
};

struct TitleFlags {
  bool has_colon = false;
  bool is_question = false;
  bool starts_gerund = false;
};

struct StyleVector {
  double mean_sentence_len = 0.0;  // tokens per sentence
  double type_token_ratio = 0.0;
  Punctuation punct_per_100;  // per 100 tokens
  TitleFlags title_flags;
  std::vector<double> fword_freq;  // one entry per configured function word
  std::size_t token_count = 0;
};

/// Mean and population standard deviation of each function-word frequency.
struct CorpusStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::size_t doc_count = 0;
};

std::vector<std::string> split_sentences(std::string_view text);

StyleVector style_features(std::string_view title, const std::optional<std::string>& abstract,
                           const std::vector<std::string>& function_words);

/// Throws ValidationError on an empty corpus.
CorpusStats corpus_stats(std::span<const StyleVector> docs);

/// Field-wise mean of the documents; throws ValidationError when empty.
StyleVector centroid(std::span<const StyleVector> docs);

/// Burrows' Delta over function words whose spread is non-zero; 0 when none is.
double burrows_delta(const StyleVector& doc, const StyleVector& centre, const CorpusStats& stats);

struct ZComparison {
  std::string word;
  double doc_z = 0.0;
  double centroid_z = 0.0;
};

std::vector<ZComparison> z_comparisons(const StyleVector& doc, const StyleVector& centre, const CorpusStats& stats,
                                       const std::vector<std::string>& function_words);

struct StyleResult {
  double score = 0.0;
  double delta = 0.0;
  std::vector<ZComparison> comparisons;
};

/// Empty unless the record has an abstract and the accepted corpus holds at
/// least n_min_style documents. Statistics pool the corpus with the record.
std::optional<StyleResult> style_score(const PublicationRecord& record, std::span<const StyleVector> accepted_corpus,
                                       const Config& cfg);

}  // namespace publist::stylometry
