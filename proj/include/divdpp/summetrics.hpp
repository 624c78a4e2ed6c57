// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace divdpp::metrics {

using Sentence = std::vector<std::string>;  // tokens, already normalized

/// Split on '.', '!' or '?' followed by whitespace (or end of text).
/// Terminators stay attached to their sentence; surrounding whitespace is
/// trimmed; empty pieces are dropped.
std::vector<std::string> sentence_split(const std::string& text);

/// Lowercase, split on whitespace, strip leading/trailing punctuation from
/// each token, drop tokens that end up empty.
Sentence tokenize(const std::string& sentence);

/// sentence_split + tokenize, dropping sentences with no tokens left.
std::vector<Sentence> tokenize_document(const std::string& text);

/// Jaccard overlap of the token *sets* of two sentences.  Two empty
/// sentences have overlap 0 by convention.
double jaccard(const Sentence& a, const Sentence& b);

/// Mean over summary sentences of the best Jaccard overlap against any
/// article sentence.  Empty summary raises UndefinedMetricError; an empty
/// article contributes 0 per sentence.
double js_upper_bound(const std::vector<Sentence>& summary,
                      const std::vector<Sentence>& article);

/// Mean over generated sentences of the number of article sentences whose
/// overlap strictly exceeds `gold_js` (the document's reference-summary
/// JS).  Empty generated summary raises UndefinedMetricError.
double sentence_coverage(const std::vector<Sentence>& generated,
                         const std::vector<Sentence>& article,
                         double gold_js);

/// Fraction of within-sentence summary bigram occurrences (counted with
/// multiplicity) that never appear in the article.  A summary with no
/// bigrams scores 0.
double novel_bigram_proportion(const std::vector<Sentence>& summary,
                               const std::vector<Sentence>& article);

struct DocumentRecord {
  std::string id;
  std::string article;
  std::string summary;                // reference summary
  std::optional<std::string> generated;
};

struct DocumentScores {
  std::string id;
  double gold_js = 0.0;  // JS of the reference summary
  double js = 0.0;
  double sc = 0.0;
  double novel = 0.0;
};

struct CorpusReport {
  double js = 0.0;    // macro averages over scored documents
  double sc = 0.0;
  double novel = 0.0;
  int documents = 0;  // scored
  int skipped = 0;    // missing generated text or undefined metrics
  int parse_errors = 0;
  std::vector<DocumentScores> per_document;
};

/// Score every record that has a generated summary; skip (and count) the
/// rest.  Averages are macro (per-document mean).
CorpusReport corpus_report(const std::vector<DocumentRecord>& records);

/// Read one JSON object per line ("id", "article", "summary", optional
/// "generated").  Records that fail to parse are counted and skipped.
std::vector<DocumentRecord> read_jsonl(std::istream& in, int* parse_errors);

}  // namespace divdpp::metrics
