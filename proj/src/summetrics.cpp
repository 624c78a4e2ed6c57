// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/summetrics.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>
#include <utility>

#include "json.hpp"

#include "divdpp/errors.hpp"

namespace divdpp::metrics {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::set<std::string> token_set(const Sentence& s) {
  return {s.begin(), s.end()};
}

using Bigram = std::pair<std::string, std::string>;

std::set<Bigram> article_bigrams(const std::vector<Sentence>& article) {
  std::set<Bigram> out;
  for (const Sentence& s : article) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      out.emplace(s[i], s[i + 1]);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> sentence_split(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    current += text[i];
    const bool at_end = (i + 1 == text.size());
    const bool boundary =
        is_terminator(text[i]) &&
        (at_end || std::isspace(static_cast<unsigned char>(text[i + 1])));
    if (boundary) {
      const std::string sentence = trim(current);
      if (!sentence.empty()) out.push_back(sentence);
      current.clear();
    }
  }
  const std::string tail = trim(current);
  if (!tail.empty()) out.push_back(tail);
  return out;
}

Sentence tokenize(const std::string& sentence) {
  Sentence out;
  std::string word;
  const auto flush = [&] {
    if (word.empty()) return;
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(word[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(word[e - 1]))) --e;
    if (e > b) out.push_back(word.substr(b, e - b));
    word.clear();
  };
  for (const char c : sentence) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  flush();
  return out;
}

std::vector<Sentence> tokenize_document(const std::string& text) {
  std::vector<Sentence> out;
  for (const std::string& sentence : sentence_split(text)) {
    Sentence tokens = tokenize(sentence);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

double jaccard(const Sentence& a, const Sentence& b) {
  const auto sa = token_set(a);
  const auto sb = token_set(b);
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const std::string& tok : sa) inter += sb.count(tok);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double js_upper_bound(const std::vector<Sentence>& summary,
                      const std::vector<Sentence>& article) {
  if (summary.empty()) {
    throw UndefinedMetricError("js_upper_bound: empty summary");
  }
  double acc = 0.0;
  for (const Sentence& s : summary) {
    double best = 0.0;
    for (const Sentence& a : article) best = std::max(best, jaccard(s, a));
    acc += best;
  }
  return acc / static_cast<double>(summary.size());
}

double sentence_coverage(const std::vector<Sentence>& generated,
                         const std::vector<Sentence>& article,
                         double gold_js) {
  if (generated.empty()) {
    throw UndefinedMetricError("sentence_coverage: empty generated summary");
  }
  double acc = 0.0;
  for (const Sentence& g : generated) {
    int covered = 0;
    for (const Sentence& a : article) {
      if (jaccard(g, a) > gold_js) ++covered;
    }
    acc += static_cast<double>(covered);
  }
  return acc / static_cast<double>(generated.size());
}

double novel_bigram_proportion(const std::vector<Sentence>& summary,
                               const std::vector<Sentence>& article) {
  const auto seen = article_bigrams(article);
  std::size_t total = 0;
  std::size_t novel = 0;
  for (const Sentence& s : summary) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      ++total;
      if (!seen.count(Bigram(s[i], s[i + 1]))) ++novel;
    }
  }
  if (total == 0) return 0.0;
  return static_cast<double>(novel) / static_cast<double>(total);
}

CorpusReport corpus_report(const std::vector<DocumentRecord>& records) {
  CorpusReport report;
  for (const DocumentRecord& rec : records) {
    if (!rec.generated.has_value()) {
      ++report.skipped;
      continue;
    }
    const auto article = tokenize_document(rec.article);
    const auto reference = tokenize_document(rec.summary);
    const auto generated = tokenize_document(*rec.generated);
    if (reference.empty() || generated.empty()) {
      ++report.skipped;  // metrics undefined for this document
      continue;
    }
    DocumentScores scores;
    scores.id = rec.id;
    scores.gold_js = js_upper_bound(reference, article);
    scores.js = js_upper_bound(generated, article);
    scores.sc = sentence_coverage(generated, article, scores.gold_js);
    scores.novel = novel_bigram_proportion(generated, article);
    report.js += scores.js;
    report.sc += scores.sc;
    report.novel += scores.novel;
    report.per_document.push_back(std::move(scores));
    ++report.documents;
  }
  if (report.documents > 0) {
    report.js /= report.documents;
    report.sc /= report.documents;
    report.novel /= report.documents;
  }
  return report;
}

std::vector<DocumentRecord> read_jsonl(std::istream& in, int* parse_errors) {
  std::vector<DocumentRecord> out;
  int errors = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    try {
      const nlohmann::json doc = nlohmann::json::parse(line);
      DocumentRecord rec;
      rec.id = doc.value("id", std::string{});
      rec.article = doc.at("article").get<std::string>();
      rec.summary = doc.at("summary").get<std::string>();
      if (doc.contains("generated") && !doc["generated"].is_null()) {
        rec.generated = doc["generated"].get<std::string>();
      }
      out.push_back(std::move(rec));
    } catch (const nlohmann::json::exception&) {
      ++errors;
    }
  }
  if (parse_errors) *parse_errors = errors;
  return out;
}

}  // namespace divdpp::metrics
