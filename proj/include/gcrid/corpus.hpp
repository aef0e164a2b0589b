#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gcrid/errors.hpp"
#include "gcrid/rng.hpp"
#include "gcrid/segmentation.hpp"
#include "gcrid/utf8.hpp"

namespace gcrid {

struct DialectTag {
  std::string id;            // short stable identifier, e.g. "MC"
  std::string display_name;  // human label
};

// Ordered set of dialect tags with unique ids. The order is significant:
// membership signatures are rendered in tag-set order.
class TagSet {
 public:
  explicit TagSet(std::vector<DialectTag> tags) : tags_(std::move(tags)) {
    if (tags_.size() < 2) throw data_error("tag set needs at least 2 tags");
    for (std::size_t i = 0; i < tags_.size(); ++i) {
      if (!valid_id(tags_[i].id)) {
        throw data_error("invalid tag id '" + tags_[i].id +
                         "' (expected [A-Z][A-Z0-9_]*)");
      }
      if (!index_.emplace(tags_[i].id, i).second) {
        throw data_error("duplicate tag id '" + tags_[i].id + "'");
      }
      if (tags_[i].display_name.empty()) tags_[i].display_name = tags_[i].id;
    }
  }

  static bool valid_id(std::string_view id) {
    if (id.empty() || id[0] < 'A' || id[0] > 'Z') return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
      return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
  }

  // The six Greater-China-Region varieties, in canonical signature order.
  static TagSet builtin_gcr() {
    return TagSet({{"MC", "Mainland China"},
                   {"HK", "Hong Kong"},
                   {"TW", "Taiwan"},
                   {"MAC", "Macao"},
                   {"MAL", "Malaysia"},
                   {"SGP", "Singapore"}});
  }

  // `id<TAB>display_name` per line (display optional), '#' comments.
  static TagSet load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open tag-set file: " + path);
    std::vector<DialectTag> tags;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      if (!utf8::is_valid(line)) {
        throw data_error(path + ": invalid UTF-8 at line " +
                         std::to_string(line_no));
      }
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        tags.push_back({line, line});
      } else {
        tags.push_back({line.substr(0, tab), line.substr(tab + 1)});
      }
    }
    return TagSet(std::move(tags));
  }

  std::size_t size() const { return tags_.size(); }
  const DialectTag& at(std::size_t i) const { return tags_.at(i); }
  const std::string& id(std::size_t i) const { return tags_.at(i).id; }
  const std::vector<DialectTag>& all() const { return tags_; }

  std::optional<std::size_t> index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const TagSet& other) const {
    if (tags_.size() != other.tags_.size()) return false;
    for (std::size_t i = 0; i < tags_.size(); ++i) {
      if (tags_[i].id != other.tags_[i].id) return false;
    }
    return true;
  }

 private:
  std::vector<DialectTag> tags_;
  std::unordered_map<std::string, std::size_t> index_;
};

// One classification unit: UTF-8 text plus the index of its tag in the
// owning corpus's tag set. Text is TSV-safe (no tabs or newlines) and
// non-empty after trimming.
struct LabeledSentence {
  std::string text;
  std::size_t tag = 0;
};

struct Corpus {
  TagSet tags;
  std::vector<LabeledSentence> sentences;

  std::vector<std::size_t> per_tag_counts() const {
    std::vector<std::size_t> counts(tags.size(), 0);
    for (const auto& s : sentences) counts.at(s.tag)++;
    return counts;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  auto ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
           c == '\f';
  };
  while (b < e && ws(s[b])) ++b;
  while (e > b && ws(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace detail

// Reads a `tag_id<TAB>text` UTF-8 TSV. Blank lines are ignored, '#' lines
// are comments. Line order is preserved.
inline Corpus load_tsv(const std::string& path, const TagSet& tag_set) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open corpus file: " + path);
  Corpus corpus{tag_set, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!utf8::is_valid(line)) {
      throw data_error(path + ": invalid UTF-8 at line " +
                       std::to_string(line_no));
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw data_error(path + ": malformed line (no tab) at line " +
                       std::to_string(line_no));
    }
    std::string tag_id = line.substr(0, tab);
    std::string text = detail::trim(line.substr(tab + 1));
    auto tag = tag_set.index_of(tag_id);
    if (!tag) {
      throw data_error(path + ": unknown tag " + tag_id + " at line " +
                       std::to_string(line_no));
    }
    if (text.empty()) {
      throw data_error(path + ": empty text at line " + std::to_string(line_no));
    }
    if (text.find('\t') != std::string::npos) {
      throw data_error(path + ": text contains tab at line " +
                       std::to_string(line_no));
    }
    corpus.sentences.push_back({std::move(text), *tag});
  }
  return corpus;
}

inline void save_tsv(const Corpus& corpus, std::ostream& out) {
  for (const auto& s : corpus.sentences) {
    out << corpus.tags.id(s.tag) << '\t' << s.text << '\n';
  }
}

inline void save_tsv(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write corpus file: " + path);
  save_tsv(corpus, out);
}

struct FilterOptions {
  double max_latin_ratio = 0.5;  // remove when latin ratio >= this
  std::size_t min_tokens = 15;   // remove when token count < this
  bool dedup = true;             // drop exact duplicate texts, keep first
  bool count_punctuation = true; // punctuation-only tokens count as tokens
  bool min_by_chars = false;     // minimum counts code points, not tokens
};

namespace detail {

struct TokenCounts {
  std::size_t latin = 0;
  std::size_t total = 0;  // latin runs + segmented non-latin tokens
};

inline bool is_punct_token(const std::string& tok) {
  for (char32_t cp : utf8::decode(tok)) {
    if (!utf8::is_punct(cp)) return false;
  }
  return true;
}

// Tokens are maximal [A-Za-z]+ runs plus segmenter output over the
// non-latin stretches between them.
inline TokenCounts count_tokens(const std::string& text,
                                const Segmenter& segmenter,
                                bool count_punctuation) {
  TokenCounts counts;
  std::u32string cps = utf8::decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (utf8::is_latin_alpha(cps[i])) {
      while (i < cps.size() && utf8::is_latin_alpha(cps[i])) ++i;
      counts.latin++;
      counts.total++;
    } else {
      std::size_t start = i;
      while (i < cps.size() && !utf8::is_latin_alpha(cps[i])) ++i;
      std::string chunk =
          utf8::encode(std::u32string_view(cps).substr(start, i - start));
      for (const auto& tok : segmenter.segment(chunk)) {
        if (!count_punctuation && is_punct_token(tok)) continue;
        counts.total++;
      }
    }
  }
  return counts;
}

}  // namespace detail

// Removes noisy sentences: Latin-heavy ones and short ones, plus exact
// duplicates when enabled. Survivor order is preserved; idempotent.
inline Corpus filter_corpus(const Corpus& corpus, const Segmenter& segmenter,
                            const FilterOptions& options = {}) {
  if (options.max_latin_ratio < 0.0 || options.max_latin_ratio > 1.0) {
    throw std::invalid_argument("filter_corpus: max_latin_ratio outside [0,1]");
  }
  Corpus out{corpus.tags, {}};
  std::unordered_set<std::string> seen;
  for (const auto& s : corpus.sentences) {
    auto counts =
        detail::count_tokens(s.text, segmenter, options.count_punctuation);
    double ratio = counts.total == 0
                       ? 1.0
                       : static_cast<double>(counts.latin) / counts.total;
    if (ratio >= options.max_latin_ratio) continue;
    std::size_t units = counts.total;
    if (options.min_by_chars) {
      units = 0;
      for (char32_t cp : utf8::decode(s.text)) {
        if (!utf8::is_space(cp)) ++units;
      }
    }
    if (units < options.min_tokens) continue;
    if (options.dedup && !seen.insert(s.text).second) continue;
    out.sentences.push_back(s);
  }
  return out;
}

// Exactly per_class sentences per tag via a seeded per-class shuffle.
// Output is grouped by tag in tag-set order.
inline Corpus balance_sample(const Corpus& corpus, std::size_t per_class,
                             std::uint64_t seed) {
  auto counts = corpus.per_tag_counts();
  for (std::size_t t = 0; t < corpus.tags.size(); ++t) {
    if (counts[t] < per_class) {
      throw data_error("balance_sample: tag " + corpus.tags.id(t) + " has " +
                       std::to_string(counts[t]) + " sentences, need " +
                       std::to_string(per_class));
    }
  }
  std::vector<std::vector<std::size_t>> by_tag(corpus.tags.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    by_tag[corpus.sentences[i].tag].push_back(i);
  }
  Rng rng(seed);
  Corpus out{corpus.tags, {}};
  out.sentences.reserve(per_class * corpus.tags.size());
  for (std::size_t t = 0; t < corpus.tags.size(); ++t) {
    deterministic_shuffle(by_tag[t], rng);
    for (std::size_t k = 0; k < per_class; ++k) {
      out.sentences.push_back(corpus.sentences[by_tag[t][k]]);
    }
  }
  return out;
}

struct FoldSplit {
  Corpus train;
  Corpus test;
  std::vector<std::size_t> train_indices;  // positions in the source corpus
  std::vector<std::size_t> test_indices;
};

// Stratified k-fold split: per class, test-fold sizes differ by at most one;
// folds partition the corpus. Within each fold the original sentence order
// is kept.
inline std::vector<FoldSplit> stratified_kfold(const Corpus& corpus,
                                               std::size_t k,
                                               std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
  auto counts = corpus.per_tag_counts();
  for (std::size_t t = 0; t < corpus.tags.size(); ++t) {
    if (counts[t] > 0 && counts[t] < k) {
      throw data_error("stratified_kfold: tag " + corpus.tags.id(t) +
                       " has " + std::to_string(counts[t]) +
                       " sentences, need at least " + std::to_string(k));
    }
  }
  std::vector<std::vector<std::size_t>> by_tag(corpus.tags.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    by_tag[corpus.sentences[i].tag].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> fold_test(k);
  for (std::size_t t = 0; t < corpus.tags.size(); ++t) {
    deterministic_shuffle(by_tag[t], rng);
    std::size_t n = by_tag[t].size();
    std::size_t base = n / k, rem = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      std::size_t take = base + (f < rem ? 1 : 0);
      for (std::size_t j = 0; j < take; ++j) {
        fold_test[f].push_back(by_tag[t][pos++]);
      }
    }
  }
  std::vector<FoldSplit> folds;
  folds.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(fold_test[f].begin(), fold_test[f].end());
    std::vector<char> in_test(corpus.sentences.size(), 0);
    for (std::size_t i : fold_test[f]) in_test[i] = 1;
    FoldSplit split{{corpus.tags, {}}, {corpus.tags, {}}, {}, {}};
    for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
      if (in_test[i]) {
        split.test.sentences.push_back(corpus.sentences[i]);
        split.test_indices.push_back(i);
      } else {
        split.train.sentences.push_back(corpus.sentences[i]);
        split.train_indices.push_back(i);
      }
    }
    folds.push_back(std::move(split));
  }
  return folds;
}

// Traditional -> simplified code-point mapping. Keys never map to
// themselves and no value is also a key, which makes conversion idempotent.
class ScriptConversionTable {
 public:
  ScriptConversionTable() = default;

  explicit ScriptConversionTable(
      const std::vector<std::pair<char32_t, char32_t>>& pairs) {
    for (auto [from, to] : pairs) add(from, to);
    validate();
  }

  void add(char32_t from, char32_t to) {
    if (from == to) {
      throw data_error("conversion table maps character to itself: " +
                       utf8::encode(from));
    }
    if (!mapping_.emplace(from, to).second) {
      throw data_error("duplicate conversion table key: " + utf8::encode(from));
    }
  }

  // Value set must be disjoint from the key set or conversion would not be
  // idempotent.
  void validate() const {
    for (auto [from, to] : mapping_) {
      if (mapping_.count(to)) {
        throw data_error("conversion table value " + utf8::encode(to) +
                         " is also a key; table is not idempotent");
      }
    }
  }

  std::optional<char32_t> lookup(char32_t cp) const {
    auto it = mapping_.find(cp);
    if (it == mapping_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return mapping_.size(); }

  std::vector<std::pair<char32_t, char32_t>> sorted_pairs() const {
    std::vector<std::pair<char32_t, char32_t>> pairs(mapping_.begin(),
                                                     mapping_.end());
    std::sort(pairs.begin(), pairs.end());
    return pairs;
  }

  // `traditional_char<TAB>simplified_char` per line, '#' comments.
  static ScriptConversionTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open conversion table: " + path);
    ScriptConversionTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto where = path + " line " + std::to_string(line_no);
      if (!utf8::is_valid(line)) throw data_error(where + ": invalid UTF-8");
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw data_error(where + ": malformed line (no tab)");
      }
      std::u32string from = utf8::decode(line.substr(0, tab));
      std::u32string to = utf8::decode(line.substr(tab + 1));
      if (from.size() != 1 || to.size() != 1) {
        throw data_error(where + ": keys and values must be single characters");
      }
      table.add(from[0], to[0]);
    }
    table.validate();
    return table;
  }

 private:
  std::unordered_map<char32_t, char32_t> mapping_;
};

// Replaces every mapped code point; everything else passes through. Output
// length in code points equals input length.
inline std::string to_simplified(std::string_view text,
                                 const ScriptConversionTable& table) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : utf8::decode(text)) {
    if (auto mapped = table.lookup(cp)) {
      utf8::append(out, *mapped);
    } else {
      utf8::append(out, cp);
    }
  }
  return out;
}

inline Corpus to_simplified(const Corpus& corpus,
                            const ScriptConversionTable& table) {
  Corpus out{corpus.tags, {}};
  out.sentences.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    out.sentences.push_back({to_simplified(s.text, table), s.tag});
  }
  return out;
}

}  // namespace gcrid
