#pragma once

#include <algorithm>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gcrid/errors.hpp"
#include "gcrid/utf8.hpp"

namespace gcrid {

// Ordered tokens; concatenation equals the source text with whitespace
// removed.
using TokenSeq = std::vector<std::string>;

// Word list for maximum matching. Entries are compared at the code-point
// level; max_len is the longest entry in code points.
class Lexicon {
 public:
  Lexicon() = default;

  explicit Lexicon(const std::vector<std::string>& words) {
    for (const auto& w : words) add(w);
  }

  void add(std::string_view word) {
    std::u32string cps = utf8::decode(word);
    if (cps.empty()) throw data_error("empty lexicon entry");
    for (char32_t cp : cps) {
      if (utf8::is_space(cp)) {
        throw data_error("lexicon entry contains whitespace: '" +
                         std::string(word) + "'");
      }
    }
    max_len_ = std::max(max_len_, cps.size());
    entries_.insert(std::move(cps));
  }

  bool contains(const std::u32string& word) const {
    return entries_.count(word) > 0;
  }
  bool contains(std::string_view word) const {
    return contains(utf8::decode(word));
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t max_len() const { return max_len_; }

  // One word per line, '#' comments, blank lines ignored.
  static Lexicon load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open lexicon file: " + path);
    Lexicon lex;
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
      lex.add(line);
    }
    return lex;
  }

 private:
  struct U32Hash {
    std::size_t operator()(const std::u32string& s) const {
      std::size_t h = 14695981039346656037ULL;
      for (char32_t c : s) h = (h ^ c) * 1099511628211ULL;
      return h;
    }
  };
  std::unordered_set<std::u32string, U32Hash> entries_;
  std::size_t max_len_ = 0;
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual TokenSeq segment(std::string_view text) const = 0;
};

// Forward maximum matching: at each position take the longest lexicon entry
// prefixing the remainder; with no match, emit the single code point and
// advance one. Whitespace is dropped before matching.
class FmmSegmenter : public Segmenter {
 public:
  FmmSegmenter() = default;
  explicit FmmSegmenter(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

  const Lexicon& lexicon() const { return lexicon_; }

  TokenSeq segment(std::string_view text) const override {
    std::u32string cps;
    for (char32_t cp : utf8::decode(text)) {
      if (!utf8::is_space(cp)) cps.push_back(cp);
    }
    TokenSeq out;
    std::size_t i = 0;
    while (i < cps.size()) {
      // Length-1 lexicon entries coincide with the no-match fallback, so
      // only candidates of length >= 2 need a lookup.
      std::size_t best = 1;
      std::size_t cap = std::min(lexicon_.max_len(), cps.size() - i);
      for (std::size_t len = cap; len >= 2; --len) {
        if (lexicon_.contains(cps.substr(i, len))) {
          best = len;
          break;
        }
      }
      out.push_back(utf8::encode(std::u32string_view(cps).substr(i, best)));
      i += best;
    }
    return out;
  }

 private:
  Lexicon lexicon_;
};

// Splits pre-tokenized text on U+0020 runs; used for corpora segmented by an
// external tool.
class WhitespaceSegmenter : public Segmenter {
 public:
  TokenSeq segment(std::string_view text) const override {
    TokenSeq out;
    std::string cur;
    for (char32_t cp : utf8::decode(text)) {
      if (utf8::is_space(cp)) {
        if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
      } else {
        utf8::append(cur, cp);
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
  }
};

// Sliding window of n consecutive code points, whitespace removed. Returns
// an empty list when the text is shorter than n code points.
inline std::vector<std::string> char_ngrams(std::string_view text,
                                            std::size_t n) {
  if (n < 1) throw std::invalid_argument("char_ngrams: n must be >= 1");
  std::u32string cps;
  for (char32_t cp : utf8::decode(text)) {
    if (!utf8::is_space(cp)) cps.push_back(cp);
  }
  std::vector<std::string> out;
  if (cps.size() < n) return out;
  out.reserve(cps.size() - n + 1);
  for (std::size_t i = 0; i + n <= cps.size(); ++i) {
    out.push_back(utf8::encode(std::u32string_view(cps).substr(i, n)));
  }
  return out;
}

// Token separator for n-gram feature keys; U+241F (symbol for unit
// separator) cannot occur in tokens.
inline constexpr char32_t kTokenJoiner = 0x241F;

// Sliding window over tokens, joined by kTokenJoiner.
inline std::vector<std::string> word_ngrams(const TokenSeq& tokens,
                                            std::size_t n) {
  if (n < 1) throw std::invalid_argument("word_ngrams: n must be >= 1");
  std::vector<std::string> out;
  if (tokens.size() < n) return out;
  const std::string sep = utf8::encode(kTokenJoiner);
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      gram += sep;
      gram += tokens[i + k];
    }
    out.push_back(std::move(gram));
  }
  return out;
}

}  // namespace gcrid
