#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gcrid/corpus.hpp"
#include "gcrid/errors.hpp"
#include "gcrid/features.hpp"
#include "gcrid/segmentation.hpp"

namespace gcrid {

// One parallel sentence pair: pivot-dialect tokens against another
// dialect's tokens.
struct ParallelPair {
  TokenSeq source_tokens;
  TokenSeq target_tokens;
  std::size_t target_tag = 0;
};

// A divergent expression mapping mined from one LCS gap.
struct DivergentPair {
  std::string source_expr;
  std::string target_expr;
  std::size_t target_tag = 0;
};

// A maximum-length common subsequence as strictly increasing index pairs.
// Tie-break among equal-length LCSs: standard dynamic programming over
// suffixes with a "prefer match, then prefer advancing a" backtrace.
inline std::vector<std::pair<std::size_t, std::size_t>> lcs(
    const TokenSeq& a, const TokenSeq& b) {
  const std::size_t n = a.size(), m = b.size();
  // len[i][j] = LCS length of a[i:], b[j:]
  std::vector<std::vector<std::uint32_t>> len(n + 1,
                                              std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      if (a[i] == b[j]) {
        len[i][j] = len[i + 1][j + 1] + 1;
      } else {
        len[i][j] = std::max(len[i + 1][j], len[i][j + 1]);
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  matches.reserve(len[0][0]);
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j] && len[i][j] == len[i + 1][j + 1] + 1) {
      matches.emplace_back(i, j);
      ++i;
      ++j;
    } else if (len[i + 1][j] >= len[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return matches;
}

namespace detail {

inline std::string join_tokens(const TokenSeq& tokens, std::size_t begin,
                               std::size_t end) {
  std::string out;
  for (std::size_t k = begin; k < end; ++k) out += tokens[k];
  return out;
}

}  // namespace detail

// Removes the LCS and pairs up the residual spans: each gap between
// consecutive matches (and before the first / after the last) where both
// sides are non-empty yields one DivergentPair. One-sided gaps are
// insertions or deletions and carry no mapping; gaps whose two sides
// concatenate to the same string are segmentation artifacts and are
// dropped too.
inline std::vector<DivergentPair> extract_divergent(const ParallelPair& pair) {
  auto matches = lcs(pair.source_tokens, pair.target_tokens);
  std::vector<DivergentPair> out;
  std::size_t prev_a = 0, prev_b = 0;
  auto flush_gap = [&](std::size_t end_a, std::size_t end_b) {
    if (end_a > prev_a && end_b > prev_b) {
      std::string src = detail::join_tokens(pair.source_tokens, prev_a, end_a);
      std::string tgt = detail::join_tokens(pair.target_tokens, prev_b, end_b);
      if (src != tgt) out.push_back({std::move(src), std::move(tgt), pair.target_tag});
    }
  };
  for (auto [ia, ib] : matches) {
    flush_gap(ia, ib);
    prev_a = ia + 1;
    prev_b = ib + 1;
  }
  flush_gap(pair.source_tokens.size(), pair.target_tokens.size());
  return out;
}

// Mines per-dialect dictionaries from parallel pairs: source expressions of
// divergent mappings go to the pivot dialect, target expressions to the
// pair's dialect. Triples seen fewer than min_pair_count times are dropped.
inline DialectWordSets build_alignment_sets(
    const std::vector<ParallelPair>& pairs, const TagSet& tags,
    std::size_t pivot_tag, std::size_t min_pair_count = 1,
    const ScriptConversionTable* table = nullptr) {
  if (min_pair_count < 1) {
    throw std::invalid_argument("build_alignment_sets: min_pair_count must be >= 1");
  }
  if (pivot_tag >= tags.size()) {
    throw std::invalid_argument("build_alignment_sets: pivot tag out of range");
  }
  std::map<std::tuple<std::string, std::string, std::size_t>, std::size_t>
      triple_counts;
  for (const auto& pair : pairs) {
    if (pair.source_tokens.empty() || pair.target_tokens.empty()) {
      throw data_error("parallel pair with an empty side");
    }
    if (pair.target_tag >= tags.size()) {
      throw data_error("parallel pair with out-of-range target tag");
    }
    const ParallelPair* effective = &pair;
    ParallelPair normalized;
    if (table != nullptr) {
      normalized.target_tag = pair.target_tag;
      for (const auto& t : pair.source_tokens) {
        normalized.source_tokens.push_back(to_simplified(t, *table));
      }
      for (const auto& t : pair.target_tokens) {
        normalized.target_tokens.push_back(to_simplified(t, *table));
      }
      effective = &normalized;
    }
    for (auto& div : extract_divergent(*effective)) {
      triple_counts[{std::move(div.source_expr), std::move(div.target_expr),
                     div.target_tag}]++;
    }
  }
  DialectWordSets sets(tags, WordSetProvenance::ALIGNMENT);
  for (const auto& [triple, count] : triple_counts) {
    if (count < min_pair_count) continue;
    sets.add(pivot_tag, std::get<0>(triple));
    sets.add(std::get<2>(triple), std::get<1>(triple));
  }
  return sets;
}

// Raw parallel pair as read from a pair file; texts are kept so evaluation
// can exclude pairs that overlap a held-out split.
struct RawParallelPair {
  std::string pivot_text;
  std::string target_text;
  std::size_t target_tag = 0;
};

// `pivot_text<TAB>target_tag_id<TAB>target_text` per line, '#' comments.
inline std::vector<RawParallelPair> load_parallel_pairs(const std::string& path,
                                                        const TagSet& tags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open parallel-pair file: " + path);
  std::vector<RawParallelPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto where = path + " line " + std::to_string(line_no);
    if (!utf8::is_valid(line)) throw data_error(where + ": invalid UTF-8");
    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string::npos ? std::string::npos
                                          : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos) {
      throw data_error(where + ": expected pivot<TAB>tag<TAB>target");
    }
    std::string pivot = line.substr(0, tab1);
    std::string tag_id = line.substr(tab1 + 1, tab2 - tab1 - 1);
    std::string target = line.substr(tab2 + 1);
    auto tag = tags.index_of(tag_id);
    if (!tag) throw data_error(where + ": unknown tag " + tag_id);
    if (pivot.empty() || target.empty()) {
      throw data_error(where + ": empty pair side");
    }
    pairs.push_back({std::move(pivot), std::move(target), *tag});
  }
  return pairs;
}

inline void save_parallel_pairs(const std::vector<RawParallelPair>& pairs,
                                const TagSet& tags, std::ostream& out) {
  for (const auto& p : pairs) {
    out << p.pivot_text << '\t' << tags.id(p.target_tag) << '\t'
        << p.target_text << '\n';
  }
}

inline std::vector<ParallelPair> tokenize_pairs(
    const std::vector<RawParallelPair>& raw, const Segmenter& segmenter) {
  std::vector<ParallelPair> out;
  out.reserve(raw.size());
  for (const auto& p : raw) {
    out.push_back({segmenter.segment(p.pivot_text),
                   segmenter.segment(p.target_text), p.target_tag});
  }
  return out;
}

}  // namespace gcrid
