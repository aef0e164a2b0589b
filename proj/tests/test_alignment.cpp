#include "gcrid/alignment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcrid/rng.hpp"

using namespace gcrid;

namespace {

TagSet mc_hk_tw() {
  return TagSet({{"MC", ""}, {"HK", ""}, {"TW", ""}});
}

// Exhaustive LCS length: enumerate all subsequences of a and test each
// against b.
std::size_t lcs_brute_force(const TokenSeq& a, const TokenSeq& b) {
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << a.size()); ++mask) {
    TokenSeq sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (1ULL << i)) sub.push_back(a[i]);
    }
    std::size_t j = 0;
    for (const auto& tok : b) {
      if (j < sub.size() && tok == sub[j]) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

TokenSeq random_tokens(Rng& rng, std::size_t max_len, std::size_t alphabet) {
  TokenSeq out;
  std::size_t len = bounded(rng, max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(std::string(1, static_cast<char>('a' + bounded(rng, alphabet))));
  }
  return out;
}

TEST(Lcs, HandComputedExample) {
  TokenSeq a{"我", "用", "人机界面"};
  TokenSeq b{"我", "用", "人机介面"};
  auto matches = lcs(a, b);
  ASSERT_EQ(matches.size(), 2u);
  EXPECT_EQ(matches[0], (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_EQ(matches[1], (std::pair<std::size_t, std::size_t>{1, 1}));
}

TEST(Lcs, IdenticalSequences) {
  TokenSeq a{"甲", "乙", "丙"};
  auto matches = lcs(a, a);
  ASSERT_EQ(matches.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(matches[i], (std::pair<std::size_t, std::size_t>{i, i}));
  }
}

TEST(Lcs, DisjointVocabularies) {
  EXPECT_TRUE(lcs({"甲", "乙"}, {"丙", "丁"}).empty());
}

TEST(Lcs, MatchesBruteForce) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = random_tokens(rng, 10, 3);
    auto b = random_tokens(rng, 10, 3);
    auto matches = lcs(a, b);
    EXPECT_EQ(matches.size(), lcs_brute_force(a, b));
    // strictly increasing index pairs that actually match
    for (std::size_t i = 0; i < matches.size(); ++i) {
      EXPECT_EQ(a[matches[i].first], b[matches[i].second]);
      if (i > 0) {
        EXPECT_GT(matches[i].first, matches[i - 1].first);
        EXPECT_GT(matches[i].second, matches[i - 1].second);
      }
    }
  }
}

TEST(Lcs, LengthSymmetric) {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_tokens(rng, 12, 4);
    auto b = random_tokens(rng, 12, 4);
    EXPECT_EQ(lcs(a, b).size(), lcs(b, a).size());
  }
}

TEST(ExtractDivergent, SingleGap) {
  ParallelPair pair{{"我", "用", "人机界面", "工作"},
                    {"我", "用", "人机介面", "工作"},
                    1};
  auto divergent = extract_divergent(pair);
  ASSERT_EQ(divergent.size(), 1u);
  EXPECT_EQ(divergent[0].source_expr, "人机界面");
  EXPECT_EQ(divergent[0].target_expr, "人机介面");
  EXPECT_EQ(divergent[0].target_tag, 1u);
}

TEST(ExtractDivergent, IdenticalSentencesYieldNothing) {
  ParallelPair pair{{"一", "样"}, {"一", "样"}, 1};
  EXPECT_TRUE(extract_divergent(pair).empty());
}

TEST(ExtractDivergent, TaxiExample) {
  ParallelPair pair{{"出租车", "很", "快"}, {"的士", "很", "快"}, 1};
  auto divergent = extract_divergent(pair);
  ASSERT_EQ(divergent.size(), 1u);
  EXPECT_EQ(divergent[0].source_expr, "出租车");
  EXPECT_EQ(divergent[0].target_expr, "的士");
}

TEST(ExtractDivergent, OneSidedGapsDiscarded) {
  // target inserts a token; no source-side residue to map it to
  ParallelPair pair{{"甲", "乙"}, {"甲", "插", "乙"}, 1};
  EXPECT_TRUE(extract_divergent(pair).empty());
}

TEST(ExtractDivergent, MultipleGapsEmitOnePairEach) {
  ParallelPair pair{{"甲", "一", "乙", "二", "丙"},
                    {"甲", "壹", "乙", "贰", "丙"},
                    2};
  auto divergent = extract_divergent(pair);
  ASSERT_EQ(divergent.size(), 2u);
  EXPECT_EQ(divergent[0].source_expr, "一");
  EXPECT_EQ(divergent[0].target_expr, "壹");
  EXPECT_EQ(divergent[1].source_expr, "二");
  EXPECT_EQ(divergent[1].target_expr, "贰");
}

TEST(ExtractDivergent, NeverEmitsEqualSides) {
  // both sides concatenate to the same string through different tokens
  ParallelPair segmentation_artifact{{"人机", "界面"}, {"人机界", "面"}, 1};
  EXPECT_TRUE(extract_divergent(segmentation_artifact).empty());

  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    ParallelPair pair{random_tokens(rng, 8, 3), random_tokens(rng, 8, 3), 1};
    for (const auto& d : extract_divergent(pair)) {
      EXPECT_NE(d.source_expr, d.target_expr);
      EXPECT_FALSE(d.source_expr.empty());
      EXPECT_FALSE(d.target_expr.empty());
    }
  }
}

TEST(ExtractDivergent, ExpressionsAreContiguousSpans) {
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    ParallelPair pair{random_tokens(rng, 10, 3), random_tokens(rng, 10, 3), 1};
    std::string source_joined, target_joined;
    for (const auto& t : pair.source_tokens) source_joined += t;
    for (const auto& t : pair.target_tokens) target_joined += t;
    for (const auto& d : extract_divergent(pair)) {
      EXPECT_NE(source_joined.find(d.source_expr), std::string::npos);
      EXPECT_NE(target_joined.find(d.target_expr), std::string::npos);
    }
  }
}

TEST(BuildAlignmentSets, TaxiRow) {
  auto tags = mc_hk_tw();
  std::vector<ParallelPair> pairs = {
      {{"出租车", "很", "快"}, {"的士", "很", "快"}, 1},
      {{"出租车", "很", "快"}, {"计程车", "很", "快"}, 2},
  };
  auto sets = build_alignment_sets(pairs, tags, 0, 1);
  EXPECT_EQ(sets.provenance(), WordSetProvenance::ALIGNMENT);
  EXPECT_TRUE(sets.contains(0, "出租车"));
  EXPECT_TRUE(sets.contains(1, "的士"));
  EXPECT_TRUE(sets.contains(2, "计程车"));
  EXPECT_EQ(sets.total_size(), 3u);
}

TEST(BuildAlignmentSets, IdenticalPairsYieldEmptySets) {
  auto tags = mc_hk_tw();
  std::vector<ParallelPair> pairs = {{{"一", "样"}, {"一", "样"}, 1}};
  auto sets = build_alignment_sets(pairs, tags, 0, 1);
  EXPECT_EQ(sets.total_size(), 0u);
}

TEST(BuildAlignmentSets, MinPairCountThreshold) {
  auto tags = mc_hk_tw();
  std::vector<ParallelPair> pairs = {
      {{"出租车", "快"}, {"的士", "快"}, 1},
  };
  auto sets = build_alignment_sets(pairs, tags, 0, 2);
  EXPECT_EQ(sets.total_size(), 0u);
  pairs.push_back(pairs[0]);
  auto sets2 = build_alignment_sets(pairs, tags, 0, 2);
  EXPECT_TRUE(sets2.contains(1, "的士"));
}

TEST(BuildAlignmentSets, InvariantUnderPairReordering) {
  auto tags = mc_hk_tw();
  Rng rng(47);
  std::vector<ParallelPair> pairs;
  for (int i = 0; i < 60; ++i) {
    auto a = random_tokens(rng, 6, 3);
    auto b = random_tokens(rng, 6, 3);
    a.push_back("尾");
    b.push_back("尾");
    pairs.push_back({std::move(a), std::move(b), 1 + bounded(rng, 2)});
  }
  auto sets_a = build_alignment_sets(pairs, tags, 0, 1);
  std::vector<ParallelPair> reversed(pairs.rbegin(), pairs.rend());
  auto sets_b = build_alignment_sets(reversed, tags, 0, 1);
  std::ostringstream a, b;
  sets_a.save(a);
  sets_b.save(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(BuildAlignmentSets, ScriptNormalizationBeforeLcs) {
  // without normalization every token pair diverges; with it only the
  // genuinely different expression remains
  auto tags = mc_hk_tw();
  ScriptConversionTable table({{U'車', U'车'}, {U'門', U'门'}});
  WhitespaceSegmenter segmenter;
  std::vector<ParallelPair> pairs = {
      {segmenter.segment("车 很 快"), segmenter.segment("車 真 快"), 1}};
  auto raw = build_alignment_sets(pairs, tags, 0, 1);
  EXPECT_TRUE(raw.contains(0, "车很"));  // 车!=車 so the gap spans two tokens
  auto normalized = build_alignment_sets(pairs, tags, 0, 1, &table);
  EXPECT_TRUE(normalized.contains(0, "很"));
  EXPECT_TRUE(normalized.contains(1, "真"));
  EXPECT_EQ(normalized.total_size(), 2u);
}

TEST(ParallelPairs, FileRoundTrip) {
  auto tags = mc_hk_tw();
  std::vector<RawParallelPair> pairs = {
      {"出租车很快", "的士很快", 1},
      {"出租车很快", "计程车很快", 2},
  };
  auto path = std::filesystem::temp_directory_path() / "gcrid_pairs.tsv";
  {
    std::ofstream out(path, std::ios::binary);
    save_parallel_pairs(pairs, tags, out);
  }
  auto loaded = load_parallel_pairs(path.string(), tags);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].pivot_text, "出租车很快");
  EXPECT_EQ(loaded[1].target_tag, 2u);
}

TEST(ParallelPairs, MalformedLines) {
  auto tags = mc_hk_tw();
  auto path = std::filesystem::temp_directory_path() / "gcrid_pairs_bad.tsv";
  std::ofstream(path) << "只有一列\n";
  EXPECT_THROW(load_parallel_pairs(path.string(), tags), data_error);
  std::ofstream(path) << "甲\tXX\t乙\n";
  EXPECT_THROW(load_parallel_pairs(path.string(), tags), data_error);
}

}  // namespace
