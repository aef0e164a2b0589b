#include "gcrid/features.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcrid/data.hpp"
#include "gcrid/rng.hpp"
#include "gcrid/segmentation.hpp"

using namespace gcrid;

namespace {

TagSet gcr() { return TagSet::builtin_gcr(); }

Corpus make_corpus(const TagSet& tags,
                   const std::vector<std::pair<std::string, std::size_t>>& rows) {
  Corpus corpus{tags, {}};
  for (const auto& [text, tag] : rows) corpus.sentences.push_back({text, tag});
  return corpus;
}

// Independent route for Eq.-style PMI: build the three probabilities from
// the raw counts and take the log of the quotient.
double pmi_oracle(std::uint64_t c_ij, std::uint64_t c_i, std::uint64_t n_j,
                  std::uint64_t n) {
  double p_joint = static_cast<double>(c_ij) / static_cast<double>(n);
  double p_word = static_cast<double>(c_i) / static_cast<double>(n);
  double p_dialect = static_cast<double>(n_j) / static_cast<double>(n);
  return std::log(p_joint / (p_word * p_dialect));
}

TEST(ScriptForm, ContainmentTest) {
  TraditionalCharLexicon lex(U"車門");
  EXPECT_TRUE(script_form_feature("我開車", lex));
  EXPECT_FALSE(script_form_feature("我开车", lex));
  EXPECT_FALSE(script_form_feature("", lex));
}

TEST(Pmi, ExclusiveWordUniformDialects) {
  // word only in dialect j, uniform dialect sizes over D dialects: pmi = ln D
  for (std::uint64_t d : {2, 3, 6}) {
    std::uint64_t n = 600;
    auto pmi = pmi_score(4, 4, n / d, n);
    ASSERT_TRUE(pmi.has_value());
    EXPECT_NEAR(*pmi, std::log(static_cast<double>(d)), 1e-12);
  }
}

TEST(Pmi, IndependenceIsExactlyZero) {
  EXPECT_EQ(pmi_score(2, 4, 50, 100).value(), 0.0);
  EXPECT_EQ(pmi_score(10, 20, 500, 1000).value(), 0.0);
}

TEST(Pmi, UndefinedWhenWordAbsentFromDialect) {
  EXPECT_FALSE(pmi_score(0, 5, 50, 100).has_value());
}

TEST(Pmi, RejectsInconsistentCounts) {
  EXPECT_THROW(pmi_score(5, 4, 50, 100), std::invalid_argument);
  EXPECT_THROW(pmi_score(2, 4, 101, 100), std::invalid_argument);
  EXPECT_THROW(pmi_score(1, 1, 1, 0), std::invalid_argument);
}

TEST(Pmi, MatchesOracleOnRandomTables) {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    std::uint64_t n = 2 + bounded(rng, 1000000);
    std::uint64_t n_j = 1 + bounded(rng, n);
    std::uint64_t c_i = 1 + bounded(rng, n);
    std::uint64_t c_ij = 1 + bounded(rng, std::min(c_i, n_j));
    auto pmi = pmi_score(c_ij, c_i, n_j, n);
    ASSERT_TRUE(pmi.has_value());
    EXPECT_NEAR(*pmi, pmi_oracle(c_ij, c_i, n_j, n), 1e-9);
    if (c_ij * n == c_i * n_j) EXPECT_EQ(*pmi, 0.0);
  }
}

TEST(MembershipSignature, RendersInTagSetOrder) {
  DialectWordSets sets(gcr(), WordSetProvenance::PMI);
  sets.add(0, "词");   // MC
  sets.add(2, "词");   // TW
  sets.add(5, "词");   // SGP
  EXPECT_EQ(membership_signature("词", sets).value(), "MC_TW_SGP");
  EXPECT_FALSE(membership_signature("别", sets).has_value());
  DialectWordSets all(gcr(), WordSetProvenance::PMI);
  for (std::size_t t = 0; t < 6; ++t) all.add(t, "通");
  EXPECT_EQ(membership_signature("通", all).value(), "MC_HK_TW_MAC_MAL_SGP");
}

TEST(BuildPmiSets, ExclusiveWordLandsInItsDialect) {
  auto tags = gcr();
  FmmSegmenter segmenter(Lexicon({"的士", "出租车", "很快"}));
  auto corpus = make_corpus(tags, {
      {"的士很快", 1}, {"的士很快吗", 1}, {"的士不错", 1},
      {"出租车很快", 0}, {"出租车不错", 0}, {"出租车好呀", 0},
  });
  auto sets = build_pmi_sets(corpus, segmenter, 100, 3);
  EXPECT_TRUE(sets.contains(1, "的士"));
  EXPECT_FALSE(sets.contains(0, "的士"));
  EXPECT_TRUE(sets.contains(0, "出租车"));
}

// Exhaustive oracle on a tiny two-dialect corpus: compute every
// (word, dialect) PMI by hand from count tables and compare set contents.
TEST(BuildPmiSets, MatchesExhaustiveEnumeration) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  WhitespaceSegmenter segmenter;
  auto corpus = make_corpus(tags, {
      {"甲 乙 丙", 0}, {"甲 丙 丁", 0}, {"甲 乙", 0},
      {"戊 乙 丙", 1}, {"戊 丁", 1}, {"戊 丁 乙", 1},
  });
  // counts: 甲: MC 3 / HK 0; 戊: MC 0 / HK 3; 乙: 2/2; 丙: 2/1; 丁: 1/2
  // totals: N_MC = 8, N_HK = 8, N = 16
  struct Row { const char* word; std::uint64_t mc, hk; };
  const std::vector<Row> table = {
      {"甲", 3, 0}, {"戊", 0, 3}, {"乙", 2, 2}, {"丙", 2, 1}, {"丁", 1, 2}};
  const std::size_t top_k = 2;
  auto sets = build_pmi_sets(corpus, segmenter, top_k, 1);
  for (std::size_t t = 0; t < 2; ++t) {
    struct Scored { double pmi; std::uint64_t c_ij; std::string word; };
    std::vector<Scored> scored;
    for (const auto& row : table) {
      std::uint64_t c_ij = t == 0 ? row.mc : row.hk;
      if (c_ij == 0) continue;
      scored.push_back({pmi_oracle(c_ij, row.mc + row.hk, 8, 16), c_ij,
                        row.word});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.pmi != b.pmi) return a.pmi > b.pmi;
      if (a.c_ij != b.c_ij) return a.c_ij > b.c_ij;
      return a.word < b.word;
    });
    ASSERT_GE(scored.size(), top_k);
    EXPECT_EQ(sets.set_size(t), top_k);
    for (std::size_t i = 0; i < top_k; ++i) {
      EXPECT_TRUE(sets.contains(t, scored[i].word))
          << "dialect " << t << " missing " << scored[i].word;
    }
  }
}

TEST(BuildPmiSets, InvariantUnderReordering) {
  auto tags = gcr();
  WhitespaceSegmenter segmenter;
  Rng rng(23);
  Corpus corpus{tags, {}};
  const char* words[] = {"一", "二", "三", "四", "五", "六", "七"};
  for (int i = 0; i < 120; ++i) {
    std::string text;
    for (int w = 0; w < 5; ++w) {
      if (w) text += ' ';
      text += words[bounded(rng, 7)];
    }
    corpus.sentences.push_back({text, bounded(rng, 6)});
  }
  auto sets_a = build_pmi_sets(corpus, segmenter, 3, 2);
  Corpus reversed{tags, {corpus.sentences.rbegin(), corpus.sentences.rend()}};
  auto sets_b = build_pmi_sets(reversed, segmenter, 3, 2);
  std::ostringstream a, b;
  sets_a.save(a);
  sets_b.save(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(WordSets, FileRoundTrip) {
  auto tags = gcr();
  DialectWordSets sets(tags, WordSetProvenance::ALIGNMENT);
  sets.add(0, "出租车");
  sets.add(1, "的士");
  sets.add(2, "计程车");
  auto path = std::filesystem::temp_directory_path() / "gcrid_sets.tsv";
  sets.save(path.string());
  auto loaded = DialectWordSets::load(path.string(), tags);
  EXPECT_EQ(loaded.provenance(), WordSetProvenance::ALIGNMENT);
  EXPECT_TRUE(loaded.contains(1, "的士"));
  std::ostringstream a, b;
  sets.save(a);
  loaded.save(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(WordSets, LoadRequiresProvenanceHeader) {
  auto path = std::filesystem::temp_directory_path() / "gcrid_sets_bad.tsv";
  std::ofstream(path) << "MC\t出租车\n";
  EXPECT_THROW(DialectWordSets::load(path.string(), gcr()), data_error);
}

FeatureResources plain_resources(const Segmenter* segmenter = nullptr,
                                 const TraditionalCharLexicon* trad = nullptr,
                                 const DialectWordSets* pmi = nullptr,
                                 const DialectWordSets* align = nullptr) {
  FeatureResources r;
  r.segmenter = segmenter;
  r.traditional = trad;
  r.pmi_sets = pmi;
  r.alignment_sets = align;
  return r;
}

TEST(Extract, CharBigramCounts) {
  FeatureConfig config;
  config.char_2g = true;
  FeatureSpace space;
  space.add_or_lookup("c2:出租");
  space.add_or_lookup("c2:租车");
  space.freeze();
  auto vec = extract("出租车", config, plain_resources(), space);
  ASSERT_EQ(vec.entries.size(), 2u);
  EXPECT_EQ(vec.entries[0], (std::pair<std::uint32_t, double>{0, 1.0}));
  EXPECT_EQ(vec.entries[1], (std::pair<std::uint32_t, double>{1, 1.0}));
}

TEST(Extract, ScriptFormKey) {
  FeatureConfig config;
  config.script_form = true;
  auto trad = builtin_traditional_lexicon();
  auto resources = plain_resources(nullptr, &trad);
  FeatureSpace space;
  space.add_or_lookup("form:traditional");
  space.freeze();
  auto with = extract("我開車", config, resources, space);
  // 開 is not in the starter table; 車 is
  ASSERT_EQ(with.entries.size(), 1u);
  EXPECT_EQ(with.entries[0].second, 1.0);
  auto without = extract("我开车", config, resources, space);
  EXPECT_TRUE(without.entries.empty());
}

TEST(Extract, PmiSignatureFeature) {
  auto tags = gcr();
  DialectWordSets sets(tags, WordSetProvenance::PMI);
  sets.add(0, "词");
  sets.add(2, "词");
  sets.add(5, "词");
  WhitespaceSegmenter segmenter;
  FeatureConfig config;
  config.pmi = true;
  auto resources = plain_resources(&segmenter, nullptr, &sets);
  FeatureSpace space;
  space.add_or_lookup("pmi:MC_TW_SGP");
  space.freeze();
  auto vec = extract("这 词 好", config, resources, space);
  ASSERT_EQ(vec.entries.size(), 1u);
  EXPECT_EQ(vec.entries[0], (std::pair<std::uint32_t, double>{0, 1.0}));
}

TEST(Extract, MissingResourceIsFatal) {
  FeatureConfig config;
  config.pmi = true;
  WhitespaceSegmenter segmenter;
  FeatureSpace space;
  EXPECT_THROW(
      extract("句", config, plain_resources(&segmenter), space),
      usage_error);
}

TEST(FitSpace, FirstSeenDenseIndices) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  auto corpus = make_corpus(tags, {{"出租车", 0}, {"租车好", 1}});
  FeatureConfig config;
  config.char_2g = true;
  auto space = fit_space(corpus, config, plain_resources());
  EXPECT_TRUE(space.frozen());
  ASSERT_EQ(space.size(), 3u);
  EXPECT_EQ(space.key(0), "c2:出租");
  EXPECT_EQ(space.key(1), "c2:租车");
  EXPECT_EQ(space.key(2), "c2:车好");
}

TEST(FitSpace, TrainingSentenceHasNoDroppedKeys) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  auto corpus = make_corpus(tags, {{"出租车很快", 0}, {"的士很快", 1}});
  FeatureConfig config;
  config.char_1g = true;
  config.char_2g = true;
  auto space = fit_space(corpus, config, plain_resources());
  for (const auto& s : corpus.sentences) {
    auto vec = extract(s.text, config, plain_resources(), space);
    std::size_t expected = char_ngrams(s.text, 2).size();  // dups collapse
    std::size_t distinct_c1 = 0, distinct_c2 = 0;
    std::unordered_set<std::string> seen;
    for (const auto& g : char_ngrams(s.text, 1)) {
      if (seen.insert("1" + g).second) distinct_c1++;
    }
    for (const auto& g : char_ngrams(s.text, 2)) {
      if (seen.insert("2" + g).second) distinct_c2++;
    }
    (void)expected;
    EXPECT_EQ(vec.entries.size(), distinct_c1 + distinct_c2);
  }
}

TEST(FitSpace, FrozenSpaceDropsUnseenKeys) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  auto corpus = make_corpus(tags, {{"出租车", 0}, {"出租好", 1}});
  FeatureConfig config;
  config.char_2g = true;
  auto space = fit_space(corpus, config, plain_resources());
  auto vec = extract("飞机场", config, plain_resources(), space);
  EXPECT_TRUE(vec.entries.empty());
}

TEST(FitSpace, ZeroFeaturesFatal) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  auto corpus = make_corpus(tags, {{"好", 0}, {"坏", 1}});
  FeatureConfig config;
  config.char_3g = true;  // all sentences shorter than 3
  EXPECT_THROW(fit_space(corpus, config, plain_resources()), data_error);
}

TEST(FitSpace, ScriptFormKeyAlwaysRegistered) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  auto corpus = make_corpus(tags, {{"我开车", 0}, {"他走路", 1}});
  FeatureConfig config;
  config.script_form = true;
  auto trad = builtin_traditional_lexicon();
  auto space = fit_space(corpus, config, plain_resources(nullptr, &trad));
  // the feature never fires on this corpus but the key still exists
  EXPECT_EQ(space.size(), 1u);
  EXPECT_TRUE(space.lookup("form:traditional").has_value());
}

// Extract with a superset config restricted to one family's keys equals
// extract with only that family enabled.
TEST(Extract, FamiliesAreIndependent) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  auto corpus = make_corpus(tags, {{"出租车很快真的", 0}, {"的士很快真的", 1}});
  FmmSegmenter segmenter(Lexicon({"出租车", "的士", "很快"}));
  auto trad = builtin_traditional_lexicon();

  FeatureConfig superset;
  superset.char_1g = superset.char_2g = superset.word_seg = true;
  superset.script_form = true;
  FeatureConfig subset;
  subset.char_2g = true;

  auto resources = plain_resources(&segmenter, &trad);
  auto super_space = fit_space(corpus, superset, resources);
  auto sub_space = fit_space(corpus, subset, resources);

  for (const auto& s : corpus.sentences) {
    auto super_vec = extract(s.text, superset, resources, super_space);
    auto sub_vec = extract(s.text, subset, resources, sub_space);
    std::map<std::string, double> super_c2, sub_c2;
    for (auto [idx, value] : super_vec.entries) {
      const auto& key = super_space.key(idx);
      if (key.rfind("c2:", 0) == 0) super_c2[key] = value;
    }
    for (auto [idx, value] : sub_vec.entries) {
      sub_c2[sub_space.key(idx)] = value;
    }
    EXPECT_EQ(super_c2, sub_c2);
  }
}

TEST(Extract, Deterministic) {
  TagSet tags({{"MC", ""}, {"HK", ""}});
  auto corpus = make_corpus(tags, {{"出租车很快真的好", 0}, {"的士很快真的好", 1}});
  FmmSegmenter segmenter(Lexicon({"出租车", "的士"}));
  FeatureConfig config;
  config.char_1g = config.char_2g = config.word_seg = true;
  auto resources = plain_resources(&segmenter);
  auto space = fit_space(corpus, config, resources);
  auto a = extract(corpus.sentences[0].text, config, resources, space);
  auto b = extract(corpus.sentences[0].text, config, resources, space);
  EXPECT_EQ(a, b);
}

TEST(FeatureConfig, NameAndParseRoundTrip) {
  FeatureConfig config;
  config.char_2g = config.script_form = config.pmi = true;
  EXPECT_EQ(config.name(), "c2+form+pmi");
  auto parsed = FeatureConfig::parse("c2,form,pmi");
  EXPECT_EQ(parsed.name(), "c2+form+pmi");
  EXPECT_THROW(FeatureConfig::parse("nope"), usage_error);
  EXPECT_THROW(FeatureConfig::parse(""), usage_error);
}

}  // namespace
