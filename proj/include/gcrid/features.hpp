#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gcrid/corpus.hpp"
#include "gcrid/errors.hpp"
#include "gcrid/segmentation.hpp"
#include "gcrid/utf8.hpp"

namespace gcrid {

// Single traditional-form code points; the script-form feature is a
// containment test against this set.
class TraditionalCharLexicon {
 public:
  TraditionalCharLexicon() = default;
  explicit TraditionalCharLexicon(const std::u32string& chars)
      : chars_(chars.begin(), chars.end()) {}

  bool contains(char32_t cp) const { return chars_.count(cp) > 0; }
  std::size_t size() const { return chars_.size(); }

  // One character per line, '#' comments.
  static TraditionalCharLexicon load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open traditional-character file: " + path);
    TraditionalCharLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto where = path + " line " + std::to_string(line_no);
      if (!utf8::is_valid(line)) throw data_error(where + ": invalid UTF-8");
      std::u32string cps = utf8::decode(line);
      if (cps.size() != 1) {
        throw data_error(where + ": expected a single character");
      }
      lex.chars_.insert(cps[0]);
    }
    return lex;
  }

 private:
  std::unordered_set<char32_t> chars_;
};

// True iff any code point of the text is in the traditional lexicon.
inline bool script_form_feature(std::string_view text,
                                const TraditionalCharLexicon& lex) {
  for (char32_t cp : utf8::decode(text)) {
    if (lex.contains(cp)) return true;
  }
  return false;
}

enum class WordSetProvenance { PMI, ALIGNMENT };

inline const char* provenance_name(WordSetProvenance p) {
  return p == WordSetProvenance::PMI ? "PMI" : "ALIGNMENT";
}

// Per-dialect word lists, the source of membership-signature features.
// Carries its tag ids so signatures can be rendered without the tag set.
class DialectWordSets {
 public:
  DialectWordSets(const TagSet& tags, WordSetProvenance provenance)
      : provenance_(provenance), per_tag_(tags.size()) {
    for (const auto& t : tags.all()) tag_ids_.push_back(t.id);
  }

  WordSetProvenance provenance() const { return provenance_; }
  std::size_t tag_count() const { return tag_ids_.size(); }
  const std::vector<std::string>& tag_ids() const { return tag_ids_; }

  void add(std::size_t tag, std::string word) {
    if (word.empty()) throw internal_error("empty word in dialect word set");
    per_tag_.at(tag).insert(std::move(word));
  }

  bool contains(std::size_t tag, const std::string& word) const {
    return per_tag_.at(tag).count(word) > 0;
  }

  const std::unordered_set<std::string>& words(std::size_t tag) const {
    return per_tag_.at(tag);
  }

  std::size_t set_size(std::size_t tag) const { return per_tag_.at(tag).size(); }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& s : per_tag_) n += s.size();
    return n;
  }

  // `tag_id<TAB>word` per line under a `# provenance:` header; tags in
  // tag-set order, words in byte order.
  void save(std::ostream& out) const {
    out << "# provenance: " << provenance_name(provenance_) << '\n';
    for (std::size_t t = 0; t < per_tag_.size(); ++t) {
      std::vector<std::string> words(per_tag_[t].begin(), per_tag_[t].end());
      std::sort(words.begin(), words.end());
      for (const auto& w : words) out << tag_ids_[t] << '\t' << w << '\n';
    }
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write word-set file: " + path);
    save(out);
  }

  static DialectWordSets load(const std::string& path, const TagSet& tags) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open word-set file: " + path);
    std::string line;
    if (!std::getline(in, line)) {
      throw data_error(path + ": missing provenance header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    WordSetProvenance prov;
    if (line == "# provenance: PMI") {
      prov = WordSetProvenance::PMI;
    } else if (line == "# provenance: ALIGNMENT") {
      prov = WordSetProvenance::ALIGNMENT;
    } else {
      throw data_error(path + ": first line must be a provenance header");
    }
    DialectWordSets sets(tags, prov);
    std::size_t line_no = 1;
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
      std::string tag_id = line.substr(0, tab);
      std::string word = line.substr(tab + 1);
      auto tag = tags.index_of(tag_id);
      if (!tag) throw data_error(where + ": unknown tag " + tag_id);
      if (word.empty()) throw data_error(where + ": empty word");
      sets.add(*tag, std::move(word));
    }
    return sets;
  }

 private:
  WordSetProvenance provenance_;
  std::vector<std::string> tag_ids_;
  std::vector<std::unordered_set<std::string>> per_tag_;
};

// Renders the subset of tags whose set contains the word, joined by '_' in
// tag-set order; nullopt when the word is in no set.
inline std::optional<std::string> membership_signature(
    const std::string& word, const DialectWordSets& sets) {
  std::string sig;
  for (std::size_t t = 0; t < sets.tag_count(); ++t) {
    if (sets.contains(t, word)) {
      if (!sig.empty()) sig += '_';
      sig += sets.tag_ids()[t];
    }
  }
  if (sig.empty()) return std::nullopt;
  return sig;
}

// Pointwise mutual information between a word and a dialect:
// ln((c_ij/N) / ((c_i/N) * (N_j/N))), computed as ln(c_ij*N / (c_i*N_j)).
// nullopt when the word never occurs in the dialect (undefined PMI).
inline std::optional<double> pmi_score(std::uint64_t word_count_in_dialect,
                                       std::uint64_t word_count_total,
                                       std::uint64_t dialect_word_total,
                                       std::uint64_t corpus_word_total) {
  if (corpus_word_total == 0) {
    throw std::invalid_argument("pmi_score: corpus_word_total must be > 0");
  }
  if (word_count_in_dialect > word_count_total ||
      word_count_in_dialect > dialect_word_total ||
      word_count_total > corpus_word_total ||
      dialect_word_total > corpus_word_total) {
    throw std::invalid_argument("pmi_score: inconsistent counts");
  }
  if (word_count_in_dialect == 0) return std::nullopt;
  // Counts fit a double exactly below 2^53, so the independence case
  // c_ij*N == c_i*N_j divides to exactly 1.0 and returns exactly 0.
  double num = static_cast<double>(word_count_in_dialect) *
               static_cast<double>(corpus_word_total);
  double den = static_cast<double>(word_count_total) *
               static_cast<double>(dialect_word_total);
  return std::log(num / den);
}

// Segments the training corpus, scores every (word, dialect) pair with PMI
// and keeps the top_k per dialect among words with corpus frequency at least
// min_count. Ties break by higher in-dialect count, then word order.
inline DialectWordSets build_pmi_sets(const Corpus& train,
                                      const Segmenter& segmenter,
                                      std::size_t top_k,
                                      std::size_t min_count) {
  if (top_k < 1) throw std::invalid_argument("build_pmi_sets: top_k must be >= 1");
  if (min_count < 1) {
    throw std::invalid_argument("build_pmi_sets: min_count must be >= 1");
  }
  const std::size_t num_tags = train.tags.size();
  std::unordered_map<std::string, std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> dialect_totals(num_tags, 0);
  std::uint64_t corpus_total = 0;
  for (const auto& s : train.sentences) {
    for (auto& tok : segmenter.segment(s.text)) {
      auto& row = counts[std::move(tok)];
      if (row.empty()) row.assign(num_tags, 0);
      row[s.tag]++;
      dialect_totals[s.tag]++;
      corpus_total++;
    }
  }
  DialectWordSets sets(train.tags, WordSetProvenance::PMI);
  if (corpus_total == 0) return sets;
  struct Candidate {
    double pmi;
    std::uint64_t in_dialect;
    const std::string* word;
  };
  for (std::size_t t = 0; t < num_tags; ++t) {
    std::vector<Candidate> candidates;
    for (const auto& [word, row] : counts) {
      std::uint64_t c_i =
          std::accumulate(row.begin(), row.end(), std::uint64_t{0});
      if (c_i < min_count || row[t] == 0) continue;
      auto pmi = pmi_score(row[t], c_i, dialect_totals[t], corpus_total);
      candidates.push_back({*pmi, row[t], &word});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.pmi != b.pmi) return a.pmi > b.pmi;
                if (a.in_dialect != b.in_dialect)
                  return a.in_dialect > b.in_dialect;
                return *a.word < *b.word;
              });
    std::size_t keep = std::min(top_k, candidates.size());
    for (std::size_t i = 0; i < keep; ++i) sets.add(t, *candidates[i].word);
  }
  return sets;
}

// Sparse classifier input: (index, value) pairs with strictly increasing
// indices and finite non-zero values.
struct SparseFeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool operator==(const SparseFeatureVector&) const = default;
};

// Dense feature-key indexing. Growable while fitting; once frozen, unknown
// keys are dropped instead of extending the space.
class FeatureSpace {
 public:
  std::size_t size() const { return keys_.size(); }
  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }

  std::optional<std::uint32_t> lookup(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::uint32_t> add_or_lookup(const std::string& key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (frozen_) return std::nullopt;
    auto idx = static_cast<std::uint32_t>(keys_.size());
    index_.emplace(key, idx);
    keys_.push_back(key);
    return idx;
  }

  // Keys in index order 0..N-1.
  const std::vector<std::string>& keys() const { return keys_; }

  const std::string& key(std::uint32_t index) const { return keys_.at(index); }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> keys_;
  bool frozen_ = false;
};

// Which feature families are active, plus the PMI set knobs. Keys are
// namespaced per family so identical strings never collide across families.
struct FeatureConfig {
  bool char_1g = false;
  bool char_2g = false;
  bool char_3g = false;
  bool word_seg = false;
  bool script_form = false;
  bool pmi = false;
  bool alignment = false;
  std::uint32_t pmi_top_k = 2000;
  std::uint32_t pmi_min_count = 5;
  bool binary_counts = false;  // n-gram/word values become presence flags

  bool any_enabled() const {
    return char_1g || char_2g || char_3g || word_seg || script_form || pmi ||
           alignment;
  }

  bool needs_segmenter() const { return word_seg || pmi || alignment; }

  // Canonical short name, e.g. "c2+form+pmi"; family order is fixed.
  std::string name() const {
    std::string out;
    auto append = [&out](const char* n) {
      if (!out.empty()) out += '+';
      out += n;
    };
    if (char_1g) append("c1");
    if (char_2g) append("c2");
    if (char_3g) append("c3");
    if (word_seg) append("wseg");
    if (script_form) append("form");
    if (pmi) append("pmi");
    if (alignment) append("align");
    return out;
  }

  // Parses "c2,form,pmi" or "c2+form+pmi" into a config.
  static FeatureConfig parse(std::string_view spec) {
    FeatureConfig config;
    std::string token;
    auto flush = [&]() {
      if (token.empty()) return;
      if (token == "c1") config.char_1g = true;
      else if (token == "c2") config.char_2g = true;
      else if (token == "c3") config.char_3g = true;
      else if (token == "wseg") config.word_seg = true;
      else if (token == "form") config.script_form = true;
      else if (token == "pmi") config.pmi = true;
      else if (token == "align") config.alignment = true;
      else throw usage_error("unknown feature family '" + token + "'");
      token.clear();
    };
    for (char c : spec) {
      if (c == ',' || c == '+' || c == ' ') {
        flush();
      } else {
        token.push_back(c);
      }
    }
    flush();
    if (!config.any_enabled()) {
      throw usage_error("feature config enables no families");
    }
    return config;
  }
};

// Immutable resources behind feature extraction; only the families enabled
// in the config need their resource present.
struct FeatureResources {
  const Segmenter* segmenter = nullptr;
  const TraditionalCharLexicon* traditional = nullptr;
  const DialectWordSets* pmi_sets = nullptr;
  const DialectWordSets* alignment_sets = nullptr;

  void require(const FeatureConfig& config) const {
    if (config.needs_segmenter() && segmenter == nullptr) {
      throw usage_error("missing resource: segmenter (required by wseg/pmi/align)");
    }
    if (config.script_form && traditional == nullptr) {
      throw usage_error(
          "missing resource: traditional-character lexicon (required by form)");
    }
    if (config.pmi && pmi_sets == nullptr) {
      throw usage_error("missing resource: PMI word sets (required by pmi)");
    }
    if (config.alignment && alignment_sets == nullptr) {
      throw usage_error(
          "missing resource: alignment word sets (required by align)");
    }
  }
};

namespace detail {

// Emits every (key, value) pair for one sentence in a fixed family order;
// n-gram and word values are term counts (or presence with binary_counts),
// signature and form keys are binary. Emission order is deterministic, so
// first-seen index assignment is reproducible.
template <typename Emit>
void emit_features(const std::string& text, const FeatureConfig& config,
                   const FeatureResources& resources, Emit&& emit) {
  resources.require(config);
  auto emit_counted = [&](const char* prefix,
                          const std::vector<std::string>& grams) {
    std::unordered_map<std::string, double> counts;
    std::vector<const std::string*> order;
    for (const auto& g : grams) {
      auto [it, inserted] = counts.emplace(g, 0.0);
      if (inserted) order.push_back(&it->first);
      it->second += 1.0;
    }
    for (const auto* g : order) {
      double value = config.binary_counts ? 1.0 : counts[*g];
      emit(std::string(prefix) + *g, value);
    }
  };
  if (config.char_1g) emit_counted("c1:", char_ngrams(text, 1));
  if (config.char_2g) emit_counted("c2:", char_ngrams(text, 2));
  if (config.char_3g) emit_counted("c3:", char_ngrams(text, 3));

  TokenSeq tokens;
  if (config.needs_segmenter()) tokens = resources.segmenter->segment(text);

  if (config.word_seg) emit_counted("w1:", word_ngrams(tokens, 1));
  if (config.script_form) {
    if (script_form_feature(text, *resources.traditional)) {
      emit("form:traditional", 1.0);
    }
  }
  auto emit_signatures = [&](const char* prefix, const DialectWordSets& sets) {
    std::unordered_set<std::string> seen;
    for (const auto& tok : tokens) {
      if (auto sig = membership_signature(tok, sets)) {
        if (seen.insert(*sig).second) emit(std::string(prefix) + *sig, 1.0);
      }
    }
  };
  if (config.pmi) emit_signatures("pmi:", *resources.pmi_sets);
  if (config.alignment) emit_signatures("align:", *resources.alignment_sets);
}

}  // namespace detail

// Turns one sentence into a sparse vector over the given space. Keys absent
// from a frozen space are dropped.
inline SparseFeatureVector extract(const std::string& text,
                                   const FeatureConfig& config,
                                   const FeatureResources& resources,
                                   const FeatureSpace& space) {
  std::map<std::uint32_t, double> by_index;
  detail::emit_features(text, config, resources,
                        [&](const std::string& key, double value) {
                          if (auto idx = space.lookup(key)) {
                            by_index[*idx] += value;
                          }
                        });
  SparseFeatureVector vec;
  vec.entries.reserve(by_index.size());
  for (auto [idx, value] : by_index) {
    if (value != 0.0) vec.entries.emplace_back(idx, value);
  }
  return vec;
}

// One pass over the training corpus collecting every emitted key; indices
// are dense in first-seen order and the returned space is frozen. The
// script-form family has the fixed key "form:traditional", registered up
// front so a training split where it never fires still yields a usable
// space.
inline FeatureSpace fit_space(const Corpus& train, const FeatureConfig& config,
                              const FeatureResources& resources) {
  if (!config.any_enabled()) {
    throw usage_error("feature config enables no families");
  }
  resources.require(config);
  FeatureSpace space;
  if (config.script_form) space.add_or_lookup("form:traditional");
  for (const auto& s : train.sentences) {
    detail::emit_features(s.text, config, resources,
                          [&](const std::string& key, double) {
                            space.add_or_lookup(key);
                          });
  }
  if (space.size() == 0) {
    throw data_error("fit_space: no features collected from training corpus");
  }
  space.freeze();
  return space;
}

// Vectorizes a corpus against a frozen space; pairs each vector with its
// tag index.
inline std::vector<std::pair<SparseFeatureVector, std::size_t>> vectorize(
    const Corpus& corpus, const FeatureConfig& config,
    const FeatureResources& resources, const FeatureSpace& space) {
  std::vector<std::pair<SparseFeatureVector, std::size_t>> out;
  out.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    out.emplace_back(extract(s.text, config, resources, space), s.tag);
  }
  return out;
}

}  // namespace gcrid
