#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcrid/alignment.hpp"
#include "gcrid/corpus.hpp"
#include "gcrid/data.hpp"
#include "gcrid/errors.hpp"
#include "gcrid/rng.hpp"
#include "gcrid/segmentation.hpp"
#include "gcrid/utf8.hpp"

namespace gcrid {

// Synthetic corpus generator: a desk-scale stand-in for a real multi-variety
// crawl. Sentences are parallel across classes — per sentence slot the
// classes share base vocabulary and differ only in class markers (and,
// in scripted mode, in script form) — so the generator can also emit
// faithful parallel pairs against class 0.
struct SynthOptions {
  std::size_t classes = 3;
  std::size_t per_class = 300;
  std::size_t marker_vocab = 16;        // marker words per class
  std::size_t shared_vocab = 120;       // base words shared by all classes
  std::size_t markers_per_sentence = 2;
  std::size_t shared_per_sentence = 8;
  // Markers become two-character words over one shared character pool:
  // every character appears in every class, so character unigrams are
  // uninformative while bigrams separate the classes.
  bool bigram_markers = false;
  // Classes in the traditional-script group (HK/TW/MAC) get traditional
  // characters, the rest the simplified counterparts.
  bool scripted = false;
  std::size_t script_chars_per_sentence = 2;
  std::uint64_t seed = 0;
};

struct SynthOutput {
  Corpus corpus;                          // class-major, per_class each
  std::vector<RawParallelPair> pairs;     // class 0 is the pivot
  std::vector<std::string> lexicon_words; // sorted; all generated words
};

namespace detail {

// Character pools live in CJK Extension A (U+3400..U+4DB5), disjoint from
// the builtin script pairs which use common-use codepoints.
inline constexpr char32_t kSharedPoolBase = 0x3400;   // 2 chars per word
inline constexpr char32_t kMarkerPoolBase = 0x4000;   // per class: base + k*0x100
inline constexpr std::size_t kMarkerClassStride = 0x100;

inline std::string synth_word(char32_t first, char32_t second) {
  std::string out;
  utf8::append(out, first);
  utf8::append(out, second);
  return out;
}

}  // namespace detail

inline TagSet synth_tag_set(std::size_t classes) {
  auto gcr = TagSet::builtin_gcr();
  std::vector<DialectTag> tags;
  for (std::size_t k = 0; k < classes; ++k) {
    if (k < gcr.size()) {
      tags.push_back(gcr.at(k));
    } else {
      tags.push_back({"V" + std::to_string(k + 1),
                      "Variety " + std::to_string(k + 1)});
    }
  }
  return TagSet(std::move(tags));
}

inline SynthOutput generate_corpus(const SynthOptions& options) {
  if (options.classes < 2 || options.classes > 13) {
    throw usage_error("gen-corpus: classes must be in [2, 13]");
  }
  if (options.per_class < 1) {
    throw usage_error("gen-corpus: per-class must be >= 1");
  }
  if (options.marker_vocab < 1 || options.markers_per_sentence < 1) {
    throw usage_error(
        "gen-corpus: separable classes need marker words; set marker-vocab "
        "and markers-per-sentence to at least 1");
  }
  if (options.bigram_markers) {
    if (options.marker_vocab < options.classes + 1) {
      throw usage_error(
          "gen-corpus: bigram markers need marker-vocab >= classes + 1");
    }
    if (options.marker_vocab > 512) {
      throw usage_error("gen-corpus: bigram markers cap marker-vocab at 512");
    }
  } else if (options.marker_vocab > 128) {
    throw usage_error("gen-corpus: marker-vocab is capped at 128 per class");
  }
  if (options.shared_per_sentence > 0 && options.shared_vocab < 1) {
    throw usage_error("gen-corpus: shared-per-sentence needs shared-vocab >= 1");
  }
  if (options.shared_vocab > 1500) {
    throw usage_error("gen-corpus: shared-vocab is capped at 1500");
  }
  if (options.scripted && options.classes > 6) {
    throw usage_error("gen-corpus: scripted mode supports at most 6 classes");
  }

  TagSet tags = synth_tag_set(options.classes);

  std::vector<std::string> shared_words;
  shared_words.reserve(options.shared_vocab);
  for (std::size_t i = 0; i < options.shared_vocab; ++i) {
    char32_t base = detail::kSharedPoolBase + static_cast<char32_t>(2 * i);
    shared_words.push_back(detail::synth_word(base, base + 1));
  }

  // markers[k][i] is class k's i-th marker word
  std::vector<std::vector<std::string>> markers(options.classes);
  if (options.bigram_markers) {
    const std::size_t p = options.marker_vocab;
    for (std::size_t k = 0; k < options.classes; ++k) {
      for (std::size_t i = 0; i < p; ++i) {
        char32_t first = detail::kMarkerPoolBase + static_cast<char32_t>(i);
        char32_t second = detail::kMarkerPoolBase +
                          static_cast<char32_t>((i + k + 1) % p);
        markers[k].push_back(detail::synth_word(first, second));
      }
    }
    // construction invariant: every marker character occurs in every
    // class's marker set (as some word's first character)
    for (std::size_t i = 0; i < p; ++i) {
      char32_t c = detail::kMarkerPoolBase + static_cast<char32_t>(i);
      std::size_t classes_with_char = 0;
      for (std::size_t k = 0; k < options.classes; ++k) {
        bool found = false;
        for (const auto& w : markers[k]) {
          for (char32_t cp : utf8::decode(w)) {
            if (cp == c) { found = true; break; }
          }
          if (found) break;
        }
        if (found) ++classes_with_char;
      }
      if (classes_with_char < 2) {
        throw internal_error("gen-corpus: marker character not shared across classes");
      }
    }
  } else {
    for (std::size_t k = 0; k < options.classes; ++k) {
      char32_t base = detail::kMarkerPoolBase +
                      static_cast<char32_t>(k * detail::kMarkerClassStride);
      for (std::size_t i = 0; i < options.marker_vocab; ++i) {
        char32_t first = base + static_cast<char32_t>(2 * i);
        markers[k].push_back(detail::synth_word(first, first + 1));
      }
    }
  }

  std::vector<bool> traditional_class(options.classes, false);
  if (options.scripted) {
    for (std::size_t k = 0; k < options.classes; ++k) {
      const std::string& id = tags.id(k);
      traditional_class[k] = id == "HK" || id == "TW" || id == "MAC";
    }
  }
  const auto& script_pairs = builtin_script_pairs();
  const std::size_t script_choices = 10;  // the Table-2 starter characters

  Rng rng(options.seed);
  std::vector<std::vector<std::string>> texts(
      options.classes, std::vector<std::string>(options.per_class));
  for (std::size_t j = 0; j < options.per_class; ++j) {
    std::vector<std::size_t> shared_ids(options.shared_per_sentence);
    for (auto& id : shared_ids) id = bounded(rng, options.shared_vocab);
    std::vector<std::size_t> marker_slots(options.markers_per_sentence);
    for (auto& slot : marker_slots) slot = bounded(rng, options.marker_vocab);
    std::vector<std::size_t> script_ids;
    if (options.scripted) {
      script_ids.resize(options.script_chars_per_sentence);
      for (auto& id : script_ids) id = bounded(rng, script_choices);
    }

    // interleave markers between chunks of shared words so that two
    // markers are never adjacent
    const std::size_t chunks = options.markers_per_sentence + 1;
    const std::size_t base_chunk = options.shared_per_sentence / chunks;
    const std::size_t extra = options.shared_per_sentence % chunks;
    for (std::size_t k = 0; k < options.classes; ++k) {
      std::string text;
      std::size_t s = 0;
      for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t take = base_chunk + (c < extra ? 1 : 0);
        for (std::size_t q = 0; q < take; ++q) text += shared_words[shared_ids[s + q]];
        s += take;
        if (c + 1 < chunks) text += markers[k][marker_slots[c]];
      }
      for (std::size_t id : script_ids) {
        auto [trad, simp] = script_pairs[id];
        utf8::append(text, traditional_class[k] ? trad : simp);
      }
      texts[k][j] = std::move(text);
    }
  }

  SynthOutput out{{tags, {}}, {}, {}};
  out.corpus.sentences.reserve(options.classes * options.per_class);
  for (std::size_t k = 0; k < options.classes; ++k) {
    for (std::size_t j = 0; j < options.per_class; ++j) {
      out.corpus.sentences.push_back({texts[k][j], k});
    }
  }
  out.pairs.reserve((options.classes - 1) * options.per_class);
  for (std::size_t j = 0; j < options.per_class; ++j) {
    for (std::size_t k = 1; k < options.classes; ++k) {
      out.pairs.push_back({texts[0][j], texts[k][j], k});
    }
  }
  out.lexicon_words = shared_words;
  for (const auto& class_markers : markers) {
    out.lexicon_words.insert(out.lexicon_words.end(), class_markers.begin(),
                             class_markers.end());
  }
  std::sort(out.lexicon_words.begin(), out.lexicon_words.end());
  return out;
}

}  // namespace gcrid
