#pragma once

#include <string>
#include <vector>

#include "gcrid/corpus.hpp"
#include "gcrid/errors.hpp"

namespace gcrid {

// The evaluation frames for the Greater-China-Region task: all varieties,
// a three-variety subset, or the simplified-script group against the
// traditional-script group.
enum class Scenario { SIX_WAY, THREE_WAY, TWO_WAY };

inline Scenario parse_scenario(const std::string& name) {
  if (name == "6way") return Scenario::SIX_WAY;
  if (name == "3way") return Scenario::THREE_WAY;
  if (name == "2way") return Scenario::TWO_WAY;
  throw usage_error("unknown scenario '" + name + "' (expected 6way|3way|2way)");
}

// Restricts a corpus to the named tags, re-indexed in the given order.
inline Corpus filter_to_tags(const Corpus& corpus,
                             const std::vector<std::string>& ids) {
  std::vector<DialectTag> tags;
  std::vector<std::size_t> old_index;
  for (const auto& id : ids) {
    auto idx = corpus.tags.index_of(id);
    if (!idx) {
      throw data_error("scenario tag " + id + " is not in the corpus tag set");
    }
    tags.push_back(corpus.tags.at(*idx));
    old_index.push_back(*idx);
  }
  Corpus out{TagSet(std::move(tags)), {}};
  for (const auto& s : corpus.sentences) {
    for (std::size_t n = 0; n < old_index.size(); ++n) {
      if (s.tag == old_index[n]) {
        out.sentences.push_back({s.text, n});
        break;
      }
    }
  }
  return out;
}

// Collapses the corpus into the simplified-script group (MC/MAL/SGP) vs the
// traditional-script group (HK/TW/MAC).
inline Corpus merge_two_way(const Corpus& corpus) {
  auto group_of = [](const std::string& id) -> int {
    if (id == "MC" || id == "MAL" || id == "SGP") return 0;
    if (id == "HK" || id == "TW" || id == "MAC") return 1;
    return -1;
  };
  std::vector<int> groups(corpus.tags.size());
  for (std::size_t t = 0; t < corpus.tags.size(); ++t) {
    groups[t] = group_of(corpus.tags.id(t));
    if (groups[t] < 0) {
      throw data_error("tag " + corpus.tags.id(t) +
                       " belongs to neither script group; 2way needs GCR tags");
    }
  }
  Corpus out{TagSet({{"SIMP", "Simplified-script group"},
                     {"TRAD", "Traditional-script group"}}),
             {}};
  for (const auto& s : corpus.sentences) {
    out.sentences.push_back({s.text, static_cast<std::size_t>(groups[s.tag])});
  }
  return out;
}

// wiki selects the Wikipedia three-variety frame (MC/HK/TW) instead of the
// news frame (MC/TW/SGP).
inline Corpus apply_scenario(const Corpus& corpus, Scenario scenario,
                             bool wiki = false) {
  switch (scenario) {
    case Scenario::SIX_WAY:
      return corpus;
    case Scenario::THREE_WAY:
      return filter_to_tags(corpus, wiki
                                        ? std::vector<std::string>{"MC", "HK", "TW"}
                                        : std::vector<std::string>{"MC", "TW", "SGP"});
    case Scenario::TWO_WAY:
      return merge_two_way(corpus);
  }
  throw internal_error("unreachable scenario");
}

}  // namespace gcrid
