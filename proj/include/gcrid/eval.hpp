#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "gcrid/alignment.hpp"
#include "gcrid/corpus.hpp"
#include "gcrid/errors.hpp"
#include "gcrid/features.hpp"
#include "gcrid/model.hpp"

namespace gcrid {

// K x K counts; rows are true tags, columns predicted tags.
struct ConfusionMatrix {
  std::vector<std::string> tag_ids;
  std::vector<std::vector<std::uint64_t>> counts;

  explicit ConfusionMatrix(const TagSet& tags)
      : counts(tags.size(), std::vector<std::uint64_t>(tags.size(), 0)) {
    for (const auto& t : tags.all()) tag_ids.push_back(t.id);
  }
  ConfusionMatrix() = default;

  std::size_t size() const { return tag_ids.size(); }

  void record(std::size_t true_tag, std::size_t predicted_tag) {
    counts.at(true_tag).at(predicted_tag)++;
  }

  std::uint64_t row_sum(std::size_t t) const {
    std::uint64_t sum = 0;
    for (auto c : counts.at(t)) sum += c;
    return sum;
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (std::size_t t = 0; t < size(); ++t) sum += row_sum(t);
    return sum;
  }

  std::uint64_t trace() const {
    std::uint64_t sum = 0;
    for (std::size_t t = 0; t < size(); ++t) sum += counts[t][t];
    return sum;
  }

  // diagonal / row sum; 0 for an empty row
  double per_class_accuracy(std::size_t t) const {
    auto row = row_sum(t);
    if (row == 0) return 0.0;
    return static_cast<double>(counts[t][t]) / static_cast<double>(row);
  }

  bool operator==(const ConfusionMatrix&) const = default;
};

struct SignificanceResult {
  std::string method;  // "paired-t" or "mcnemar"
  double statistic = 0.0;
  std::size_t df = 0;
  bool significant_at_0_05 = false;
  bool significant_at_0_01 = false;

  bool operator==(const SignificanceResult&) const = default;
};

struct EvalReport {
  std::string config_name;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  ConfusionMatrix confusion;  // summed over folds
  // indexed by source-corpus sentence position; every sentence is tested
  // exactly once across the folds
  std::vector<std::uint8_t> per_sentence_correct;
  std::map<std::string, SignificanceResult> significance;  // vs baseline name

  double micro_accuracy() const {
    auto total = confusion.total();
    if (total == 0) return 0.0;
    return static_cast<double>(confusion.trace()) / static_cast<double>(total);
  }

  bool operator==(const EvalReport&) const = default;
};

// Two-tailed paired t-test. Zero-variance differences degenerate to t = 0
// (zero mean, not significant) or t = +/-inf (nonzero mean, significant).
struct TTestResult {
  double t = 0.0;
  std::size_t df = 0;

  bool significant(double alpha) const {
    if (std::isinf(t)) return true;
    return std::fabs(t) > critical_value(df, alpha);
  }

  // Two-tailed critical values for df 1..30; beyond 30 the normal
  // approximation row is used. Only alpha 0.05 and 0.01 are tabulated.
  static double critical_value(std::size_t df, double alpha) {
    static constexpr double k05[30] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    static constexpr double k01[30] = {
        63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169,
        3.106,  3.055, 3.012, 2.977, 2.947, 2.921, 2.898, 2.878, 2.861, 2.845,
        2.831,  2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750};
    const double* table;
    double z;
    if (std::fabs(alpha - 0.05) < 1e-12) {
      table = k05;
      z = 1.960;
    } else if (std::fabs(alpha - 0.01) < 1e-12) {
      table = k01;
      z = 2.576;
    } else {
      throw std::invalid_argument("t-test: only alpha 0.05 and 0.01 are tabulated");
    }
    if (df == 0) throw std::invalid_argument("t-test: df must be >= 1");
    return df <= 30 ? table[df - 1] : z;
  }
};

inline TTestResult paired_t_test(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("paired_t_test: length mismatch");
  }
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired_t_test: need n >= 2");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dev = (a[i] - b[i]) - mean;
    ss += dev * dev;
  }
  TTestResult result;
  result.df = n - 1;
  if (ss == 0.0) {
    if (mean == 0.0) {
      result.t = 0.0;
    } else {
      result.t = mean > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    }
    return result;
  }
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return result;
}

// McNemar's test with continuity correction over per-sentence correctness;
// the statistic is chi-squared with one degree of freedom.
struct McNemarResult {
  double statistic = 0.0;
  std::uint64_t a_only = 0;  // a correct, b wrong
  std::uint64_t b_only = 0;  // b correct, a wrong

  bool significant(double alpha) const {
    double crit;
    if (std::fabs(alpha - 0.05) < 1e-12) crit = 3.841;
    else if (std::fabs(alpha - 0.01) < 1e-12) crit = 6.635;
    else throw std::invalid_argument("mcnemar: only alpha 0.05 and 0.01 supported");
    return statistic > crit;
  }
};

inline McNemarResult mcnemar_test(std::span<const std::uint8_t> a_correct,
                                  std::span<const std::uint8_t> b_correct) {
  if (a_correct.size() != b_correct.size()) {
    throw std::invalid_argument("mcnemar_test: length mismatch");
  }
  McNemarResult result;
  for (std::size_t i = 0; i < a_correct.size(); ++i) {
    if (a_correct[i] && !b_correct[i]) result.a_only++;
    if (!a_correct[i] && b_correct[i]) result.b_only++;
  }
  double disagree = static_cast<double>(result.a_only + result.b_only);
  if (disagree == 0.0) return result;
  double diff =
      std::fabs(static_cast<double>(result.a_only) - static_cast<double>(result.b_only));
  double adjusted = std::max(0.0, diff - 1.0);
  result.statistic = adjusted * adjusted / disagree;
  return result;
}

// Fixed inputs for cross-validated evaluation. Parallel pairs are optional
// and only consulted when the alignment family is enabled.
struct EvalResources {
  const Segmenter* segmenter = nullptr;
  const TraditionalCharLexicon* traditional = nullptr;
  const std::vector<RawParallelPair>* pairs = nullptr;
  std::size_t pivot_tag = 0;
  std::size_t min_pair_count = 1;
};

// Per-fold view handed to an observer; used by leakage tests and verbose
// reporting.
struct FoldInfo {
  std::size_t fold = 0;
  const FoldSplit* split = nullptr;
  const FeatureSpace* space = nullptr;
  const DialectWordSets* pmi_sets = nullptr;        // null unless configured
  const DialectWordSets* alignment_sets = nullptr;  // null unless configured
  double accuracy = 0.0;
};

using FoldObserver = std::function<void(const FoldInfo&)>;

// k-fold cross validation. Every derived resource — feature space, PMI
// sets, alignment sets — is rebuilt per fold from the training split alone;
// parallel pairs that share a text with the fold's test split are excluded
// from that fold's alignment dictionary.
inline EvalReport cross_validate(const Corpus& corpus,
                                 const FeatureConfig& config,
                                 const TrainSettings& settings, std::size_t k,
                                 std::uint64_t seed,
                                 const EvalResources& resources,
                                 const FoldObserver& observer = {}) {
  if (config.alignment &&
      (resources.pairs == nullptr || resources.pairs->empty())) {
    throw usage_error(
        "missing resource: parallel pairs (required by align in evaluation)");
  }
  std::vector<ParallelPair> tokenized_pairs;
  if (config.alignment) {
    if (resources.segmenter == nullptr) {
      throw usage_error("missing resource: segmenter (required by align)");
    }
    tokenized_pairs.reserve(resources.pairs->size());
    for (const auto& p : *resources.pairs) {
      tokenized_pairs.push_back({resources.segmenter->segment(p.pivot_text),
                                 resources.segmenter->segment(p.target_text),
                                 p.target_tag});
    }
  }

  EvalReport report;
  report.config_name = config.name();
  report.confusion = ConfusionMatrix(corpus.tags);
  report.per_sentence_correct.assign(corpus.sentences.size(), 0);

  auto folds = stratified_kfold(corpus, k, seed);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& split = folds[f];

    std::optional<DialectWordSets> pmi_sets;
    if (config.pmi) {
      if (resources.segmenter == nullptr) {
        throw usage_error("missing resource: segmenter (required by pmi)");
      }
      pmi_sets = build_pmi_sets(split.train, *resources.segmenter,
                                config.pmi_top_k, config.pmi_min_count);
    }

    std::optional<DialectWordSets> alignment_sets;
    if (config.alignment) {
      std::unordered_set<std::string> test_texts;
      for (const auto& s : split.test.sentences) test_texts.insert(s.text);
      std::vector<ParallelPair> fold_pairs;
      for (std::size_t i = 0; i < tokenized_pairs.size(); ++i) {
        const auto& raw = (*resources.pairs)[i];
        if (test_texts.count(raw.pivot_text) ||
            test_texts.count(raw.target_text)) {
          continue;
        }
        fold_pairs.push_back(tokenized_pairs[i]);
      }
      alignment_sets =
          build_alignment_sets(fold_pairs, corpus.tags, resources.pivot_tag,
                               resources.min_pair_count);
    }

    FeatureResources fold_resources{
        resources.segmenter, resources.traditional,
        pmi_sets ? &*pmi_sets : nullptr,
        alignment_sets ? &*alignment_sets : nullptr};
    FeatureSpace space = fit_space(split.train, config, fold_resources);
    auto train_vectors = vectorize(split.train, config, fold_resources, space);
    auto test_vectors = vectorize(split.test, config, fold_resources, space);

    TrainSettings fold_settings = settings;
    fold_settings.seed = mix_seed(settings.seed, f + 1);
    LinearModel model = train(train_vectors, corpus.tags, space, config,
                              fold_settings);

    std::size_t correct = 0;
    for (std::size_t i = 0; i < test_vectors.size(); ++i) {
      std::size_t predicted = predict(model, test_vectors[i].first);
      std::size_t truth = test_vectors[i].second;
      report.confusion.record(truth, predicted);
      if (predicted == truth) {
        ++correct;
        report.per_sentence_correct[split.test_indices[i]] = 1;
      }
    }
    double fold_accuracy =
        test_vectors.empty()
            ? 0.0
            : static_cast<double>(correct) / static_cast<double>(test_vectors.size());
    report.fold_accuracies.push_back(fold_accuracy);

    if (observer) {
      FoldInfo info;
      info.fold = f;
      info.split = &split;
      info.space = &space;
      info.pmi_sets = pmi_sets ? &*pmi_sets : nullptr;
      info.alignment_sets = alignment_sets ? &*alignment_sets : nullptr;
      info.accuracy = fold_accuracy;
      observer(info);
    }
  }
  double sum = 0.0;
  for (double a : report.fold_accuracies) sum += a;
  report.mean_accuracy = report.fold_accuracies.empty()
                             ? 0.0
                             : sum / static_cast<double>(report.fold_accuracies.size());
  return report;
}

enum class ReportFormat { TEXT, TSV, JSONL };

namespace detail {

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

inline std::string accuracy_str(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", fraction);
  return buf;
}

}  // namespace detail

// Human-readable accuracy table, per-class table and confusion grid.
inline void render_report_text(const EvalReport& report, std::ostream& out) {
  out << "== " << report.config_name << " ==\n";
  out << "fold accuracy:";
  for (double a : report.fold_accuracies) out << ' ' << detail::percent(a);
  out << '\n';
  out << "mean accuracy: " << detail::percent(report.mean_accuracy) << '\n';
  out << "micro accuracy: " << detail::percent(report.micro_accuracy()) << '\n';
  for (const auto& [baseline, sig] : report.significance) {
    out << "significance vs " << baseline << ": " << sig.method << " statistic "
        << detail::accuracy_str(sig.statistic) << " df " << sig.df
        << (sig.significant_at_0_01
                ? " *(p<0.01)"
                : (sig.significant_at_0_05 ? " (p<0.05)" : " (n.s.)"))
        << '\n';
  }
  out << "per-class accuracy:\n";
  const auto& tags = report.confusion.tag_ids;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    out << "  " << std::left << std::setw(6) << tags[t] << std::right << ' '
        << detail::percent(report.confusion.per_class_accuracy(t)) << '\n';
  }
  out << "confusion (rows true, columns predicted):\n";
  out << "  " << std::setw(6) << "";
  for (const auto& id : tags) out << ' ' << std::setw(6) << id;
  out << '\n';
  for (std::size_t t = 0; t < tags.size(); ++t) {
    out << "  " << std::left << std::setw(6) << tags[t] << std::right;
    for (std::size_t p = 0; p < tags.size(); ++p) {
      out << ' ' << std::setw(6) << report.confusion.counts[t][p];
    }
    out << '\n';
  }
}

// `config<TAB>fold<TAB>accuracy` rows, a summary stanza, and the confusion
// matrix as a labeled grid.
inline void render_report_tsv(const EvalReport& report, std::ostream& out,
                              bool with_header = true) {
  if (with_header) out << "config\tfold\taccuracy\n";
  for (std::size_t f = 0; f < report.fold_accuracies.size(); ++f) {
    out << report.config_name << '\t' << f << '\t'
        << detail::accuracy_str(report.fold_accuracies[f]) << '\n';
  }
  out << "# summary\t" << report.config_name << "\tmean\t"
      << detail::accuracy_str(report.mean_accuracy) << '\n';
  out << "# summary\t" << report.config_name << "\tmicro\t"
      << detail::accuracy_str(report.micro_accuracy()) << '\n';
  const auto& tags = report.confusion.tag_ids;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    out << "# summary\t" << report.config_name << "\tclass:" << tags[t] << '\t'
        << detail::accuracy_str(report.confusion.per_class_accuracy(t)) << '\n';
  }
  for (const auto& [baseline, sig] : report.significance) {
    out << "# summary\t" << report.config_name << "\tsig:" << baseline << '\t'
        << sig.method << '\t' << detail::accuracy_str(sig.statistic) << '\t'
        << (sig.significant_at_0_01 ? "p<0.01" : (sig.significant_at_0_05 ? "p<0.05" : "n.s."))
        << '\n';
  }
  out << "# confusion\t" << report.config_name << '\n';
  for (const auto& id : tags) out << '\t' << id;
  out << '\n';
  for (std::size_t t = 0; t < tags.size(); ++t) {
    out << tags[t];
    for (std::size_t p = 0; p < tags.size(); ++p) {
      out << '\t' << report.confusion.counts[t][p];
    }
    out << '\n';
  }
}

// One JSON object per report; parse_report_jsonl reverses this exactly.
inline void render_report_jsonl(const EvalReport& report, std::ostream& out) {
  nlohmann::json j;
  j["config"] = report.config_name;
  j["fold_accuracies"] = report.fold_accuracies;
  j["mean_accuracy"] = report.mean_accuracy;
  j["micro_accuracy"] = report.micro_accuracy();
  j["tags"] = report.confusion.tag_ids;
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t t = 0; t < report.confusion.tag_ids.size(); ++t) {
    per_class[report.confusion.tag_ids[t]] =
        report.confusion.per_class_accuracy(t);
  }
  j["per_class_accuracy"] = per_class;
  j["confusion"] = report.confusion.counts;
  std::string bits(report.per_sentence_correct.size(), '0');
  for (std::size_t i = 0; i < report.per_sentence_correct.size(); ++i) {
    if (report.per_sentence_correct[i]) bits[i] = '1';
  }
  j["per_sentence_correct"] = bits;
  nlohmann::json sig = nlohmann::json::object();
  for (const auto& [baseline, s] : report.significance) {
    sig[baseline] = {{"method", s.method},
                     {"statistic", s.statistic},
                     {"df", s.df},
                     {"significant_at_0_05", s.significant_at_0_05},
                     {"significant_at_0_01", s.significant_at_0_01}};
  }
  j["significance"] = sig;
  out << j.dump() << '\n';
}

inline EvalReport parse_report_jsonl(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  EvalReport report;
  report.config_name = j.at("config").get<std::string>();
  report.fold_accuracies = j.at("fold_accuracies").get<std::vector<double>>();
  report.mean_accuracy = j.at("mean_accuracy").get<double>();
  report.confusion.tag_ids = j.at("tags").get<std::vector<std::string>>();
  report.confusion.counts =
      j.at("confusion").get<std::vector<std::vector<std::uint64_t>>>();
  std::string bits = j.at("per_sentence_correct").get<std::string>();
  report.per_sentence_correct.assign(bits.size(), 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') report.per_sentence_correct[i] = 1;
  }
  for (const auto& [baseline, s] : j.at("significance").items()) {
    SignificanceResult result;
    result.method = s.at("method").get<std::string>();
    result.statistic = s.at("statistic").get<double>();
    result.df = s.at("df").get<std::size_t>();
    result.significant_at_0_05 = s.at("significant_at_0_05").get<bool>();
    result.significant_at_0_01 = s.at("significant_at_0_01").get<bool>();
    report.significance[baseline] = result;
  }
  return report;
}

inline void render_report(const EvalReport& report, ReportFormat format,
                          std::ostream& out, bool tsv_header = true) {
  switch (format) {
    case ReportFormat::TEXT: render_report_text(report, out); break;
    case ReportFormat::TSV: render_report_tsv(report, out, tsv_header); break;
    case ReportFormat::JSONL: render_report_jsonl(report, out); break;
  }
}

}  // namespace gcrid
