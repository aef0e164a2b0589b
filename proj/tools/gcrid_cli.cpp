// gcrid — sentence-level identification of closely related Chinese language
// varieties. Subcommands cover the whole pipeline: synthetic corpus
// generation, corpus preparation, dictionary building, training, prediction
// and cross-validated evaluation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcrid/gcrid.hpp"

namespace {

using namespace gcrid;

struct TagSetOption {
  std::string path;  // empty: builtin GCR tag set

  TagSet resolve() const {
    if (path.empty()) return TagSet::builtin_gcr();
    return TagSet::load(path);
  }
};

struct SegmenterOption {
  std::string lexicon_path;
  bool pre_segmented = false;

  std::unique_ptr<Segmenter> resolve() const {
    if (pre_segmented) return std::make_unique<WhitespaceSegmenter>();
    if (lexicon_path.empty()) return std::make_unique<FmmSegmenter>();
    return std::make_unique<FmmSegmenter>(Lexicon::load(lexicon_path));
  }
};

struct TableOption {
  std::string path;  // empty: builtin starter table

  ScriptConversionTable resolve() const {
    if (path.empty()) return builtin_conversion_table();
    return ScriptConversionTable::load(path);
  }
};

void add_tag_set_option(CLI::App* cmd, TagSetOption& option) {
  cmd->add_option("--tags", option.path,
                  "tag-set definition file (id<TAB>display per line); "
                  "default: the six built-in GCR tags");
}

void add_segmenter_options(CLI::App* cmd, SegmenterOption& option) {
  cmd->add_option("--lexicon", option.lexicon_path,
                  "word lexicon for forward-maximum-matching segmentation "
                  "(one word per line); default: per-character fallback");
  cmd->add_flag("--pre-segmented", option.pre_segmented,
                "treat input text as pre-tokenized (tokens separated by "
                "U+0020) and skip lexicon segmentation");
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw data_error("cannot write output file: " + path);
  return file;
}

// ---------------------------------------------------------------- gen-corpus

struct GenCorpusArgs {
  SynthOptions options;
  std::string out_path;
  std::string pairs_out;
  std::string lexicon_out;
};

void run_gen_corpus(const GenCorpusArgs& args) {
  auto output = generate_corpus(args.options);
  std::ofstream file;
  save_tsv(output.corpus, open_output(args.out_path, file));
  if (!args.pairs_out.empty()) {
    std::ofstream pairs(args.pairs_out, std::ios::binary);
    if (!pairs) throw data_error("cannot write pairs file: " + args.pairs_out);
    save_parallel_pairs(output.pairs, output.corpus.tags, pairs);
  }
  if (!args.lexicon_out.empty()) {
    std::ofstream lex(args.lexicon_out, std::ios::binary);
    if (!lex) throw data_error("cannot write lexicon file: " + args.lexicon_out);
    for (const auto& word : output.lexicon_words) lex << word << '\n';
  }
  std::cerr << "generated " << output.corpus.sentences.size() << " sentences ("
            << args.options.classes << " classes x " << args.options.per_class
            << ")\n";
}

// ------------------------------------------------------------------- prepare

struct PrepareArgs {
  std::string in_path;
  std::string out_path;
  TagSetOption tags;
  SegmenterOption segmenter;
  FilterOptions filter;
  std::string min_unit = "tokens";
  bool no_filter = false;
  bool convert_script = false;
  TableOption table;
  std::size_t balance = 0;
  std::uint64_t seed = 0;
};

void run_prepare(const PrepareArgs& args) {
  auto tag_set = args.tags.resolve();
  auto corpus = load_tsv(args.in_path, tag_set);
  if (args.convert_script) {
    corpus = to_simplified(corpus, args.table.resolve());
  }
  if (!args.no_filter) {
    FilterOptions options = args.filter;
    if (args.min_unit == "chars") options.min_by_chars = true;
    else if (args.min_unit != "tokens") {
      throw usage_error("--min-unit must be 'tokens' or 'chars'");
    }
    auto segmenter = args.segmenter.resolve();
    corpus = filter_corpus(corpus, *segmenter, options);
  }
  if (args.balance > 0) {
    corpus = balance_sample(corpus, args.balance, args.seed);
  }
  std::ofstream file;
  save_tsv(corpus, open_output(args.out_path, file));
  std::cerr << "prepared corpus: " << corpus.sentences.size() << " sentences\n";
}

// --------------------------------------------------------------- build-dicts

struct BuildDictsArgs {
  std::string pmi_corpus;
  std::string align_pairs;
  std::string pmi_out = "pmi_sets.tsv";
  std::string align_out = "align_sets.tsv";
  TagSetOption tags;
  SegmenterOption segmenter;
  std::size_t top_k = 2000;
  std::size_t min_count = 5;
  std::size_t min_pair_count = 1;
  std::string pivot_tag = "MC";
  bool raw_script = false;
  TableOption table;
};

void print_set_sizes(const DialectWordSets& sets) {
  for (std::size_t t = 0; t < sets.tag_count(); ++t) {
    std::cerr << "  " << sets.tag_ids()[t] << ": " << sets.set_size(t)
              << " words\n";
  }
  if (sets.total_size() == 0) {
    std::cerr << "warning: all word sets are empty\n";
  }
}

void run_build_dicts(const BuildDictsArgs& args) {
  if (args.pmi_corpus.empty() && args.align_pairs.empty()) {
    throw usage_error("build-dicts needs --pmi and/or --align input");
  }
  auto tag_set = args.tags.resolve();
  auto segmenter = args.segmenter.resolve();
  if (!args.pmi_corpus.empty()) {
    auto corpus = load_tsv(args.pmi_corpus, tag_set);
    auto sets = build_pmi_sets(corpus, *segmenter, args.top_k, args.min_count);
    sets.save(args.pmi_out);
    std::cerr << "PMI word sets -> " << args.pmi_out << '\n';
    print_set_sizes(sets);
  }
  if (!args.align_pairs.empty()) {
    auto pivot = tag_set.index_of(args.pivot_tag);
    if (!pivot) throw usage_error("unknown pivot tag " + args.pivot_tag);
    auto raw = load_parallel_pairs(args.align_pairs, tag_set);
    auto pairs = tokenize_pairs(raw, *segmenter);
    std::optional<ScriptConversionTable> table;
    if (!args.raw_script) table = args.table.resolve();
    auto sets = build_alignment_sets(pairs, tag_set, *pivot,
                                     args.min_pair_count,
                                     table ? &*table : nullptr);
    sets.save(args.align_out);
    std::cerr << "alignment word sets -> " << args.align_out << '\n';
    print_set_sizes(sets);
  }
}

// --------------------------------------------------------- shared resources

struct ResourceArgs {
  SegmenterOption segmenter;
  std::string trad_lexicon_path;  // empty: builtin starter lexicon
  std::string pmi_sets_path;
  std::string align_sets_path;
};

struct LoadedResources {
  std::unique_ptr<Segmenter> segmenter;
  TraditionalCharLexicon traditional;
  std::optional<DialectWordSets> pmi_sets;
  std::optional<DialectWordSets> align_sets;

  FeatureResources view(const FeatureConfig& config) const {
    FeatureResources out;
    out.segmenter = segmenter.get();
    out.traditional = &traditional;
    if (config.pmi) {
      if (!pmi_sets) throw usage_error("missing resource: --pmi-sets file");
      out.pmi_sets = &*pmi_sets;
    }
    if (config.alignment) {
      if (!align_sets) throw usage_error("missing resource: --align-sets file");
      out.alignment_sets = &*align_sets;
    }
    return out;
  }
};

void add_resource_options(CLI::App* cmd, ResourceArgs& args) {
  add_segmenter_options(cmd, args.segmenter);
  cmd->add_option("--trad-lexicon", args.trad_lexicon_path,
                  "traditional-character lexicon file (one character per "
                  "line); default: builtin starter lexicon");
  cmd->add_option("--pmi-sets", args.pmi_sets_path,
                  "PMI word-set file produced by build-dicts");
  cmd->add_option("--align-sets", args.align_sets_path,
                  "alignment word-set file produced by build-dicts");
}

LoadedResources load_resources(const ResourceArgs& args, const TagSet& tags) {
  LoadedResources out;
  out.segmenter = args.segmenter.resolve();
  out.traditional = args.trad_lexicon_path.empty()
                        ? builtin_traditional_lexicon()
                        : TraditionalCharLexicon::load(args.trad_lexicon_path);
  if (!args.pmi_sets_path.empty()) {
    out.pmi_sets = DialectWordSets::load(args.pmi_sets_path, tags);
  }
  if (!args.align_sets_path.empty()) {
    out.align_sets = DialectWordSets::load(args.align_sets_path, tags);
  }
  return out;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
  std::string corpus_path;
  std::string model_out = "model.txt";
  std::string features = "c2";
  TagSetOption tags;
  ResourceArgs resources;
  TrainSettings settings;
  std::size_t top_k = 2000;
  std::size_t min_count = 5;
  bool binary_counts = false;
};

void run_train(const TrainArgs& args) {
  auto tag_set = args.tags.resolve();
  FeatureConfig config = FeatureConfig::parse(args.features);
  config.pmi_top_k = static_cast<std::uint32_t>(args.top_k);
  config.pmi_min_count = static_cast<std::uint32_t>(args.min_count);
  config.binary_counts = args.binary_counts;
  auto corpus = load_tsv(args.corpus_path, tag_set);
  auto loaded = load_resources(args.resources, tag_set);
  auto resources = loaded.view(config);
  auto space = fit_space(corpus, config, resources);
  auto vectors = vectorize(corpus, config, resources, space);
  auto model = train(vectors, tag_set, space, config, args.settings);
  save_model(model, args.model_out);
  std::cerr << "model -> " << args.model_out << '\n';
  std::cerr << "feature space size: " << model.space.size() << '\n';
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", accuracy(model, vectors) * 100.0);
  std::cerr << "training accuracy: " << buf << "%\n";
}

// ------------------------------------------------------------------- predict

struct PredictArgs {
  std::string model_path;
  std::string input_path;  // empty: stdin
  std::string out_path;
  ResourceArgs resources;
  bool with_scores = false;
  bool score_mode = false;
};

void run_predict(const PredictArgs& args) {
  auto model = load_model(args.model_path);
  auto loaded = load_resources(args.resources, model.tags);
  auto resources = loaded.view(model.config);

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (!args.input_path.empty() && args.input_path != "-") {
    file_in.open(args.input_path, std::ios::binary);
    if (!file_in) throw data_error("cannot open input file: " + args.input_path);
    in = &file_in;
  }
  std::ofstream file_out;
  std::ostream& out = open_output(args.out_path, file_out);

  std::string line;
  std::size_t line_no = 0, correct = 0, labeled = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!utf8::is_valid(line)) {
      throw data_error("input line " + std::to_string(line_no) +
                       ": invalid UTF-8");
    }
    std::string text = line;
    std::optional<std::size_t> truth;
    if (args.score_mode) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw data_error("input line " + std::to_string(line_no) +
                         ": --score-mode expects tag<TAB>text");
      }
      auto tag = model.tags.index_of(line.substr(0, tab));
      if (!tag) {
        throw data_error("input line " + std::to_string(line_no) +
                         ": unknown tag " + line.substr(0, tab));
      }
      truth = *tag;
      text = line.substr(tab + 1);
    }
    auto vec = extract(text, model.config, resources, model.space);
    auto predicted = predict(model, vec);
    out << model.tags.id(predicted) << '\t' << text;
    if (args.with_scores) {
      auto scores = decision_scores(model, vec);
      for (std::size_t t = 0; t < scores.size(); ++t) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.6f", scores[t]);
        out << '\t' << model.tags.id(t) << '=' << buf;
      }
    }
    out << '\n';
    if (truth) {
      ++labeled;
      if (*truth == predicted) ++correct;
    }
  }
  if (args.score_mode && labeled > 0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f",
                  100.0 * static_cast<double>(correct) /
                      static_cast<double>(labeled));
    std::cerr << "accuracy: " << buf << "% (" << correct << "/" << labeled
              << ")\n";
  }
}

// ------------------------------------------------------------------ evaluate

struct EvaluateArgs {
  std::string corpus_path;
  std::string out_path;
  std::vector<std::string> features;
  bool ablation = false;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::string scenario = "6way";
  bool wiki = false;
  bool convert_script = false;
  TableOption table;
  TagSetOption tags;
  SegmenterOption segmenter;
  std::string trad_lexicon_path;
  std::string pairs_path;
  std::string pivot_tag = "MC";
  std::size_t min_pair_count = 1;
  std::size_t top_k = 2000;
  std::size_t min_count = 5;
  bool binary_counts = false;
  TrainSettings settings;
  std::string format = "text";
  std::string significance = "fold";
};

const std::vector<std::string>& ablation_rows() {
  static const std::vector<std::string> rows = {
      "c1",          "c2",        "c3",          "wseg",
      "form",        "pmi",       "align",       "c2+form",
      "c2+pmi",      "c2+align",  "c2+form+pmi", "c2+pmi+align",
      "c2+form+align", "c2+form+pmi+align"};
  return rows;
}

void run_evaluate(const EvaluateArgs& args) {
  if (!args.ablation && args.features.empty()) {
    throw usage_error("evaluate needs --features or --ablation");
  }
  auto tag_set = args.tags.resolve();
  auto corpus = load_tsv(args.corpus_path, tag_set);
  if (args.convert_script) {
    corpus = to_simplified(corpus, args.table.resolve());
  }
  corpus = apply_scenario(corpus, parse_scenario(args.scenario), args.wiki);

  auto segmenter = args.segmenter.resolve();
  auto traditional = args.trad_lexicon_path.empty()
                         ? builtin_traditional_lexicon()
                         : TraditionalCharLexicon::load(args.trad_lexicon_path);
  std::vector<RawParallelPair> pairs;
  if (!args.pairs_path.empty()) {
    pairs = load_parallel_pairs(args.pairs_path, corpus.tags);
    if (args.convert_script) {
      auto table = args.table.resolve();
      for (auto& p : pairs) {
        p.pivot_text = to_simplified(p.pivot_text, table);
        p.target_text = to_simplified(p.target_text, table);
      }
    }
  }
  EvalResources resources;
  resources.segmenter = segmenter.get();
  resources.traditional = &traditional;
  resources.min_pair_count = args.min_pair_count;
  if (!pairs.empty()) {
    resources.pairs = &pairs;
    auto pivot = corpus.tags.index_of(args.pivot_tag);
    if (!pivot) {
      throw usage_error("pivot tag " + args.pivot_tag +
                        " is not in the evaluated tag set");
    }
    resources.pivot_tag = *pivot;
  }

  std::vector<std::string> rows =
      args.ablation ? ablation_rows() : args.features;

  std::vector<EvalReport> reports;
  std::vector<FeatureConfig> configs;
  for (const auto& row : rows) {
    FeatureConfig config = FeatureConfig::parse(row);
    config.pmi_top_k = static_cast<std::uint32_t>(args.top_k);
    config.pmi_min_count = static_cast<std::uint32_t>(args.min_count);
    config.binary_counts = args.binary_counts;
    if (config.alignment && pairs.empty()) {
      if (args.ablation) {
        std::cerr << "skipping " << config.name()
                  << ": no --pairs file for alignment features\n";
        continue;
      }
      throw usage_error("missing resource: --pairs (required by align)");
    }
    reports.push_back(cross_validate(corpus, config, args.settings, args.k,
                                     args.seed, resources));
    configs.push_back(config);
  }

  // significance against the character uni-gram baseline row, when present
  if (reports.size() > 1) {
    std::size_t baseline = reports.size();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (reports[i].config_name == "c1") baseline = i;
    }
    if (baseline < reports.size()) {
      for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i == baseline) continue;
        SignificanceResult sig;
        if (args.significance == "mcnemar") {
          auto res = mcnemar_test(reports[i].per_sentence_correct,
                                  reports[baseline].per_sentence_correct);
          sig.method = "mcnemar";
          sig.statistic = res.statistic;
          sig.df = 1;
          sig.significant_at_0_05 = res.significant(0.05);
          sig.significant_at_0_01 = res.significant(0.01);
        } else if (args.significance == "fold") {
          auto res = paired_t_test(reports[i].fold_accuracies,
                                   reports[baseline].fold_accuracies);
          sig.method = "paired-t";
          sig.statistic = res.t;
          sig.df = res.df;
          sig.significant_at_0_05 = res.significant(0.05);
          sig.significant_at_0_01 = res.significant(0.01);
        } else {
          throw usage_error("--significance must be 'fold' or 'mcnemar'");
        }
        reports[i].significance["c1"] = sig;
      }
    }
  }

  std::ofstream file;
  std::ostream& out = open_output(args.out_path, file);
  ReportFormat format;
  if (args.format == "text") format = ReportFormat::TEXT;
  else if (args.format == "tsv") format = ReportFormat::TSV;
  else if (args.format == "jsonl") format = ReportFormat::JSONL;
  else throw usage_error("--format must be text, tsv or jsonl");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    render_report(reports[i], format, out, /*tsv_header=*/i == 0);
    if (format == ReportFormat::TEXT) out << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gcrid: sentence-level identification of closely related Chinese "
      "language varieties"};
  app.require_subcommand(1);

  GenCorpusArgs gen;
  auto* gen_cmd = app.add_subcommand(
      "gen-corpus", "generate a synthetic labeled corpus with parallel pairs");
  gen_cmd->add_option("--classes", gen.options.classes, "number of classes")
      ->capture_default_str();
  gen_cmd->add_option("--per-class", gen.options.per_class,
                      "sentences per class")
      ->capture_default_str();
  gen_cmd->add_option("--marker-vocab", gen.options.marker_vocab,
                      "marker words per class")
      ->capture_default_str();
  gen_cmd->add_option("--shared-vocab", gen.options.shared_vocab,
                      "size of the class-independent base vocabulary")
      ->capture_default_str();
  gen_cmd->add_option("--markers-per-sentence",
                      gen.options.markers_per_sentence,
                      "marker words per sentence")
      ->capture_default_str();
  gen_cmd->add_option("--shared-per-sentence", gen.options.shared_per_sentence,
                      "base words per sentence")
      ->capture_default_str();
  gen_cmd->add_flag("--bigram-markers", gen.options.bigram_markers,
                    "markers share their characters across classes, so "
                    "unigrams are uninformative but bigrams separate");
  gen_cmd->add_flag("--scripted", gen.options.scripted,
                    "give HK/TW/MAC classes traditional characters and the "
                    "rest their simplified forms");
  gen_cmd->add_option("--script-chars-per-sentence",
                      gen.options.script_chars_per_sentence,
                      "script-bearing characters per sentence in scripted mode")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.options.seed, "generator seed")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out_path, "corpus TSV output ('-' = stdout)");
  gen_cmd->add_option("--pairs-out", gen.pairs_out,
                      "also write parallel pairs (pivot = first class)");
  gen_cmd->add_option("--lexicon-out", gen.lexicon_out,
                      "also write the generated word lexicon");

  PrepareArgs prepare;
  auto* prepare_cmd = app.add_subcommand(
      "prepare", "filter, dedup, convert and balance a labeled corpus");
  prepare_cmd->add_option("--in", prepare.in_path, "input corpus TSV")
      ->required();
  prepare_cmd->add_option("--out", prepare.out_path,
                          "output corpus TSV ('-' = stdout)");
  add_tag_set_option(prepare_cmd, prepare.tags);
  add_segmenter_options(prepare_cmd, prepare.segmenter);
  prepare_cmd
      ->add_option("--max-latin-ratio", prepare.filter.max_latin_ratio,
                   "remove sentences whose Latin-token ratio reaches this")
      ->capture_default_str();
  prepare_cmd
      ->add_option("--min-tokens", prepare.filter.min_tokens,
                   "remove sentences with fewer units than this")
      ->capture_default_str();
  prepare_cmd
      ->add_option("--min-unit", prepare.min_unit,
                   "unit for --min-tokens: 'tokens' or 'chars'")
      ->capture_default_str();
  prepare_cmd->add_flag("--count-punct,!--no-count-punct",
                        prepare.filter.count_punctuation,
                        "count punctuation-only tokens (default on)");
  prepare_cmd->add_flag("!--no-dedup", prepare.filter.dedup,
                        "disable exact-duplicate removal");
  prepare_cmd->add_flag("--no-filter", prepare.no_filter,
                        "skip filtering (only convert and/or balance)");
  prepare_cmd->add_flag("--convert-script", prepare.convert_script,
                        "convert text with the script conversion table");
  prepare_cmd->add_option("--table", prepare.table.path,
                          "script conversion table TSV; default: builtin");
  prepare_cmd->add_option("--balance", prepare.balance,
                          "randomly sample this many sentences per class");
  prepare_cmd->add_option("--seed", prepare.seed, "sampling seed")
      ->capture_default_str();

  BuildDictsArgs dicts;
  auto* dicts_cmd = app.add_subcommand(
      "build-dicts", "build PMI and/or alignment dialect word sets");
  dicts_cmd->add_option("--pmi", dicts.pmi_corpus,
                        "training corpus TSV for PMI word sets");
  dicts_cmd->add_option("--align", dicts.align_pairs,
                        "parallel-pair file for alignment word sets");
  dicts_cmd->add_option("--pmi-out", dicts.pmi_out, "PMI word-set output")
      ->capture_default_str();
  dicts_cmd->add_option("--align-out", dicts.align_out,
                        "alignment word-set output")
      ->capture_default_str();
  add_tag_set_option(dicts_cmd, dicts.tags);
  add_segmenter_options(dicts_cmd, dicts.segmenter);
  dicts_cmd->add_option("--top-k", dicts.top_k, "PMI words kept per dialect")
      ->capture_default_str();
  dicts_cmd
      ->add_option("--min-count", dicts.min_count,
                   "minimum corpus frequency for PMI candidates")
      ->capture_default_str();
  dicts_cmd
      ->add_option("--min-pair-count", dicts.min_pair_count,
                   "minimum occurrences of a divergent mapping")
      ->capture_default_str();
  dicts_cmd->add_option("--pivot-tag", dicts.pivot_tag,
                        "pivot dialect of the parallel pairs")
      ->capture_default_str();
  dicts_cmd->add_flag("--raw-script", dicts.raw_script,
                      "skip script normalization before LCS differencing");
  dicts_cmd->add_option("--table", dicts.table.path,
                        "script conversion table TSV; default: builtin");

  TrainArgs train_args;
  auto* train_cmd =
      app.add_subcommand("train", "train a one-vs-rest linear model");
  train_cmd->add_option("--corpus", train_args.corpus_path,
                        "training corpus TSV")
      ->required();
  train_cmd->add_option("--out", train_args.model_out, "model file output")
      ->capture_default_str();
  train_cmd
      ->add_option("--features", train_args.features,
                   "feature families, e.g. c2,form,pmi "
                   "(c1 c2 c3 wseg form pmi align)")
      ->capture_default_str();
  add_tag_set_option(train_cmd, train_args.tags);
  add_resource_options(train_cmd, train_args.resources);
  train_cmd->add_option("--c", train_args.settings.regularization_c,
                        "regularization trade-off C")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train_args.settings.epochs,
                        "training epochs")
      ->capture_default_str();
  train_cmd->add_option("--seed", train_args.settings.seed, "training seed")
      ->capture_default_str();
  train_cmd->add_option("--top-k", train_args.top_k,
                        "PMI top-k recorded in the model config")
      ->capture_default_str();
  train_cmd->add_option("--min-count", train_args.min_count,
                        "PMI min-count recorded in the model config")
      ->capture_default_str();
  train_cmd->add_flag("--binary", train_args.binary_counts,
                      "presence flags instead of term counts");

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand(
      "predict", "classify sentences (one per line) with a trained model");
  predict_cmd->add_option("--model", predict_args.model_path, "model file")
      ->required();
  predict_cmd->add_option("--input", predict_args.input_path,
                          "input file ('-' = stdin)");
  predict_cmd->add_option("--out", predict_args.out_path,
                          "output file ('-' = stdout)");
  add_resource_options(predict_cmd, predict_args.resources);
  predict_cmd->add_flag("--scores", predict_args.with_scores,
                        "append per-tag decision scores");
  predict_cmd->add_flag("--score-mode", predict_args.score_mode,
                        "input is tag<TAB>text; also print accuracy");

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "cross-validated evaluation with per-fold resource building");
  eval_cmd->add_option("--corpus", eval_args.corpus_path, "corpus TSV")
      ->required();
  eval_cmd->add_option("--out", eval_args.out_path,
                       "report output ('-' = stdout)");
  eval_cmd->add_option("--features", eval_args.features,
                       "feature config to evaluate (repeatable)");
  eval_cmd->add_flag("--ablation", eval_args.ablation,
                     "evaluate the built-in feature-config ablation list");
  eval_cmd->add_option("--k", eval_args.k, "number of folds")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval_args.seed, "fold/training seed")
      ->capture_default_str();
  eval_cmd
      ->add_option("--scenario", eval_args.scenario,
                   "evaluation frame: 6way, 3way or 2way")
      ->capture_default_str();
  eval_cmd->add_flag("--wiki", eval_args.wiki,
                     "use the Wikipedia 3way frame (MC/HK/TW) instead of "
                     "the news frame (MC/TW/SGP)");
  eval_cmd->add_flag("--convert-script", eval_args.convert_script,
                     "convert all text to simplified script before "
                     "feature extraction");
  eval_cmd->add_option("--table", eval_args.table.path,
                       "script conversion table TSV; default: builtin");
  add_tag_set_option(eval_cmd, eval_args.tags);
  add_segmenter_options(eval_cmd, eval_args.segmenter);
  eval_cmd->add_option("--trad-lexicon", eval_args.trad_lexicon_path,
                       "traditional-character lexicon; default: builtin");
  eval_cmd->add_option("--pairs", eval_args.pairs_path,
                       "parallel-pair file for alignment features");
  eval_cmd->add_option("--pivot-tag", eval_args.pivot_tag,
                       "pivot dialect of the parallel pairs")
      ->capture_default_str();
  eval_cmd
      ->add_option("--min-pair-count", eval_args.min_pair_count,
                   "minimum occurrences of a divergent mapping")
      ->capture_default_str();
  eval_cmd->add_option("--top-k", eval_args.top_k, "PMI words kept per dialect")
      ->capture_default_str();
  eval_cmd
      ->add_option("--min-count", eval_args.min_count,
                   "minimum corpus frequency for PMI candidates")
      ->capture_default_str();
  eval_cmd->add_flag("--binary", eval_args.binary_counts,
                     "presence flags instead of term counts");
  eval_cmd->add_option("--c", eval_args.settings.regularization_c,
                       "regularization trade-off C")
      ->capture_default_str();
  eval_cmd->add_option("--epochs", eval_args.settings.epochs, "training epochs")
      ->capture_default_str();
  eval_cmd
      ->add_option("--format", eval_args.format,
                   "report format: text, tsv or jsonl")
      ->capture_default_str();
  eval_cmd
      ->add_option("--significance", eval_args.significance,
                   "significance test vs the c1 row: 'fold' (paired t) or "
                   "'mcnemar' (per sentence)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (gen_cmd->parsed()) run_gen_corpus(gen);
    if (prepare_cmd->parsed()) run_prepare(prepare);
    if (dicts_cmd->parsed()) run_build_dicts(dicts);
    if (train_cmd->parsed()) run_train(train_args);
    if (predict_cmd->parsed()) run_predict(predict_args);
    if (eval_cmd->parsed()) run_evaluate(eval_args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
