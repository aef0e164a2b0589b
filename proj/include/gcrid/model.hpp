#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gcrid/corpus.hpp"
#include "gcrid/errors.hpp"
#include "gcrid/features.hpp"
#include "gcrid/rng.hpp"

namespace gcrid {

struct TrainSettings {
  double regularization_c = 1.0;  // larger C = weaker regularization
  std::size_t epochs = 50;
  std::uint64_t seed = 0;
  bool shuffle_each_epoch = true;
};

// One-vs-rest linear classifier: per tag a dense weight vector over the
// frozen feature space plus a bias. Immutable once trained.
struct LinearModel {
  TagSet tags;
  std::vector<std::vector<double>> weights;  // [tag][feature]
  std::vector<double> bias;                  // [tag]
  FeatureSpace space;
  FeatureConfig config;
};

using LabeledVectors = std::vector<std::pair<SparseFeatureVector, std::size_t>>;

// Called after each epoch of each binary subproblem with the regularized
// objective value; used by tests that pin the optimization behavior.
using EpochObserver =
    std::function<void(std::size_t tag, std::size_t epoch, double objective)>;

namespace detail {

inline double sparse_dot(const std::vector<double>& w,
                         const SparseFeatureVector& x) {
  double acc = 0.0;
  for (auto [idx, val] : x.entries) {
    if (idx >= w.size()) {
      throw data_error("feature index " + std::to_string(idx) +
                       " out of range for space of size " +
                       std::to_string(w.size()) + " (space mismatch)");
    }
    acc += w[idx] * val;
  }
  return acc;
}

// lambda/2 * (|w|^2 + b^2) + mean hinge over the data. The bias rides as an
// augmented always-on feature, so it is regularized like any weight.
inline double binary_objective(const std::vector<double>& w, double b,
                               const LabeledVectors& data, std::size_t tag,
                               double lambda) {
  double norm2 = b * b;
  for (double v : w) norm2 += v * v;
  double hinge_sum = 0.0;
  for (const auto& [x, y_tag] : data) {
    double y = y_tag == tag ? 1.0 : -1.0;
    double margin = y * (sparse_dot(w, x) + b);
    if (margin < 1.0) hinge_sum += 1.0 - margin;
  }
  return 0.5 * lambda * norm2 + hinge_sum / static_cast<double>(data.size());
}

}  // namespace detail

// Trains one L2-regularized hinge-loss separator per tag (that tag vs the
// rest) with a primal subgradient scheme: step size 1/(lambda*t) where
// lambda = 1/(C*n), seeded per-epoch shuffling. Subgradient steps are not
// descent steps, so each subproblem keeps the best epoch-boundary iterate
// by objective value; that snapshot is the trained separator and makes the
// objective sequence non-increasing. Bit-for-bit reproducible for identical
// data order and settings.
inline LinearModel train(const LabeledVectors& data, const TagSet& tags,
                         FeatureSpace space, FeatureConfig config,
                         const TrainSettings& settings,
                         const EpochObserver& epoch_observer = {}) {
  if (settings.regularization_c <= 0.0) {
    throw std::invalid_argument("train: regularization_c must be > 0");
  }
  if (settings.epochs < 1) {
    throw std::invalid_argument("train: epochs must be >= 1");
  }
  if (data.empty()) throw data_error("train: empty training data");
  {
    std::vector<char> present(tags.size(), 0);
    std::size_t distinct = 0;
    for (const auto& [x, tag] : data) {
      if (tag >= tags.size()) throw data_error("train: tag index out of range");
      if (!present[tag]) present[tag] = 1, ++distinct;
    }
    if (distinct < 2) {
      throw data_error("train: single-class data; need at least two tags");
    }
  }
  const std::size_t n = data.size();
  const std::size_t dim = space.size();
  const double lambda = 1.0 / (settings.regularization_c * static_cast<double>(n));

  LinearModel model{tags, {}, {}, std::move(space), config};
  model.weights.assign(tags.size(), {});
  model.bias.assign(tags.size(), 0.0);

  std::vector<std::size_t> order(n);
  for (std::size_t t = 0; t < tags.size(); ++t) {
    // w is kept as scale * v; the shrink step only touches the scale. The
    // bias is v[dim], an augmented always-on feature.
    std::vector<double> v(dim + 1, 0.0);
    double scale = 1.0;
    Rng rng(mix_seed(settings.seed, t));
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::size_t step = 0;
    std::vector<double> best(dim + 1, 0.0);
    double best_objective = std::numeric_limits<double>::infinity();
    std::vector<double> current(dim);
    for (std::size_t epoch = 0; epoch < settings.epochs; ++epoch) {
      if (settings.shuffle_each_epoch) deterministic_shuffle(order, rng);
      for (std::size_t i : order) {
        ++step;
        const double eta = 1.0 / (lambda * static_cast<double>(step));
        if (step > 1) scale *= 1.0 - 1.0 / static_cast<double>(step);
        const auto& [x, y_tag] = data[i];
        const double y = y_tag == t ? 1.0 : -1.0;
        double dot = v[dim];  // bias feature value 1
        for (auto [idx, val] : x.entries) {
          if (idx >= dim) {
            throw data_error("train: vector index " + std::to_string(idx) +
                             " outside feature space");
          }
          dot += v[idx] * val;
        }
        if (y * scale * dot < 1.0) {
          const double delta = eta * y / scale;
          for (auto [idx, val] : x.entries) v[idx] += delta * val;
          v[dim] += delta;
        }
      }
      for (std::size_t d = 0; d < dim; ++d) current[d] = scale * v[d];
      double objective = detail::binary_objective(current, scale * v[dim],
                                                  data, t, lambda);
      if (objective < best_objective) {
        best_objective = objective;
        for (std::size_t d = 0; d < dim; ++d) best[d] = current[d];
        best[dim] = scale * v[dim];
      }
      if (epoch_observer) epoch_observer(t, epoch, best_objective);
    }
    auto& w = model.weights[t];
    w.assign(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(dim));
    model.bias[t] = best[dim];
  }
  return model;
}

// Per-tag decision values w_t . x + b_t in tag-set order.
inline std::vector<double> decision_scores(const LinearModel& model,
                                           const SparseFeatureVector& vec) {
  std::vector<double> scores(model.tags.size());
  for (std::size_t t = 0; t < model.tags.size(); ++t) {
    scores[t] = detail::sparse_dot(model.weights[t], vec) + model.bias[t];
  }
  return scores;
}

// Argmax of the decision scores; exact ties go to the lowest tag index.
inline std::size_t predict(const LinearModel& model,
                           const SparseFeatureVector& vec) {
  auto scores = decision_scores(model, vec);
  std::size_t best = 0;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (scores[t] > scores[best]) best = t;
  }
  return best;
}

inline double accuracy(const LinearModel& model, const LabeledVectors& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& [x, tag] : data) {
    if (predict(model, x) == tag) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

namespace detail {

inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::string config_line(const FeatureConfig& config) {
  std::ostringstream out;
  out << "config " << config.name() << " binary=" << (config.binary_counts ? 1 : 0)
      << " top_k=" << config.pmi_top_k << " min_count=" << config.pmi_min_count;
  return out.str();
}

inline FeatureConfig parse_config_line(const std::string& line,
                                       std::size_t line_no) {
  std::istringstream in(line);
  std::string word, name;
  in >> word >> name;
  if (word != "config" || name.empty()) {
    throw data_error("model file line " + std::to_string(line_no) +
                     ": malformed config line");
  }
  FeatureConfig config = FeatureConfig::parse(name);
  std::string kv;
  while (in >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw data_error("model file line " + std::to_string(line_no) +
                       ": malformed config option '" + kv + "'");
    }
    std::string key = kv.substr(0, eq);
    unsigned long value = std::stoul(kv.substr(eq + 1));
    if (key == "binary") config.binary_counts = value != 0;
    else if (key == "top_k") config.pmi_top_k = static_cast<std::uint32_t>(value);
    else if (key == "min_count") config.pmi_min_count = static_cast<std::uint32_t>(value);
    else {
      throw data_error("model file line " + std::to_string(line_no) +
                       ": unknown config option '" + key + "'");
    }
  }
  return config;
}

}  // namespace detail

inline constexpr const char* kModelMagic = "gcr-dialect-model v1";

// Versioned UTF-8 text format: header (version, tag set, config, space
// size), the key table in index order, then per-tag weights and bias as
// decimal text with 17 significant digits. Round-trips bit-exactly.
inline void save_model(const LinearModel& model, std::ostream& out) {
  for (std::size_t t = 0; t < model.tags.size(); ++t) {
    if (!std::isfinite(model.bias[t])) {
      throw internal_error("save_model: non-finite bias");
    }
    for (double w : model.weights[t]) {
      if (!std::isfinite(w)) throw internal_error("save_model: non-finite weight");
    }
  }
  out << kModelMagic << '\n';
  out << "tags " << model.tags.size() << '\n';
  for (const auto& tag : model.tags.all()) {
    out << tag.id << '\t' << tag.display_name << '\n';
  }
  out << detail::config_line(model.config) << '\n';
  out << "features " << model.space.size() << '\n';
  for (const auto& key : model.space.keys()) out << key << '\n';
  for (std::size_t t = 0; t < model.tags.size(); ++t) {
    out << "weights " << model.tags.id(t) << '\n';
    for (std::size_t d = 0; d < model.weights[t].size(); ++d) {
      if (d > 0) out << ' ';
      out << detail::format_double(model.weights[t][d]);
    }
    out << '\n';
    out << "bias " << model.tags.id(t) << ' '
        << detail::format_double(model.bias[t]) << '\n';
  }
  out << "end\n";
}

inline void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write model file: " + path);
  save_model(model, out);
}

inline LinearModel load_model(std::istream& in, const std::string& origin) {
  std::size_t line_no = 0;
  std::string line;
  auto where = [&]() { return origin + " line " + std::to_string(line_no); };
  auto next_line = [&]() {
    if (!std::getline(in, line)) {
      throw data_error(origin + ": truncated model file after line " +
                       std::to_string(line_no));
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  next_line();
  if (line != kModelMagic) {
    throw data_error(where() + ": unsupported model version (expected '" +
                     kModelMagic + "')");
  }
  next_line();
  std::size_t num_tags = 0;
  {
    std::istringstream hdr(line);
    std::string word;
    hdr >> word >> num_tags;
    if (word != "tags" || num_tags < 2) {
      throw data_error(where() + ": malformed tag header");
    }
  }
  std::vector<DialectTag> tag_list;
  for (std::size_t t = 0; t < num_tags; ++t) {
    next_line();
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw data_error(where() + ": malformed tag line");
    }
    tag_list.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  next_line();
  FeatureConfig config = detail::parse_config_line(line, line_no);
  next_line();
  std::size_t num_features = 0;
  {
    std::istringstream hdr(line);
    std::string word;
    hdr >> word >> num_features;
    if (word != "features") {
      throw data_error(where() + ": malformed feature header");
    }
  }
  FeatureSpace space;
  for (std::size_t i = 0; i < num_features; ++i) {
    next_line();
    if (line.empty()) throw data_error(where() + ": empty feature key");
    if (!space.add_or_lookup(line) ||
        space.size() != i + 1) {
      throw data_error(where() + ": duplicate feature key '" + line + "'");
    }
  }
  space.freeze();

  LinearModel model{TagSet(std::move(tag_list)), {}, {}, std::move(space),
                    config};
  model.weights.assign(num_tags, {});
  model.bias.assign(num_tags, 0.0);
  for (std::size_t t = 0; t < num_tags; ++t) {
    next_line();
    {
      std::istringstream hdr(line);
      std::string word, id;
      hdr >> word >> id;
      if (word != "weights" || id != model.tags.id(t)) {
        throw data_error(where() + ": expected 'weights " + model.tags.id(t) +
                         "'");
      }
    }
    next_line();
    auto& w = model.weights[t];
    w.reserve(num_features);
    {
      std::istringstream values(line);
      double value;
      while (values >> value) w.push_back(value);
      if (w.size() != num_features) {
        throw data_error(where() + ": expected " +
                         std::to_string(num_features) + " weights, got " +
                         std::to_string(w.size()));
      }
    }
    for (double value : w) {
      if (!std::isfinite(value)) {
        throw data_error(where() + ": non-finite weight value");
      }
    }
    next_line();
    {
      std::istringstream hdr(line);
      std::string word, id;
      double value;
      hdr >> word >> id >> value;
      if (word != "bias" || id != model.tags.id(t) || hdr.fail()) {
        throw data_error(where() + ": malformed bias line");
      }
      if (!std::isfinite(value)) {
        throw data_error(where() + ": non-finite bias value");
      }
      model.bias[t] = value;
    }
  }
  next_line();
  if (line != "end") throw data_error(where() + ": missing end marker");
  return model;
}

inline LinearModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open model file: " + path);
  return load_model(in, path);
}

}  // namespace gcrid
