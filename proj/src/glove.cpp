#include "kmpipe/glove.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "kmpipe/errors.hpp"
#include "kmpipe/rng.hpp"

namespace kmpipe::glove {

Vocabulary Vocabulary::build(const std::vector<corpus::CleanTweet>& tweets,
                             size_t min_count) {
  Vocabulary vocab;
  if (min_count <= 1) {
    for (const auto& tw : tweets)
      for (const auto& tok : tw.tokens) vocab.add(tok);
    return vocab;
  }
  std::unordered_map<std::string, size_t> counts;
  for (const auto& tw : tweets)
    for (const auto& tok : tw.tokens) ++counts[tok];
  for (const auto& tw : tweets) {
    for (const auto& tok : tw.tokens) {
      if (counts[tok] >= min_count) vocab.add(tok);
    }
  }
  return vocab;
}

int Vocabulary::add(const std::string& term) {
  auto [it, inserted] = index_.emplace(term, static_cast<int>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

int Vocabulary::lookup(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

double CooccurrenceMatrix::at(int m, int n) const {
  CoocEntry probe{m, n, 0.0};
  auto it = std::lower_bound(entries.begin(), entries.end(), probe,
                             [](const CoocEntry& a, const CoocEntry& b) {
                               return a.row != b.row ? a.row < b.row
                                                     : a.col < b.col;
                             });
  if (it != entries.end() && it->row == m && it->col == n) return it->count;
  return 0.0;
}

CooccurrenceMatrix build_cooccurrence(
    const std::vector<std::vector<std::string>>& tweets,
    const Vocabulary& vocab, int window, bool distance_decay) {
  if (window < 1) throw ConfigError("co-occurrence window must be >= 1");
  std::unordered_map<uint64_t, double> acc;
  const uint64_t stride = static_cast<uint64_t>(vocab.size());
  for (const auto& tokens : tweets) {
    const size_t len = tokens.size();
    for (size_t i = 0; i < len; ++i) {
      int a = vocab.lookup(tokens[i]);
      if (a < 0) throw DomainError("token out of vocabulary: " + tokens[i]);
      for (size_t k = 1; k <= static_cast<size_t>(window) && i + k < len; ++k) {
        int b = vocab.lookup(tokens[i + k]);
        if (b < 0)
          throw DomainError("token out of vocabulary: " + tokens[i + k]);
        double w = distance_decay ? 1.0 / static_cast<double>(k) : 1.0;
        acc[static_cast<uint64_t>(a) * stride + b] += w;
        acc[static_cast<uint64_t>(b) * stride + a] += w;
      }
    }
  }

  CooccurrenceMatrix m;
  m.vocab_size = vocab.size();
  m.window = window;
  m.entries.reserve(acc.size());
  for (const auto& [key, count] : acc) {
    m.entries.push_back({static_cast<int>(key / stride),
                         static_cast<int>(key % stride), count});
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const CoocEntry& a, const CoocEntry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  m.row_sums.assign(m.vocab_size, 0.0);
  for (const auto& e : m.entries) m.row_sums[e.row] += e.count;
  return m;
}

void GloveConfig::validate() const {
  if (dim < 1) throw ConfigError("embedding dimension must be >= 1");
  if (window < 1) throw ConfigError("window size must be >= 1");
  if (!(alpha_max > 0)) throw ConfigError("alpha_max must be positive");
  if (!(beta > 0 && beta <= 1)) throw ConfigError("beta must lie in (0,1]");
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
}

double weight_f(double alpha, double alpha_max, double beta) {
  if (alpha < 0) throw DomainError("co-occurrence count must be >= 0");
  if (alpha < alpha_max) return std::pow(alpha / alpha_max, beta);
  return 1.0;
}

std::vector<double> EmbeddingModel::final_vector(int idx) const {
  std::vector<double> v(dim);
  const double* w = word(idx);
  const double* c = context(idx);
  for (int k = 0; k < dim; ++k) v[k] = w[k] + c[k];
  return v;
}

double EmbeddingModel::parameter(size_t i) const {
  const size_t vec = size_t(vocab_size) * dim;
  if (i < vec) return word_vec[i];
  i -= vec;
  if (i < vec) return context_vec[i];
  i -= vec;
  if (i < size_t(vocab_size)) return word_bias[i];
  return context_bias[i - vocab_size];
}

void EmbeddingModel::set_parameter(size_t i, double value) {
  const size_t vec = size_t(vocab_size) * dim;
  if (i < vec) {
    word_vec[i] = value;
    return;
  }
  i -= vec;
  if (i < vec) {
    context_vec[i] = value;
    return;
  }
  i -= vec;
  if (i < size_t(vocab_size)) {
    word_bias[i] = value;
    return;
  }
  context_bias[i - vocab_size] = value;
}

namespace {

EmbeddingModel seeded_init(int vocab_size, const GloveConfig& cfg) {
  EmbeddingModel m;
  m.dim = cfg.dim;
  m.vocab_size = vocab_size;
  const size_t vec = size_t(vocab_size) * cfg.dim;
  m.word_vec.resize(vec);
  m.context_vec.resize(vec);
  m.word_bias.resize(vocab_size);
  m.context_bias.resize(vocab_size);
  Rng rng(derive_seed(cfg.seed, 0x91a7));
  auto init = [&](std::vector<double>& v) {
    for (auto& x : v) x = (rng.uniform() - 0.5) / cfg.dim;
  };
  init(m.word_vec);
  init(m.context_vec);
  init(m.word_bias);
  init(m.context_bias);
  return m;
}

}  // namespace

double cost(const EmbeddingModel& model, const CooccurrenceMatrix& matrix,
            double alpha_max, double beta) {
  double total = 0.0;
  const int d = model.dim;
  for (const auto& e : matrix.entries) {
    if (e.count <= 0) continue;
    const double* w = model.word(e.row);
    const double* c = model.context(e.col);
    double dot = 0.0;
    for (int k = 0; k < d; ++k) dot += w[k] * c[k];
    double diff = dot + model.word_bias[e.row] + model.context_bias[e.col] -
                  std::log(e.count);
    total += weight_f(e.count, alpha_max, beta) * diff * diff;
  }
  return total;
}

std::vector<double> full_gradient(const EmbeddingModel& model,
                                  const CooccurrenceMatrix& matrix,
                                  double alpha_max, double beta) {
  const int d = model.dim;
  const size_t vec = size_t(model.vocab_size) * d;
  std::vector<double> grad(model.parameter_count(), 0.0);
  double* g_word = grad.data();
  double* g_ctx = grad.data() + vec;
  double* g_wb = grad.data() + 2 * vec;
  double* g_cb = grad.data() + 2 * vec + model.vocab_size;
  for (const auto& e : matrix.entries) {
    if (e.count <= 0) continue;
    const double* w = model.word(e.row);
    const double* c = model.context(e.col);
    double dot = 0.0;
    for (int k = 0; k < d; ++k) dot += w[k] * c[k];
    double diff = dot + model.word_bias[e.row] + model.context_bias[e.col] -
                  std::log(e.count);
    double fdiff = 2.0 * weight_f(e.count, alpha_max, beta) * diff;
    for (int k = 0; k < d; ++k) {
      g_word[size_t(e.row) * d + k] += fdiff * c[k];
      g_ctx[size_t(e.col) * d + k] += fdiff * w[k];
    }
    g_wb[e.row] += fdiff;
    g_cb[e.col] += fdiff;
  }
  return grad;
}

EmbeddingModel train_embeddings(const CooccurrenceMatrix& matrix,
                                const GloveConfig& cfg, TrainTrace* trace) {
  cfg.validate();
  if (matrix.nonzeros() == 0) {
    throw DomainError("co-occurrence matrix has no nonzero entries");
  }
  EmbeddingModel model = seeded_init(matrix.vocab_size, cfg);
  if (trace) {
    trace->epoch_cost.clear();
    trace->epoch_cost.push_back(cost(model, matrix, cfg.alpha_max, cfg.beta));
  }
  if (cfg.iterations == 0) return model;

  const int d = cfg.dim;
  const size_t vec = size_t(matrix.vocab_size) * d;
  // AdaGrad accumulators start at 1 so early steps equal the base rate.
  std::vector<double> acc_word(vec, 1.0), acc_ctx(vec, 1.0);
  std::vector<double> acc_wb(matrix.vocab_size, 1.0),
      acc_cb(matrix.vocab_size, 1.0);
  std::vector<double> gw(d), gc(d);

  std::vector<uint32_t> order(matrix.nonzeros());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<uint32_t>(i);
  Rng shuffle_rng(derive_seed(cfg.seed, 0x57a9));
  for (int epoch = 1; epoch <= cfg.iterations; ++epoch) {
    shuffle_rng.shuffle(order);
    for (uint32_t idx : order) {
      const CoocEntry& e = matrix.entries[idx];
      if (e.count <= 0) continue;
      double* w = model.word_vec.data() + size_t(e.row) * d;
      double* c = model.context_vec.data() + size_t(e.col) * d;
      double dot = 0.0;
      for (int k = 0; k < d; ++k) dot += w[k] * c[k];
      double diff = dot + model.word_bias[e.row] + model.context_bias[e.col] -
                    std::log(e.count);
      if (!std::isfinite(diff)) {
        throw DivergenceError("non-finite residual during embedding training",
                              epoch);
      }
      double fdiff = 2.0 * weight_f(e.count, cfg.alpha_max, cfg.beta) * diff;
      for (int k = 0; k < d; ++k) {
        gw[k] = fdiff * c[k];
        gc[k] = fdiff * w[k];
      }
      double* aw = acc_word.data() + size_t(e.row) * d;
      double* ac = acc_ctx.data() + size_t(e.col) * d;
      for (int k = 0; k < d; ++k) {
        w[k] -= cfg.learning_rate * gw[k] / std::sqrt(aw[k]);
        c[k] -= cfg.learning_rate * gc[k] / std::sqrt(ac[k]);
        aw[k] += gw[k] * gw[k];
        ac[k] += gc[k] * gc[k];
      }
      model.word_bias[e.row] -=
          cfg.learning_rate * fdiff / std::sqrt(acc_wb[e.row]);
      model.context_bias[e.col] -=
          cfg.learning_rate * fdiff / std::sqrt(acc_cb[e.col]);
      acc_wb[e.row] += fdiff * fdiff;
      acc_cb[e.col] += fdiff * fdiff;
    }
    double epoch_cost = cost(model, matrix, cfg.alpha_max, cfg.beta);
    if (!std::isfinite(epoch_cost)) {
      throw DivergenceError("embedding cost diverged", epoch);
    }
    if (trace) trace->epoch_cost.push_back(epoch_cost);
  }
  return model;
}

FinalEmbedding finalize(const EmbeddingModel& model, const Vocabulary& vocab) {
  FinalEmbedding emb;
  emb.dim = model.dim;
  emb.vocab = vocab;
  emb.vectors.resize(size_t(model.vocab_size) * model.dim);
  for (int i = 0; i < model.vocab_size; ++i) {
    const double* w = model.word(i);
    const double* c = model.context(i);
    for (int k = 0; k < model.dim; ++k) {
      emb.vectors[size_t(i) * model.dim + k] = w[k] + c[k];
    }
  }
  return emb;
}

void save_embedding(const FinalEmbedding& emb, std::ostream& out) {
  char buf[32];
  for (int i = 0; i < emb.vocab.size(); ++i) {
    out << emb.vocab.term(i);
    const double* v = emb.vector_of(i);
    for (int k = 0; k < emb.dim; ++k) {
      std::snprintf(buf, sizeof(buf), " %.17g", v[k]);
      out << buf;
    }
    out << '\n';
  }
}

FinalEmbedding load_embedding(std::istream& in) {
  FinalEmbedding emb;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string term;
    if (!(ss >> term)) {
      throw ParseError("embedding file line " + std::to_string(line_no) +
                       ": missing term");
    }
    std::vector<double> vals;
    double x;
    while (ss >> x) vals.push_back(x);
    if (vals.empty()) {
      throw ParseError("embedding file line " + std::to_string(line_no) +
                       ": no vector components");
    }
    if (emb.dim == 0) emb.dim = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != emb.dim) {
      throw ParseError("embedding file line " + std::to_string(line_no) +
                       ": inconsistent dimension");
    }
    if (emb.vocab.lookup(term) >= 0) {
      throw ParseError("embedding file line " + std::to_string(line_no) +
                       ": duplicate term " + term);
    }
    emb.vocab.add(term);
    emb.vectors.insert(emb.vectors.end(), vals.begin(), vals.end());
  }
  return emb;
}

std::vector<double> document_vector(const std::vector<corpus::CleanTweet>& tweets,
                                    const FinalEmbedding& emb) {
  std::vector<double> sum(emb.dim, 0.0);
  size_t occurrences = 0;
  for (const auto& tw : tweets) {
    for (const auto& tok : tw.tokens) {
      int idx = emb.vocab.lookup(tok);
      if (idx < 0) continue;
      const double* v = emb.vector_of(idx);
      for (int k = 0; k < emb.dim; ++k) sum[k] += v[k];
      ++occurrences;
    }
  }
  if (occurrences == 0) {
    throw DomainError("document has no in-vocabulary tokens");
  }
  for (auto& x : sum) x /= static_cast<double>(occurrences);
  return sum;
}

double cosine_similarity(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw DomainError("cosine similarity requires equal dimensions");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw DomainError("cosine similarity undefined for zero-norm vectors");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace kmpipe::glove
