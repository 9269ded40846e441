#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kmpipe/corpus.hpp"

namespace kmpipe::glove {

class Vocabulary {
 public:
  Vocabulary() = default;

  // Terms indexed in first-appearance order; terms below min_count dropped.
  static Vocabulary build(const std::vector<corpus::CleanTweet>& tweets,
                          size_t min_count = 1);

  int add(const std::string& term);  // returns existing index if present
  int lookup(const std::string& term) const;  // -1 when absent
  int size() const { return static_cast<int>(terms_.size()); }
  const std::string& term(int idx) const { return terms_[idx]; }
  const std::vector<std::string>& terms() const { return terms_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> terms_;
};

struct CoocEntry {
  int row = 0;
  int col = 0;
  double count = 0.0;
};

// Symmetric sparse co-occurrence counts; both (m,n) and (n,m) are stored.
struct CooccurrenceMatrix {
  int vocab_size = 0;
  int window = 0;
  std::vector<CoocEntry> entries;  // sorted by (row, col)
  std::vector<double> row_sums;

  double at(int m, int n) const;
  size_t nonzeros() const { return entries.size(); }
};

// Counts context words within `window` positions inside a single tweet;
// windows never cross tweet boundaries. With distance_decay a pair at
// distance k contributes 1/k, otherwise 1.
CooccurrenceMatrix build_cooccurrence(
    const std::vector<std::vector<std::string>>& tweets,
    const Vocabulary& vocab, int window, bool distance_decay = true);

struct GloveConfig {
  int dim = 200;
  int window = 10;
  double alpha_max = 100.0;
  double beta = 0.75;
  double learning_rate = 0.05;
  int iterations = 50;
  bool distance_decay = true;
  uint64_t seed = 0;

  void validate() const;
};

// Co-occurrence weighting: (alpha/alpha_max)^beta below alpha_max, else 1.
double weight_f(double alpha, double alpha_max, double beta);

struct EmbeddingModel {
  int dim = 0;
  int vocab_size = 0;
  std::vector<double> word_vec;     // vocab_size x dim
  std::vector<double> context_vec;  // vocab_size x dim
  std::vector<double> word_bias;
  std::vector<double> context_bias;

  const double* word(int idx) const { return word_vec.data() + size_t(idx) * dim; }
  const double* context(int idx) const {
    return context_vec.data() + size_t(idx) * dim;
  }
  // Final representation of a term is word + context vector.
  std::vector<double> final_vector(int idx) const;

  size_t parameter_count() const {
    return 2 * size_t(vocab_size) * dim + 2 * size_t(vocab_size);
  }
  // Flat view ordered [word_vec | context_vec | word_bias | context_bias].
  double parameter(size_t flat_index) const;
  void set_parameter(size_t flat_index, double value);
};

struct TrainTrace {
  // epoch_cost[0] is the cost of the seeded initialization; one entry is
  // appended after every pass over the nonzero entries.
  std::vector<double> epoch_cost;
};

// Minimizes sum f(W_mn) (v_m . c_n + b_m + b_n - ln W_mn)^2 by shuffled
// stochastic passes over the nonzero entries with per-parameter adaptive
// steps. Deterministic for a fixed seed. Throws DivergenceError if the
// cost turns non-finite.
EmbeddingModel train_embeddings(const CooccurrenceMatrix& matrix,
                                const GloveConfig& config,
                                TrainTrace* trace = nullptr);

double cost(const EmbeddingModel& model, const CooccurrenceMatrix& matrix,
            double alpha_max, double beta);

// Analytic gradient of the cost in the flat parameter layout.
std::vector<double> full_gradient(const EmbeddingModel& model,
                                  const CooccurrenceMatrix& matrix,
                                  double alpha_max, double beta);

// Final per-term vectors (word + context), the external representation.
struct FinalEmbedding {
  int dim = 0;
  Vocabulary vocab;
  std::vector<double> vectors;  // vocab x dim

  const double* vector_of(int idx) const {
    return vectors.data() + size_t(idx) * dim;
  }
};

FinalEmbedding finalize(const EmbeddingModel& model, const Vocabulary& vocab);

// Text format: one line per term, `term v1 v2 ... vd`.
void save_embedding(const FinalEmbedding& emb, std::ostream& out);
FinalEmbedding load_embedding(std::istream& in);

// Mean of final vectors over all in-vocabulary token occurrences.
std::vector<double> document_vector(const std::vector<corpus::CleanTweet>& tweets,
                                    const FinalEmbedding& emb);

double cosine_similarity(const std::vector<double>& a,
                         const std::vector<double>& b);

inline double baseline_weight(double similarity) { return 1.0 - similarity; }

}  // namespace kmpipe::glove
