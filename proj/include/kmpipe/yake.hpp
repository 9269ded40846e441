#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kmpipe/corpus.hpp"

namespace kmpipe::yake {

// A document is the chronological tweet sequence of one dataset; every
// statistic below is relative to a single document.
struct Document {
  std::vector<std::vector<std::string>> tweets;

  static Document from_dataset(const corpus::IntervalDataset& dataset);
  size_t tweet_count() const { return tweets.size(); }
};

struct TermStats {
  std::vector<int> positions;  // ascending tweet indices containing the term
  long occurrences = 0;        // omega
  long tweet_spread = 0;       // Phi, = positions.size()
  long distinct_left = 0;      // Psi, left side
  long distinct_right = 0;     // Psi, right side
  long left_slots = 0;         // sum of phi(l_o)
  long right_slots = 0;        // sum of phi(r_o)
};

struct DocAggregates {
  double mean_occurrences = 0.0;
  double stddev_occurrences = 0.0;  // population, over the distinct-term multiset
  long max_occurrences = 0;
};

struct TermScore {
  double position = 0.0;   // G_cp
  double frequency = 0.0;  // G_cf
  double relevancy = 0.0;  // G_cr
  double dispersion = 0.0; // G_cd
  double kappa = 0.0;      // lower is more significant
};

enum class DispersionMode { Reciprocal, Direct };

// Neighbor windows never cross tweet boundaries. Keys iterate in term
// order, which keeps everything downstream deterministic.
std::map<std::string, TermStats> collect_term_stats(const Document& doc,
                                                    int window);

DocAggregates document_aggregates(const std::map<std::string, TermStats>& stats);

// position: ln(ln(e + median tweet index)), integer median (lower middle).
// frequency: occurrences / (mean + stddev).
// relevancy: 1 + (distinct/slots per side, empty side contributing 0)
//            * occurrences / max occurrences.
// dispersion: 1 / tweet_spread (or tweet_spread when mode is Direct).
// kappa: position * relevancy / (frequency/relevancy + dispersion/relevancy).
TermScore score_term(const TermStats& stats, const DocAggregates& agg,
                     DispersionMode mode = DispersionMode::Reciprocal);

struct ScoredTerm {
  std::string term;
  TermScore score;
};

// All terms of the document scored, ascending by kappa (ties by term).
std::vector<ScoredTerm> score_document(const Document& doc, int window,
                                       DispersionMode mode = DispersionMode::Reciprocal);

// Gestalt pattern matching: twice the total matched length over the
// combined length. Symmetric; 1 for equal strings.
double ratcliff_similarity(std::string_view a, std::string_view b);

// Walks candidates best-first (ascending kappa); a term is kept only if
// its similarity to every kept term stays below theta.
std::vector<ScoredTerm> deduplicate_and_rank(std::vector<ScoredTerm> scored,
                                             double theta);

struct CrossUniqueResult {
  std::vector<ScoredTerm> first;
  std::vector<ScoredTerm> second;
  size_t requested = 0;
};

// Terms present in both ranked lists are dropped from both, then each list
// is truncated to its top k. Shortage throws unless allow_short.
CrossUniqueResult cross_unique_keywords(const std::vector<ScoredTerm>& a,
                                        const std::vector<ScoredTerm>& b,
                                        size_t k, bool allow_short = false);

}  // namespace kmpipe::yake
