#include "kmpipe/yake.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "kmpipe/errors.hpp"

namespace kmpipe::yake {

Document Document::from_dataset(const corpus::IntervalDataset& dataset) {
  Document doc;
  for (const auto& member : dataset.members) {
    for (const auto& tweet : member.tweets) {
      if (!tweet.tokens.empty()) doc.tweets.push_back(tweet.tokens);
    }
  }
  return doc;
}

std::map<std::string, TermStats> collect_term_stats(const Document& doc,
                                                    int window) {
  if (window < 1) throw DomainError("neighbor window must be >= 1");
  if (doc.tweets.empty()) throw DomainError("document has no tweets");

  std::map<std::string, TermStats> stats;
  std::unordered_map<std::string, std::unordered_set<std::string>> left_sets;
  std::unordered_map<std::string, std::unordered_set<std::string>> right_sets;

  bool any_token = false;
  for (size_t j = 0; j < doc.tweets.size(); ++j) {
    const auto& tokens = doc.tweets[j];
    for (size_t t = 0; t < tokens.size(); ++t) {
      any_token = true;
      TermStats& s = stats[tokens[t]];
      s.occurrences += 1;
      if (s.positions.empty() || s.positions.back() != static_cast<int>(j)) {
        s.positions.push_back(static_cast<int>(j));
      }
      for (int o = 1; o <= window && t >= static_cast<size_t>(o); ++o) {
        s.left_slots += 1;
        left_sets[tokens[t]].insert(tokens[t - o]);
      }
      for (int o = 1; o <= window && t + o < tokens.size(); ++o) {
        s.right_slots += 1;
        right_sets[tokens[t]].insert(tokens[t + o]);
      }
    }
  }
  if (!any_token) throw DomainError("document has no tokens");

  for (auto& [term, s] : stats) {
    s.tweet_spread = static_cast<long>(s.positions.size());
    auto lit = left_sets.find(term);
    if (lit != left_sets.end())
      s.distinct_left = static_cast<long>(lit->second.size());
    auto rit = right_sets.find(term);
    if (rit != right_sets.end())
      s.distinct_right = static_cast<long>(rit->second.size());
  }
  return stats;
}

DocAggregates document_aggregates(
    const std::map<std::string, TermStats>& stats) {
  DocAggregates agg;
  if (stats.empty()) return agg;
  double sum = 0.0;
  for (const auto& [term, s] : stats) {
    sum += static_cast<double>(s.occurrences);
    agg.max_occurrences = std::max(agg.max_occurrences, s.occurrences);
  }
  const double n = static_cast<double>(stats.size());
  agg.mean_occurrences = sum / n;
  double var = 0.0;
  for (const auto& [term, s] : stats) {
    double d = static_cast<double>(s.occurrences) - agg.mean_occurrences;
    var += d * d;
  }
  agg.stddev_occurrences = std::sqrt(var / n);
  return agg;
}

TermScore score_term(const TermStats& stats, const DocAggregates& agg,
                     DispersionMode mode) {
  TermScore score;
  // Integer median: lower middle element of the ascending position list.
  const auto& p = stats.positions;
  int median = p[(p.size() - 1) / 2];
  score.position = std::log(std::log(std::exp(1.0) + median));

  score.frequency = static_cast<double>(stats.occurrences) /
                    (agg.mean_occurrences + agg.stddev_occurrences);

  double left_ratio = stats.left_slots > 0
                          ? static_cast<double>(stats.distinct_left) /
                                static_cast<double>(stats.left_slots)
                          : 0.0;
  double right_ratio = stats.right_slots > 0
                           ? static_cast<double>(stats.distinct_right) /
                                 static_cast<double>(stats.right_slots)
                           : 0.0;
  score.relevancy = 1.0 + (left_ratio + right_ratio) *
                              static_cast<double>(stats.occurrences) /
                              static_cast<double>(agg.max_occurrences);

  score.dispersion = mode == DispersionMode::Reciprocal
                         ? 1.0 / static_cast<double>(stats.tweet_spread)
                         : static_cast<double>(stats.tweet_spread);

  score.kappa = score.position * score.relevancy /
                (score.frequency / score.relevancy +
                 score.dispersion / score.relevancy);
  return score;
}

std::vector<ScoredTerm> score_document(const Document& doc, int window,
                                       DispersionMode mode) {
  auto stats = collect_term_stats(doc, window);
  auto agg = document_aggregates(stats);
  std::vector<ScoredTerm> scored;
  scored.reserve(stats.size());
  for (const auto& [term, s] : stats) {
    scored.push_back({term, score_term(s, agg, mode)});
  }
  std::sort(scored.begin(), scored.end(),
            [](const ScoredTerm& a, const ScoredTerm& b) {
              if (a.score.kappa != b.score.kappa)
                return a.score.kappa < b.score.kappa;
              return a.term < b.term;
            });
  return scored;
}

namespace {

struct Match {
  size_t pos_a = 0;
  size_t pos_b = 0;
  size_t length = 0;
};

// Longest common substring preferring the lowest start in a, then in b.
Match longest_match(std::string_view a, std::string_view b) {
  Match best;
  if (a.empty() || b.empty()) return best;
  // len[i][j] = run length of the common substring starting at (i, j).
  std::vector<std::vector<size_t>> len(a.size() + 1,
                                       std::vector<size_t>(b.size() + 1, 0));
  for (size_t i = a.size(); i-- > 0;) {
    for (size_t j = b.size(); j-- > 0;) {
      if (a[i] == b[j]) len[i][j] = len[i + 1][j + 1] + 1;
    }
  }
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      if (len[i][j] > best.length) {
        best = {i, j, len[i][j]};
      }
    }
  }
  return best;
}

size_t matched_total(std::string_view a, std::string_view b) {
  Match m = longest_match(a, b);
  if (m.length == 0) return 0;
  size_t total = m.length;
  total += matched_total(a.substr(0, m.pos_a), b.substr(0, m.pos_b));
  total += matched_total(a.substr(m.pos_a + m.length),
                         b.substr(m.pos_b + m.length));
  return total;
}

}  // namespace

double ratcliff_similarity(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) {
    throw DomainError("ratcliff similarity requires non-empty terms");
  }
  size_t matched = matched_total(a, b);
  return 2.0 * static_cast<double>(matched) /
         static_cast<double>(a.size() + b.size());
}

std::vector<ScoredTerm> deduplicate_and_rank(std::vector<ScoredTerm> scored,
                                             double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw DomainError("dedup threshold must lie in (0,1]");
  }
  std::sort(scored.begin(), scored.end(),
            [](const ScoredTerm& a, const ScoredTerm& b) {
              if (a.score.kappa != b.score.kappa)
                return a.score.kappa < b.score.kappa;
              return a.term < b.term;
            });
  std::vector<ScoredTerm> kept;
  for (auto& candidate : scored) {
    bool similar = false;
    for (const auto& k : kept) {
      if (ratcliff_similarity(candidate.term, k.term) >= theta) {
        similar = true;
        break;
      }
    }
    if (!similar) kept.push_back(std::move(candidate));
  }
  return kept;
}

CrossUniqueResult cross_unique_keywords(const std::vector<ScoredTerm>& a,
                                        const std::vector<ScoredTerm>& b,
                                        size_t k, bool allow_short) {
  std::unordered_set<std::string> in_a, in_b;
  for (const auto& t : a) in_a.insert(t.term);
  for (const auto& t : b) in_b.insert(t.term);

  CrossUniqueResult result;
  result.requested = k;
  for (const auto& t : a) {
    if (!in_b.count(t.term) && result.first.size() < k)
      result.first.push_back(t);
  }
  for (const auto& t : b) {
    if (!in_a.count(t.term) && result.second.size() < k)
      result.second.push_back(t);
  }
  if (!allow_short && (result.first.size() < k || result.second.size() < k)) {
    throw DomainError(
        "cross-unique keyword shortage: achieved " +
        std::to_string(result.first.size()) + " and " +
        std::to_string(result.second.size()) + " of requested " +
        std::to_string(k));
  }
  return result;
}

}  // namespace kmpipe::yake
