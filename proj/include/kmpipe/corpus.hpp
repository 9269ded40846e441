#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace kmpipe::corpus {

enum class Direction { Increase, Decrease };

inline const char* direction_name(Direction d) {
  return d == Direction::Increase ? "Increase" : "Decrease";
}

struct PriceBar {
  int64_t timestamp = 0;  // epoch seconds, UTC
  double close = 0.0;     // > 0
};

// Interval boundaries are anchor + k * duration; intervals are half-open
// [start, start + duration).
struct IntervalSpec {
  int64_t duration_s = 3600;
  int64_t anchor_s = 0;

  void validate() const;
  int64_t align_down(int64_t t) const;
  std::string name() const;  // "Hour", "4Hour", "Daily"
};

struct LabeledInterval {
  int64_t start = 0;
  int64_t end = 0;
  double log_return = 0.0;
  Direction label = Direction::Decrease;
};

struct RawTweet {
  std::string id;
  int64_t timestamp = 0;
  std::string text;
  int64_t retweet_count = 0;
  bool is_retweet = false;
  bool is_reply = false;
  bool is_quote = false;
  bool is_promoted = false;
  bool author_is_bot = false;
  bool author_suspended = false;
};

// Tokens are non-empty, lowercase, pure ASCII letters; stopwords and the
// query terms themselves never appear.
struct CleanTweet {
  std::string id;
  int64_t timestamp = 0;
  std::vector<std::string> tokens;
  int64_t retweet_count = 0;
};

// One bucket interval together with the tweets posted during it and the
// log-return of the interval that follows (the bucket's signal).
struct IntervalMember {
  LabeledInterval interval;
  double next_log_return = 0.0;
  std::vector<CleanTweet> tweets;
};

struct IntervalDataset {
  std::string dataset_id;  // HourIn, 4HourDe, DailyIn, ...
  Direction direction = Direction::Increase;
  IntervalSpec spec;
  std::vector<IntervalMember> members;  // chronological

  size_t tweet_count() const;
};

std::string dataset_id_for(const IntervalSpec& spec, Direction dir);

using TermSet = std::unordered_set<std::string>;

// CSV with header `timestamp,close`. Bars must be strictly increasing in
// time with positive closes; violations name the offending line.
std::vector<PriceBar> parse_price_bars(std::istream& in);

// log_return of interval t = ln(close at end of t / close at end of t-1),
// close taken from the last bar at or before each boundary. Zero return
// labels Decrease.
std::vector<LabeledInterval> compute_interval_labels(
    const std::vector<PriceBar>& bars, const IntervalSpec& spec);

// JSONL, one tweet object per line. Missing booleans default to false,
// missing retweet_count to 0; unknown fields are ignored.
std::vector<RawTweet> parse_tweets(std::istream& in);

// One lowercase term per line, '#' starts a comment.
TermSet load_term_file(std::istream& in);
TermSet load_term_files(const std::vector<std::string>& paths);

inline TermSet default_query_terms() { return {"bitcoin", "btc"}; }

// Returns nothing when the tweet is excluded outright (retweet, reply,
// quote, promoted, bot, suspended). Otherwise applies, in order:
// lowercase, URL and e-mail removal, sigil stripping, digit-bearing and
// non-ASCII token removal, boundary punctuation stripping, stopword and
// query-term removal. No stemming or lemmatization.
std::optional<CleanTweet> sanitize(const RawTweet& raw, const TermSet& stopwords,
                                   const TermSet& query_terms);

struct BucketResult {
  IntervalDataset increase;
  IntervalDataset decrease;
  size_t out_of_range = 0;          // tweets outside the covered span
  size_t dropped_final_interval = 0;  // tweets whose interval has no successor
};

// A tweet posted during interval t joins the dataset matching the label of
// interval t+1, attached to interval t. Tweets during the final interval
// are dropped (no successor to label them).
BucketResult bucket_tweets(const std::vector<CleanTweet>& tweets,
                           const std::vector<LabeledInterval>& intervals,
                           const IntervalSpec& spec);

// Keeps the ceil(q*N) members with the largest |next_log_return|, ties
// resolved toward the earlier start. Output stays chronological.
IntervalDataset select_extreme_intervals(const IntervalDataset& dataset,
                                         double q);

}  // namespace kmpipe::corpus
