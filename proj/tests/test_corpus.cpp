#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kmpipe/corpus.hpp"
#include "kmpipe/errors.hpp"
#include "kmpipe/rng.hpp"
#include "kmpipe/timeutil.hpp"

using namespace kmpipe;
using namespace kmpipe::corpus;

namespace {

RawTweet raw(const std::string& text, int64_t ts = 0) {
  RawTweet t;
  t.id = "t";
  t.timestamp = ts;
  t.text = text;
  return t;
}

const TermSet kStop = {"to", "the", "a", "of", "and", "in"};
const TermSet kQuery = default_query_terms();

}  // namespace

TEST_CASE("iso8601 round trip") {
  CHECK(parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601_utc("2017-09-01T00:00:00Z") == 1504224000);
  CHECK(format_iso8601_utc(1504224000) == "2017-09-01T00:00:00Z");
  CHECK(parse_iso8601_utc("2020-02-29T12:30:45Z") ==
        parse_iso8601_utc("2020-02-29T12:30:44Z") + 1);
  CHECK_THROWS_AS(parse_iso8601_utc("2020-13-01T00:00:00Z"), ParseError);
  CHECK_THROWS_AS(parse_iso8601_utc("not a time"), ParseError);
  CHECK_THROWS_AS(parse_iso8601_utc("2020-01-01T00:00:00"), ParseError);
}

TEST_CASE("parse_price_bars echoes fields") {
  std::istringstream in(
      "timestamp,close\n"
      "2017-09-01T00:00:00Z,4789.25\n"
      "2017-09-01T01:00:00Z,4800.00\n");
  auto bars = parse_price_bars(in);
  REQUIRE(bars.size() == 2);
  CHECK(bars[0].timestamp == parse_iso8601_utc("2017-09-01T00:00:00Z"));
  CHECK(bars[0].close == doctest::Approx(4789.25));
}

TEST_CASE("parse_price_bars rejects non-positive close") {
  std::istringstream in(
      "timestamp,close\n"
      "2017-09-01T00:00:00Z,-3.0\n");
  CHECK_THROWS_AS(parse_price_bars(in), DomainError);
}

TEST_CASE("parse_price_bars rejects equal timestamps as ordering error") {
  std::istringstream in(
      "timestamp,close\n"
      "2017-09-01T00:00:00Z,1.0\n"
      "2017-09-01T00:00:00Z,2.0\n");
  CHECK_THROWS_AS(parse_price_bars(in), DomainError);
}

TEST_CASE("parse_price_bars names the malformed line") {
  std::istringstream in(
      "timestamp,close\n"
      "2017-09-01T00:00:00Z,1.0\n"
      "garbage\n");
  try {
    parse_price_bars(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("compute_interval_labels closed-form returns") {
  IntervalSpec spec;  // hourly, epoch anchor
  std::vector<PriceBar> bars = {
      {0, 100.0}, {3600, 110.0}, {7200, 110.0}, {10800, 55.0}};
  auto intervals = compute_interval_labels(bars, spec);
  REQUIRE(intervals.size() == 3);
  CHECK(intervals[0].log_return == doctest::Approx(std::log(1.1)));
  CHECK(intervals[0].label == Direction::Increase);
  // interval [3600,7200): close 110 vs close 110 at 3600 -> 0, tie rule
  CHECK(intervals[1].log_return == doctest::Approx(0.0));
  CHECK(intervals[1].label == Direction::Decrease);
  // interval [7200,10800): 55 vs 110 -> -ln 2
  CHECK(intervals[2].log_return == doctest::Approx(-std::log(2.0)));
  CHECK(intervals[2].label == Direction::Decrease);
}

TEST_CASE("compute_interval_labels increase case") {
  IntervalSpec spec;
  std::vector<PriceBar> bars = {{0, 100.0}, {3600, 110.0}, {7200, 121.0}};
  auto intervals = compute_interval_labels(bars, spec);
  REQUIRE(intervals.size() >= 1);
  CHECK(intervals[0].log_return == doctest::Approx(std::log(1.1)).epsilon(1e-9));
  CHECK(intervals[0].label == Direction::Increase);
}

TEST_CASE("compute_interval_labels needs two covered intervals") {
  IntervalSpec spec;
  std::vector<PriceBar> bars = {{0, 100.0}, {3600, 101.0}};
  CHECK_THROWS_AS(compute_interval_labels(bars, spec), DomainError);
}

TEST_CASE("sign correctness invariant") {
  IntervalSpec spec;
  Rng rng(7);
  std::vector<PriceBar> bars;
  double price = 1000.0;
  for (int i = 0; i <= 50; ++i) {
    bars.push_back({int64_t(i) * 3600, price});
    price *= std::exp((rng.uniform() - 0.5) * 0.1);
  }
  for (const auto& iv : compute_interval_labels(bars, spec)) {
    CHECK((iv.label == Direction::Increase) == (iv.log_return > 0.0));
  }
}

TEST_CASE("parse_tweets defaults and order") {
  std::istringstream in(
      R"({"id":"1","timestamp":"2018-01-01T00:00:00Z","text":"hi","retweet_count":3})"
      "\n"
      R"({"id":"2","timestamp":"2018-01-01T00:00:01Z","text":"yo","extra":1})"
      "\n");
  auto tweets = parse_tweets(in);
  REQUIRE(tweets.size() == 2);
  CHECK(tweets[0].id == "1");
  CHECK(tweets[0].retweet_count == 3);
  CHECK_FALSE(tweets[0].is_retweet);
  CHECK_FALSE(tweets[0].author_is_bot);
  CHECK(tweets[1].retweet_count == 0);
}

TEST_CASE("parse_tweets reports bad line") {
  std::istringstream in(
      R"({"id":"1","timestamp":"2018-01-01T00:00:00Z","text":"hi"})"
      "\nnot json\n");
  try {
    parse_tweets(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("parse_tweets rejects negative retweet_count") {
  std::istringstream in(
      R"({"id":"1","timestamp":"2018-01-01T00:00:00Z","text":"x","retweet_count":-1})"
      "\n");
  CHECK_THROWS_AS(parse_tweets(in), DomainError);
}

TEST_CASE("sanitize applies the ordered rule list") {
  // Hand-derived: sigil stripped then query term dropped; stopwords out;
  // punctuation trimmed; emoji and URL removed.
  auto clean = sanitize(raw("#Bitcoin to the MOON!!! \xF0\x9F\x9A\x80 https://t.co/abc"),
                        kStop, kQuery);
  REQUIRE(clean.has_value());
  REQUIRE(clean->tokens.size() == 1);
  CHECK(clean->tokens[0] == "moon");
}

TEST_CASE("sanitize empty text") {
  auto clean = sanitize(raw(""), kStop, kQuery);
  REQUIRE(clean.has_value());
  CHECK(clean->tokens.empty());
}

TEST_CASE("sanitize drops query terms in any format") {
  auto clean = sanitize(raw("BTC btc Bitcoin"), kStop, kQuery);
  REQUIRE(clean.has_value());
  CHECK(clean->tokens.empty());
}

TEST_CASE("sanitize rejects flagged tweets") {
  RawTweet t = raw("perfectly fine words");
  t.is_retweet = true;
  CHECK_FALSE(sanitize(t, kStop, kQuery).has_value());
  t = raw("x");
  t.author_suspended = true;
  CHECK_FALSE(sanitize(t, kStop, kQuery).has_value());
  t = raw("x");
  t.is_promoted = true;
  CHECK_FALSE(sanitize(t, kStop, kQuery).has_value());
  t = raw("x");
  t.author_is_bot = true;
  CHECK_FALSE(sanitize(t, kStop, kQuery).has_value());
  t = raw("x");
  t.is_reply = true;
  CHECK_FALSE(sanitize(t, kStop, kQuery).has_value());
  t = raw("x");
  t.is_quote = true;
  CHECK_FALSE(sanitize(t, kStop, kQuery).has_value());
}

TEST_CASE("sanitize keeps hashtag words and strips digits") {
  auto clean = sanitize(raw("#hodl @whale win100 don't e-mail bob@x.com"),
                        kStop, kQuery);
  REQUIRE(clean.has_value());
  // "win100" has a digit, "don't" has interior punctuation, "e-mail" too,
  // the address is removed as e-mail.
  CHECK(clean->tokens == std::vector<std::string>{"hodl", "whale"});
}

TEST_CASE("sanitizer idempotence and token purity properties") {
  Rng rng(99);
  const std::string alphabet =
      "abcXYZ019.!?#@:/\xC3\xA9 \t\xF0\x9F\x98\x80-_'moon";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    size_t len = rng.below(60);
    for (size_t i = 0; i < len; ++i)
      text += alphabet[rng.below(alphabet.size())];
    auto clean = sanitize(raw(text), kStop, kQuery);
    REQUIRE(clean.has_value());
    for (const auto& tok : clean->tokens) {
      CHECK_FALSE(tok.empty());
      for (unsigned char c : tok) {
        CHECK(c >= 'a');
        CHECK(c <= 'z');
      }
      CHECK_FALSE(kStop.count(tok));
      CHECK_FALSE(kQuery.count(tok));
    }
    std::string joined;
    for (const auto& tok : clean->tokens) {
      if (!joined.empty()) joined += ' ';
      joined += tok;
    }
    auto again = sanitize(raw(joined), kStop, kQuery);
    REQUIRE(again.has_value());
    CHECK(again->tokens == clean->tokens);
  }
}

namespace {

std::vector<LabeledInterval> hourly_intervals(
    const std::vector<double>& next_returns) {
  // Builds n+1 intervals so that interval t+1 carries next_returns[t].
  std::vector<LabeledInterval> iv;
  for (size_t t = 0; t <= next_returns.size(); ++t) {
    LabeledInterval x;
    x.start = int64_t(t) * 3600;
    x.end = x.start + 3600;
    x.log_return = t == 0 ? 0.0 : next_returns[t - 1];
    x.label = x.log_return > 0 ? Direction::Increase : Direction::Decrease;
    iv.push_back(x);
  }
  return iv;
}

CleanTweet tweet_at(int64_t ts, const std::string& id = "x") {
  CleanTweet t;
  t.id = id;
  t.timestamp = ts;
  t.tokens = {"word"};
  return t;
}

}  // namespace

TEST_CASE("bucket_tweets attaches to the preceding interval") {
  // Interval 11:00-12:00 labeled Increase; a 10:30 tweet lands in the
  // Increase dataset attached to 10:00-11:00.
  std::vector<LabeledInterval> iv;
  for (int t = 0; t < 3; ++t) {
    LabeledInterval x;
    x.start = 36000 + t * 3600;  // 10:00
    x.end = x.start + 3600;
    x.log_return = (t == 1) ? 0.5 : -0.5;
    x.label = x.log_return > 0 ? Direction::Increase : Direction::Decrease;
    iv.push_back(x);
  }
  IntervalSpec spec;
  auto r = bucket_tweets({tweet_at(37800)}, iv, spec);
  REQUIRE(r.increase.members.size() == 1);
  CHECK(r.increase.members[0].interval.start == 36000);
  CHECK(r.increase.members[0].tweets.size() == 1);
  CHECK(r.increase.dataset_id == "HourIn");
  CHECK(r.decrease.dataset_id == "HourDe");
}

TEST_CASE("bucket_tweets drops the final interval's tweets") {
  auto iv = hourly_intervals({0.1});
  IntervalSpec spec;
  auto r = bucket_tweets({tweet_at(3600 + 10)}, iv, spec);
  CHECK(r.dropped_final_interval == 1);
  CHECK(r.increase.tweet_count() == 0);
  CHECK(r.decrease.tweet_count() == 0);
}

TEST_CASE("bucket_tweets empty input gives two empty datasets") {
  auto iv = hourly_intervals({0.1, -0.1});
  auto r = bucket_tweets({}, iv, IntervalSpec{});
  CHECK(r.increase.tweet_count() == 0);
  CHECK(r.decrease.tweet_count() == 0);
}

TEST_CASE("bucket partition property") {
  Rng rng(41);
  std::vector<double> rets;
  for (int i = 0; i < 40; ++i) rets.push_back(rng.uniform() - 0.5);
  auto iv = hourly_intervals(rets);
  std::vector<CleanTweet> tweets;
  for (int i = 0; i < 500; ++i) {
    int64_t ts = int64_t(rng.below(iv.size() * 3600 + 7200)) - 3600;
    tweets.push_back(tweet_at(ts, "t" + std::to_string(i)));
  }
  auto r = bucket_tweets(tweets, iv, IntervalSpec{});
  size_t in_range_with_successor = 0;
  for (const auto& t : tweets) {
    if (t.timestamp >= iv.front().start &&
        t.timestamp < iv[iv.size() - 1].start) {
      ++in_range_with_successor;
    }
  }
  CHECK(r.increase.tweet_count() + r.decrease.tweet_count() ==
        in_range_with_successor);
  CHECK(r.increase.tweet_count() + r.decrease.tweet_count() +
            r.out_of_range + r.dropped_final_interval ==
        tweets.size());
  // Members across both datasets cover every interval with a successor.
  CHECK(r.increase.members.size() + r.decrease.members.size() ==
        iv.size() - 1);
}

TEST_CASE("select_extreme keeps the largest following moves per side") {
  auto iv = hourly_intervals({0.5, -0.4, 0.01, -0.02});
  auto r = bucket_tweets({}, iv, IntervalSpec{});
  auto in_kept = select_extreme_intervals(r.increase, 0.5);
  auto de_kept = select_extreme_intervals(r.decrease, 0.5);
  REQUIRE(in_kept.members.size() == 1);
  REQUIRE(de_kept.members.size() == 1);
  CHECK(in_kept.members[0].next_log_return == doctest::Approx(0.5));
  CHECK(de_kept.members[0].next_log_return == doctest::Approx(-0.4));
}

TEST_CASE("select_extreme q=1 identity, q=0 domain error") {
  auto iv = hourly_intervals({0.5, -0.4, 0.01, -0.02, 0.3});
  auto r = bucket_tweets({}, iv, IntervalSpec{});
  auto all = select_extreme_intervals(r.increase, 1.0);
  CHECK(all.members.size() == r.increase.members.size());
  for (size_t i = 0; i < all.members.size(); ++i) {
    CHECK(all.members[i].interval.start ==
          r.increase.members[i].interval.start);
  }
  CHECK_THROWS_AS(select_extreme_intervals(r.increase, 0.0), DomainError);
  CHECK_THROWS_AS(select_extreme_intervals(r.increase, 1.5), DomainError);
}

TEST_CASE("select_extreme nesting property") {
  Rng rng(4242);
  std::vector<double> rets;
  for (int i = 0; i < 60; ++i) rets.push_back(rng.uniform() - 0.5);
  auto iv = hourly_intervals(rets);
  auto r = bucket_tweets({}, iv, IntervalSpec{});
  auto small = select_extreme_intervals(r.increase, 0.2);
  auto big = select_extreme_intervals(r.increase, 0.6);
  for (const auto& m : small.members) {
    bool found = false;
    for (const auto& b : big.members) {
      if (b.interval.start == m.interval.start) found = true;
    }
    CHECK(found);
  }
}
