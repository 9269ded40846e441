#include "kmpipe/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kmpipe/errors.hpp"
#include "kmpipe/timeutil.hpp"

namespace kmpipe::corpus {

void IntervalSpec::validate() const {
  if (duration_s <= 0 || 86400 % duration_s != 0) {
    throw ConfigError("interval duration must divide 24 hours, got " +
                      std::to_string(duration_s) + "s");
  }
}

int64_t IntervalSpec::align_down(int64_t t) const {
  int64_t off = (t - anchor_s) % duration_s;
  if (off < 0) off += duration_s;
  return t - off;
}

std::string IntervalSpec::name() const {
  switch (duration_s) {
    case 3600:
      return "Hour";
    case 4 * 3600:
      return "4Hour";
    case 86400:
      return "Daily";
    default:
      return std::to_string(duration_s) + "s";
  }
}

std::string dataset_id_for(const IntervalSpec& spec, Direction dir) {
  return spec.name() + (dir == Direction::Increase ? "In" : "De");
}

size_t IntervalDataset::tweet_count() const {
  size_t n = 0;
  for (const auto& m : members) n += m.tweets.size();
  return n;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<PriceBar> parse_price_bars(std::istream& in) {
  std::vector<PriceBar> bars;
  std::string line;
  size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;  // `timestamp,close`
    }
    size_t comma = t.find(',');
    if (comma == std::string::npos) {
      throw ParseError("price CSV line " + std::to_string(line_no) +
                       ": expected timestamp,close");
    }
    PriceBar bar;
    try {
      bar.timestamp = parse_iso8601_utc(trim(t.substr(0, comma)));
    } catch (const ParseError& e) {
      throw ParseError("price CSV line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    std::string close_text = trim(t.substr(comma + 1));
    char* end = nullptr;
    bar.close = std::strtod(close_text.c_str(), &end);
    if (close_text.empty() || end == nullptr || *end != '\0' ||
        !std::isfinite(bar.close)) {
      throw ParseError("price CSV line " + std::to_string(line_no) +
                       ": bad close value '" + close_text + "'");
    }
    if (bar.close <= 0.0) {
      throw DomainError("price CSV line " + std::to_string(line_no) +
                        ": non-positive close " + close_text);
    }
    if (!bars.empty() && bar.timestamp <= bars.back().timestamp) {
      throw DomainError("price CSV line " + std::to_string(line_no) +
                        ": timestamps not strictly increasing at " +
                        format_iso8601_utc(bar.timestamp));
    }
    bars.push_back(bar);
  }
  return bars;
}

std::vector<LabeledInterval> compute_interval_labels(
    const std::vector<PriceBar>& bars, const IntervalSpec& spec) {
  spec.validate();
  if (bars.size() < 2) {
    throw DomainError("need at least two price bars to label intervals");
  }
  // First boundary with a bar at or before it, last boundary not past the
  // final bar.
  int64_t first_boundary = spec.align_down(bars.front().timestamp);
  if (first_boundary < bars.front().timestamp) first_boundary += spec.duration_s;
  int64_t last_boundary = spec.align_down(bars.back().timestamp);
  if (last_boundary - first_boundary < 2 * spec.duration_s) {
    throw DomainError("price series covers fewer than two intervals of " +
                      spec.name() + " starting at boundary " +
                      format_iso8601_utc(first_boundary));
  }

  auto close_at = [&](int64_t boundary) {
    // Last bar at or before the boundary.
    auto it = std::upper_bound(
        bars.begin(), bars.end(), boundary,
        [](int64_t t, const PriceBar& b) { return t < b.timestamp; });
    if (it == bars.begin()) {
      throw DomainError("no price bar at or before boundary " +
                        format_iso8601_utc(boundary));
    }
    return std::prev(it)->close;
  };

  std::vector<LabeledInterval> out;
  double prev_close = close_at(first_boundary);
  for (int64_t start = first_boundary; start + spec.duration_s <= last_boundary;
       start += spec.duration_s) {
    int64_t end = start + spec.duration_s;
    double close = close_at(end);
    LabeledInterval iv;
    iv.start = start;
    iv.end = end;
    iv.log_return = std::log(close / prev_close);
    iv.label =
        iv.log_return > 0.0 ? Direction::Increase : Direction::Decrease;
    out.push_back(iv);
    prev_close = close;
  }
  return out;
}

std::vector<RawTweet> parse_tweets(std::istream& in) {
  std::vector<RawTweet> tweets;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(t, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ParseError("tweet JSONL line " + std::to_string(line_no) +
                       ": not a JSON object");
    }
    RawTweet tw;
    try {
      tw.id = j.value("id", std::string());
      if (!j.contains("timestamp") || !j["timestamp"].is_string()) {
        throw ParseError("missing timestamp");
      }
      tw.timestamp = parse_iso8601_utc(j["timestamp"].get<std::string>());
      tw.text = j.value("text", std::string());
      tw.retweet_count = j.value("retweet_count", int64_t{0});
      tw.is_retweet = j.value("is_retweet", false);
      tw.is_reply = j.value("is_reply", false);
      tw.is_quote = j.value("is_quote", false);
      tw.is_promoted = j.value("is_promoted", false);
      tw.author_is_bot = j.value("author_is_bot", false);
      tw.author_suspended = j.value("author_suspended", false);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("tweet JSONL line " + std::to_string(line_no) + ": " +
                       e.what());
    } catch (const ParseError& e) {
      throw ParseError("tweet JSONL line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    if (tw.retweet_count < 0) {
      throw DomainError("tweet JSONL line " + std::to_string(line_no) +
                        ": negative retweet_count");
    }
    tweets.push_back(std::move(tw));
  }
  return tweets;
}

TermSet load_term_file(std::istream& in) {
  TermSet terms;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    terms.insert(t);
  }
  return terms;
}

TermSet load_term_files(const std::vector<std::string>& paths) {
  TermSet merged;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open term file: " + path);
    TermSet one = load_term_file(in);
    merged.insert(one.begin(), one.end());
  }
  return merged;
}

namespace {

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool looks_like_url(const std::string& w) {
  if (w.rfind("http://", 0) == 0 || w.rfind("https://", 0) == 0) return true;
  if (w.rfind("www.", 0) == 0) return true;
  return w.find("://") != std::string::npos;
}

bool looks_like_email(const std::string& w) {
  size_t at = w.find('@');
  if (at == std::string::npos || at == 0 || at + 1 >= w.size()) return false;
  size_t dot = w.find('.', at + 1);
  return dot != std::string::npos && dot + 1 < w.size();
}

bool ascii_letter(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace

std::optional<CleanTweet> sanitize(const RawTweet& raw, const TermSet& stopwords,
                                   const TermSet& query_terms) {
  if (raw.is_retweet || raw.is_reply || raw.is_quote || raw.is_promoted ||
      raw.author_is_bot || raw.author_suspended) {
    return std::nullopt;
  }

  std::string text = raw.text;
  for (auto& c : text) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }

  CleanTweet clean;
  clean.id = raw.id;
  clean.timestamp = raw.timestamp;
  clean.retweet_count = raw.retweet_count;

  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && is_ws(text[i])) ++i;
    size_t start = i;
    while (i < n && !is_ws(text[i])) ++i;
    if (i == start) continue;
    std::string word = text.substr(start, i - start);

    if (looks_like_url(word) || looks_like_email(word)) continue;
    // Hashtag / mention sigils go, the word stays.
    size_t skip = 0;
    while (skip < word.size() && (word[skip] == '#' || word[skip] == '@'))
      ++skip;
    word.erase(0, skip);
    if (word.empty()) continue;

    bool has_digit = false, has_non_ascii = false;
    for (unsigned char c : word) {
      if (c >= '0' && c <= '9') has_digit = true;
      if (c >= 0x80) has_non_ascii = true;
    }
    if (has_digit || has_non_ascii) continue;

    // Strip punctuation and symbols at the token boundaries; anything
    // non-alphabetic left inside disqualifies the token.
    size_t b = 0, e = word.size();
    while (b < e && !ascii_letter(word[b])) ++b;
    while (e > b && !ascii_letter(word[e - 1])) --e;
    word = word.substr(b, e - b);
    if (word.empty()) continue;
    bool pure = true;
    for (char c : word) {
      if (!ascii_letter(c)) {
        pure = false;
        break;
      }
    }
    if (!pure) continue;
    if (stopwords.count(word) || query_terms.count(word)) continue;
    clean.tokens.push_back(std::move(word));
  }
  return clean;
}

BucketResult bucket_tweets(const std::vector<CleanTweet>& tweets,
                           const std::vector<LabeledInterval>& intervals,
                           const IntervalSpec& spec) {
  BucketResult result;
  result.increase.dataset_id = dataset_id_for(spec, Direction::Increase);
  result.increase.direction = Direction::Increase;
  result.increase.spec = spec;
  result.decrease.dataset_id = dataset_id_for(spec, Direction::Decrease);
  result.decrease.direction = Direction::Decrease;
  result.decrease.spec = spec;
  if (intervals.empty()) return result;

  // Every interval with a successor becomes a member of the dataset that
  // matches the successor's label, even when it ends up with no tweets.
  std::vector<size_t> member_slot(intervals.size(), SIZE_MAX);
  for (size_t t = 0; t + 1 < intervals.size(); ++t) {
    IntervalMember member;
    member.interval = intervals[t];
    member.next_log_return = intervals[t + 1].log_return;
    IntervalDataset& target = intervals[t + 1].label == Direction::Increase
                                  ? result.increase
                                  : result.decrease;
    member_slot[t] = target.members.size();
    target.members.push_back(std::move(member));
  }

  const int64_t covered_start = intervals.front().start;
  const int64_t covered_end = intervals.back().end;
  for (const auto& tweet : tweets) {
    if (tweet.timestamp < covered_start || tweet.timestamp >= covered_end) {
      ++result.out_of_range;
      continue;
    }
    size_t t = static_cast<size_t>((tweet.timestamp - covered_start) /
                                   spec.duration_s);
    if (t + 1 >= intervals.size()) {
      ++result.dropped_final_interval;
      continue;
    }
    IntervalDataset& target = intervals[t + 1].label == Direction::Increase
                                  ? result.increase
                                  : result.decrease;
    target.members[member_slot[t]].tweets.push_back(tweet);
  }
  return result;
}

IntervalDataset select_extreme_intervals(const IntervalDataset& dataset,
                                         double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("extreme quantile must lie in (0,1], got " +
                      std::to_string(q));
  }
  if (dataset.members.empty()) {
    throw DomainError("cannot select extreme intervals of an empty dataset");
  }
  const size_t n = dataset.members.size();
  double t = q * static_cast<double>(n);
  double r = std::round(t);
  size_t keep = std::abs(t - r) < 1e-9 * std::max(1.0, t)
                    ? static_cast<size_t>(r)
                    : static_cast<size_t>(std::ceil(t));
  keep = std::min(std::max<size_t>(keep, 1), n);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    double ma = std::fabs(dataset.members[a].next_log_return);
    double mb = std::fabs(dataset.members[b].next_log_return);
    if (ma != mb) return ma > mb;
    return dataset.members[a].interval.start < dataset.members[b].interval.start;
  });
  order.resize(keep);
  std::sort(order.begin(), order.end());

  IntervalDataset out;
  out.dataset_id = dataset.dataset_id;
  out.direction = dataset.direction;
  out.spec = dataset.spec;
  out.members.reserve(keep);
  for (size_t idx : order) out.members.push_back(dataset.members[idx]);
  return out;
}

}  // namespace kmpipe::corpus
