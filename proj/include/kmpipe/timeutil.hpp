#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kmpipe {

// UTC instants are carried as seconds since the Unix epoch. Calendar
// conversion uses the days-from-civil algorithm, valid far beyond any
// plausible market data range.

int64_t days_from_civil(int64_t y, unsigned m, unsigned d);
void civil_from_days(int64_t z, int64_t& y, unsigned& m, unsigned& d);

// Accepts "YYYY-MM-DDTHH:MM:SSZ" (optionally with fractional seconds,
// which are truncated). Throws ParseError on anything else.
int64_t parse_iso8601_utc(std::string_view s);

std::string format_iso8601_utc(int64_t epoch_seconds);

}  // namespace kmpipe
