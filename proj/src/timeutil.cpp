#include "kmpipe/timeutil.hpp"

#include <cstdio>

#include "kmpipe/errors.hpp"

namespace kmpipe {

int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

namespace {

bool read_fixed_uint(std::string_view s, size_t pos, size_t len,
                     unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (size_t i = 0; i < len; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

}  // namespace

int64_t parse_iso8601_utc(std::string_view s) {
  unsigned yy, mm, dd, hh, mi, ss;
  bool ok = s.size() >= 20 && read_fixed_uint(s, 0, 4, yy) && s[4] == '-' &&
            read_fixed_uint(s, 5, 2, mm) && s[7] == '-' &&
            read_fixed_uint(s, 8, 2, dd) && (s[10] == 'T' || s[10] == ' ') &&
            read_fixed_uint(s, 11, 2, hh) && s[13] == ':' &&
            read_fixed_uint(s, 14, 2, mi) && s[16] == ':' &&
            read_fixed_uint(s, 17, 2, ss);
  if (ok) {
    size_t pos = 19;
    if (s[pos] == '.') {
      ++pos;
      size_t digits = 0;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        ++pos;
        ++digits;
      }
      if (digits == 0) ok = false;
    }
    ok = ok && pos + 1 == s.size() && s[pos] == 'Z';
  }
  if (!ok || mm < 1 || mm > 12 || dd < 1 || dd > 31 || hh > 23 || mi > 59 ||
      ss > 60) {
    throw ParseError("invalid ISO-8601 UTC timestamp: '" + std::string(s) +
                     "'");
  }
  int64_t days = days_from_civil(static_cast<int64_t>(yy), mm, dd);
  return days * 86400 + static_cast<int64_t>(hh) * 3600 +
         static_cast<int64_t>(mi) * 60 + static_cast<int64_t>(ss);
}

std::string format_iso8601_utc(int64_t t) {
  int64_t days = t / 86400;
  int64_t sod = t % 86400;
  if (sod < 0) {
    sod += 86400;
    days -= 1;
  }
  int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod % 3600) / 60),
                static_cast<long long>(sod % 60));
  return buf;
}

}  // namespace kmpipe
