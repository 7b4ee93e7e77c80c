#include "skycloud/timeutil.hpp"

#include <cctype>
#include <cstdio>

#include "skycloud/error.hpp"

namespace skycloud {
namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::optional<Timestamp> make_timestamp(int y, int mo, int d, int h, int mi, int s) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace

Timestamp parse_iso_utc(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ is exactly 20 characters.
  const bool shape_ok = text.size() == 20 && text[4] == '-' && text[7] == '-' && text[10] == 'T' &&
                        text[13] == ':' && text[16] == ':' && text[19] == 'Z';
  if (shape_ok && all_digits(text.substr(0, 4)) && all_digits(text.substr(5, 2)) &&
      all_digits(text.substr(8, 2)) && all_digits(text.substr(11, 2)) &&
      all_digits(text.substr(14, 2)) && all_digits(text.substr(17, 2))) {
    if (auto t = make_timestamp(to_int(text.substr(0, 4)), to_int(text.substr(5, 2)),
                                to_int(text.substr(8, 2)), to_int(text.substr(11, 2)),
                                to_int(text.substr(14, 2)), to_int(text.substr(17, 2)))) {
      return *t;
    }
  }
  throw Error(ErrorKind::Timestamp, "malformed UTC timestamp '" + std::string(text) +
                                        "' (expected YYYY-MM-DDTHH:MM:SSZ)");
}

std::optional<Timestamp> parse_compact_utc(std::string_view text) {
  if (text.size() != 14 || !all_digits(text)) return std::nullopt;
  return make_timestamp(to_int(text.substr(0, 4)), to_int(text.substr(4, 2)), to_int(text.substr(6, 2)),
                        to_int(text.substr(8, 2)), to_int(text.substr(10, 2)), to_int(text.substr(12, 2)));
}

namespace {

struct Fields {
  int y, mo, d, h, mi, s;
};

Fields split(Timestamp t) {
  using namespace std::chrono;
  const auto day_start = floor<days>(t);
  const year_month_day ymd{day_start};
  const hh_mm_ss<seconds> hms{t - day_start};
  return {int(ymd.year()), static_cast<int>(unsigned(ymd.month())), static_cast<int>(unsigned(ymd.day())),
          static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
          static_cast<int>(hms.seconds().count())};
}

}  // namespace

std::string format_iso_utc(Timestamp t) {
  const Fields f = split(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", f.y, f.mo, f.d, f.h, f.mi, f.s);
  return buf;
}

std::string format_compact_utc(Timestamp t) {
  const Fields f = split(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d%02d%02d", f.y, f.mo, f.d, f.h, f.mi, f.s);
  return buf;
}

}  // namespace skycloud
