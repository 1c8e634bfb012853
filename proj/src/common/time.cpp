#include "adscreen/common/time.hpp"

#include "adscreen/common/error.hpp"

#include <charconv>
#include <cstdio>

namespace adscreen {
namespace {

using namespace std::chrono;

int read_digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view whole) {
    if (pos + count > text.size())
        throw ParseError("truncated timestamp", std::string(whole));
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, value);
    if (ec != std::errc{} || ptr != text.data() + pos + count)
        throw ParseError("non-numeric field in timestamp", std::string(whole));
    return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
    if (pos >= text.size() || text[pos] != c)
        throw ParseError(std::string("expected '") + c + "' in timestamp", std::string(whole));
}

sys_days make_day(int y, int m, int d, std::string_view whole) {
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ParseError("invalid calendar date", std::string(whole));
    return sys_days{ymd};
}

} // namespace

Timestamp parse_rfc3339(std::string_view text) {
    // 2018-05-16T10:22:03Z
    const int y = read_digits(text, 0, 4, text);
    expect(text, 4, '-', text);
    const int mo = read_digits(text, 5, 2, text);
    expect(text, 7, '-', text);
    const int d = read_digits(text, 8, 2, text);
    if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' '))
        throw ParseError("expected 'T' in timestamp", std::string(text));
    const int h = read_digits(text, 11, 2, text);
    expect(text, 13, ':', text);
    const int mi = read_digits(text, 14, 2, text);
    expect(text, 16, ':', text);
    const int s = read_digits(text, 17, 2, text);
    if (h > 23 || mi > 59 || s > 60) throw ParseError("time of day out of range", std::string(text));

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    if (pos >= text.size()) throw ParseError("missing UTC offset", std::string(text));

    int offset_minutes = 0;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        const int oh = read_digits(text, pos + 1, 2, text);
        expect(text, pos + 3, ':', text);
        const int om = read_digits(text, pos + 4, 2, text);
        offset_minutes = sign * (oh * 60 + om);
        pos += 6;
    } else {
        throw ParseError("bad UTC offset", std::string(text));
    }
    if (pos != text.size()) throw ParseError("trailing characters in timestamp", std::string(text));

    const auto day_start = make_day(y, mo, d, text);
    return Timestamp{day_start} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
}

std::string format_rfc3339(Timestamp ts) {
    const auto dp = floor<days>(ts);
    const year_month_day ymd{dp};
    const hh_mm_ss tod{ts - dp};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

Date parse_date(std::string_view text) {
    if (text.size() != 10) throw ParseError("expected YYYY-MM-DD", std::string(text));
    const int y = read_digits(text, 0, 4, text);
    expect(text, 4, '-', text);
    const int mo = read_digits(text, 5, 2, text);
    expect(text, 7, '-', text);
    const int d = read_digits(text, 8, 2, text);
    return make_day(y, mo, d, text);
}

std::string format_date(Date d) {
    const year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace adscreen
