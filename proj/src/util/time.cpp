#include "caif/util/time.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace caif {

Timestamp now_ms() {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

std::string format_iso8601(Timestamp ts) {
    using namespace std::chrono;
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss hms{ts - day};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()));
    std::string out(buf);
    char frac[8];
    std::snprintf(frac, sizeof(frac), ".%03lld", static_cast<long long>(hms.subseconds().count()));
    out.insert(out.size() - 1, frac);
    return out;
}

Timestamp parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int consumed = 0;
    const std::string str(text);
    if (std::sscanf(str.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%n", &y, &mo, &d, &h, &mi, &s, &consumed) != 6) {
        throw std::invalid_argument("not an ISO-8601 timestamp: " + str);
    }
    std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
    long long millis = 0;
    if (!rest.empty() && rest.front() == '.') {
        rest.remove_prefix(1);
        int digits = 0;
        while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') {
            if (digits < 3) millis = millis * 10 + (rest.front() - '0');
            ++digits;
            rest.remove_prefix(1);
        }
        if (digits == 0) throw std::invalid_argument("empty fraction in timestamp: " + str);
        for (; digits < 3; ++digits) millis *= 10;
    }
    if (rest != "Z") throw std::invalid_argument("timestamp must be UTC ('Z'): " + str);

    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
        throw std::invalid_argument("timestamp out of range: " + str);
    }
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{millis};
}

}  // namespace caif
