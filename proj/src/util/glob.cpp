#include "caif/util/glob.hpp"

#include <string>

namespace caif {

namespace {

bool match_plain(std::string_view p, std::string_view t) {
    // Iterative matcher with single-star backtracking.
    std::size_t pi = 0, ti = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (ti < t.size()) {
        if (pi < p.size() && (p[pi] == '?' || p[pi] == t[ti])) {
            ++pi;
            ++ti;
        } else if (pi < p.size() && p[pi] == '*') {
            star = pi++;
            mark = ti;
        } else if (star != std::string_view::npos) {
            pi = star + 1;
            ti = ++mark;
        } else {
            return false;
        }
    }
    while (pi < p.size() && p[pi] == '*') ++pi;
    return pi == p.size();
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view text) {
    const auto open = pattern.find('{');
    if (open == std::string_view::npos) return match_plain(pattern, text);
    const auto close = pattern.find('}', open);
    if (close == std::string_view::npos) return match_plain(pattern, text);

    const std::string_view head = pattern.substr(0, open);
    const std::string_view body = pattern.substr(open + 1, close - open - 1);
    const std::string_view tail = pattern.substr(close + 1);
    std::size_t start = 0;
    while (start <= body.size()) {
        auto comma = body.find(',', start);
        if (comma == std::string_view::npos) comma = body.size();
        std::string expanded;
        expanded.append(head).append(body.substr(start, comma - start)).append(tail);
        if (glob_match(expanded, text)) return true;
        start = comma + 1;
    }
    return false;
}

}  // namespace caif
