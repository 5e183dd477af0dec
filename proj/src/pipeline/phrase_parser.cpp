#include "caif/pipeline/phrase_parser.hpp"

#include <regex>
#include <string>

namespace caif::pipeline {

namespace {

struct Patterns {
    std::regex cell{R"(\bcell\s*(?:id\s*)?#?\s*(\d+))", std::regex::icase};
    std::regex slice{R"(\bslice\s*(?:id\s*)?#?\s*(\d+))", std::regex::icase};
    std::regex downlink{R"(\b(downlink|dl)\b)", std::regex::icase};
    std::regex uplink{R"(\b(uplink|ul)\b)", std::regex::icase};
    std::regex increase{R"(\b(increase|raise|boost|enhance|improve)\b)", std::regex::icase};
    std::regex decrease{R"(\b(decrease|reduce|lower|cut|throttle)\b)", std::regex::icase};
    std::regex pct{R"(\bby\s+(\d+(?:\.\d+)?)\s*(?:%|percent\b))", std::regex::icase};
    std::regex deadline{R"(\bin\s+(\d+)\s*(minutes?|mins?|seconds?|secs?|hours?|hrs?)\b)", std::regex::icase};
};

const Patterns& patterns() {
    static const Patterns p;
    return p;
}

int unit_seconds(std::string unit) {
    for (auto& ch : unit) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (unit.starts_with("h")) return 3600;
    if (unit.starts_with("m")) return 60;
    return 1;
}

std::optional<int> to_positive(const std::string& digits) {
    if (digits.size() > 9) return std::nullopt;
    int v = std::stoi(digits);
    return v > 0 ? std::optional<int>(v) : std::nullopt;
}

}  // namespace

StructuredIntent extract_utterance(std::string_view view, int turn_index) {
    const auto& p = patterns();
    const std::string text(view);
    StructuredIntent out;
    std::smatch m;

    if (std::regex_search(text, m, p.cell)) {
        if (auto v = to_positive(m[1].str())) {
            out.cell_id = v;
            out.provenance[Field::CellId] = turn_index;
        }
    }
    if (std::regex_search(text, m, p.slice)) {
        if (auto v = to_positive(m[1].str())) {
            out.slice_id = v;
            out.provenance[Field::SliceId] = turn_index;
        }
    }
    const bool dl = std::regex_search(text, p.downlink);
    const bool ul = std::regex_search(text, p.uplink);
    if (dl != ul) {
        out.metric = dl ? Metric::DownlinkThroughput : Metric::UplinkThroughput;
        out.provenance[Field::Metric] = turn_index;
    }
    const bool inc = std::regex_search(text, p.increase);
    const bool dec = std::regex_search(text, p.decrease);
    if (inc != dec) {
        out.action = inc ? Action::Increase : Action::Decrease;
        out.provenance[Field::Action] = turn_index;
    }
    if (std::regex_search(text, m, p.pct)) {
        const double v = std::stod(m[1].str());
        if (v > 0.0 && v <= 100.0) {
            out.magnitude_pct = v;
            out.provenance[Field::MagnitudePct] = turn_index;
        }
    }
    if (std::regex_search(text, m, p.deadline)) {
        if (auto v = to_positive(m[1].str())) {
            out.deadline_s = *v * unit_seconds(m[2].str());
            out.provenance[Field::DeadlineS] = turn_index;
        }
    }
    return out;
}

StructuredIntent extract_conversation(const Conversation& conversation) {
    StructuredIntent acc;
    for (std::size_t i = 0; i < conversation.turns.size(); ++i) {
        const auto& turn = conversation.turns[i];
        if (turn.speaker != Speaker::Operator) continue;
        const auto found = extract_utterance(turn.text, static_cast<int>(i));
        for (Field f : kAllFields) {
            if (found.is_set(f)) acc.copy_field(f, found);
        }
    }
    return acc;
}

}  // namespace caif::pipeline
