#include "caif/pipeline/intent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace caif::pipeline {

using nlohmann::json;

std::string_view field_name(Field f) {
    switch (f) {
        case Field::CellId:       return "cell_id";
        case Field::SliceId:      return "slice_id";
        case Field::Metric:       return "metric";
        case Field::Action:       return "action";
        case Field::MagnitudePct: return "magnitude_pct";
        case Field::DeadlineS:    return "deadline_s";
    }
    return "?";
}

std::optional<Field> field_from_name(std::string_view name) {
    for (Field f : kAllFields) {
        if (field_name(f) == name) return f;
    }
    return std::nullopt;
}

std::string_view to_string(Metric m) {
    return m == Metric::DownlinkThroughput ? "DownlinkThroughput" : "UplinkThroughput";
}

std::string_view to_string(Action a) { return a == Action::Increase ? "Increase" : "Decrease"; }

std::string_view to_string(Speaker s) { return s == Speaker::Operator ? "Operator" : "System"; }

std::optional<Metric> metric_from_string(std::string_view s) {
    if (s == "DownlinkThroughput") return Metric::DownlinkThroughput;
    if (s == "UplinkThroughput") return Metric::UplinkThroughput;
    return std::nullopt;
}

std::optional<Action> action_from_string(std::string_view s) {
    if (s == "Increase") return Action::Increase;
    if (s == "Decrease") return Action::Decrease;
    return std::nullopt;
}

void Conversation::add_operator(std::string text, Timestamp at) {
    turns.push_back({Speaker::Operator, std::move(text), at});
}

void Conversation::add_system(std::string text, Timestamp at) {
    turns.push_back({Speaker::System, std::move(text), at});
}

std::size_t Conversation::operator_turns() const {
    return static_cast<std::size_t>(
        std::count_if(turns.begin(), turns.end(), [](const Turn& t) { return t.speaker == Speaker::Operator; }));
}

bool Conversation::well_formed() const {
    if (operator_turns() == 0) return false;
    return std::is_sorted(turns.begin(), turns.end(), [](const Turn& a, const Turn& b) { return a.at < b.at; });
}

bool StructuredIntent::is_set(Field f) const {
    switch (f) {
        case Field::CellId:       return cell_id.has_value();
        case Field::SliceId:      return slice_id.has_value();
        case Field::Metric:       return metric.has_value();
        case Field::Action:       return action.has_value();
        case Field::MagnitudePct: return magnitude_pct.has_value();
        case Field::DeadlineS:    return deadline_s.has_value();
    }
    return false;
}

void StructuredIntent::clear(Field f) {
    switch (f) {
        case Field::CellId:       cell_id.reset(); break;
        case Field::SliceId:      slice_id.reset(); break;
        case Field::Metric:       metric.reset(); break;
        case Field::Action:       action.reset(); break;
        case Field::MagnitudePct: magnitude_pct.reset(); break;
        case Field::DeadlineS:    deadline_s.reset(); break;
    }
    provenance.erase(f);
}

void StructuredIntent::copy_field(Field f, const StructuredIntent& o) {
    switch (f) {
        case Field::CellId:       cell_id = o.cell_id; break;
        case Field::SliceId:      slice_id = o.slice_id; break;
        case Field::Metric:       metric = o.metric; break;
        case Field::Action:       action = o.action; break;
        case Field::MagnitudePct: magnitude_pct = o.magnitude_pct; break;
        case Field::DeadlineS:    deadline_s = o.deadline_s; break;
    }
    if (auto it = o.provenance.find(f); it != o.provenance.end()) {
        provenance[f] = it->second;
    } else {
        provenance.erase(f);
    }
}

bool StructuredIntent::same_value(Field f, const StructuredIntent& o) const {
    switch (f) {
        case Field::CellId:       return cell_id == o.cell_id;
        case Field::SliceId:      return slice_id == o.slice_id;
        case Field::Metric:       return metric == o.metric;
        case Field::Action:       return action == o.action;
        case Field::MagnitudePct: return magnitude_pct == o.magnitude_pct;
        case Field::DeadlineS:    return deadline_s == o.deadline_s;
    }
    return false;
}

std::string StructuredIntent::value_text(Field f) const {
    if (!is_set(f)) return "<unset>";
    switch (f) {
        case Field::CellId:  return std::to_string(*cell_id);
        case Field::SliceId: return std::to_string(*slice_id);
        case Field::Metric:  return std::string(to_string(*metric));
        case Field::Action:  return std::string(to_string(*action));
        case Field::MagnitudePct: {
            std::ostringstream ss;
            ss << *magnitude_pct;
            return ss.str();
        }
        case Field::DeadlineS: return std::to_string(*deadline_s);
    }
    return "?";
}

bool StructuredIntent::complete() const { return missing().empty(); }

std::vector<Field> StructuredIntent::missing() const {
    std::vector<Field> out;
    for (Field f : kAllFields) {
        if (!is_set(f)) out.push_back(f);
    }
    return out;
}

std::set<Field> differing_fields(const StructuredIntent& a, const StructuredIntent& b) {
    std::set<Field> out;
    for (Field f : kAllFields) {
        if (!a.same_value(f, b)) out.insert(f);
    }
    return out;
}

void EvaluationReport::seal() {
    verdict = (missing_fields.empty() && violations.empty()) ? Verdict::Pass : Verdict::Fail;
}

std::set<Field> EvaluationReport::flagged() const {
    std::set<Field> out(missing_fields.begin(), missing_fields.end());
    for (const auto& v : violations) out.insert(v.field);
    return out;
}

json intent_to_json(const StructuredIntent& i) {
    json out = json::object();
    out["cell_id"] = i.cell_id ? json(*i.cell_id) : json(nullptr);
    out["slice_id"] = i.slice_id ? json(*i.slice_id) : json(nullptr);
    out["metric"] = i.metric ? json(std::string(to_string(*i.metric))) : json(nullptr);
    out["action"] = i.action ? json(std::string(to_string(*i.action))) : json(nullptr);
    out["magnitude_pct"] = i.magnitude_pct ? json(*i.magnitude_pct) : json(nullptr);
    out["deadline_s"] = i.deadline_s ? json(*i.deadline_s) : json(nullptr);
    json prov = json::object();
    for (const auto& [f, turn] : i.provenance) prov[std::string(field_name(f))] = turn;
    out["provenance"] = std::move(prov);
    return out;
}

namespace {

std::optional<int> positive_int(const json& v) {
    if (v.is_number_integer()) {
        auto n = v.get<long long>();
        if (n > 0 && n <= 1'000'000'000) return static_cast<int>(n);
        return std::nullopt;
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d > 0 && d <= 1e9 && std::floor(d) == d) return static_cast<int>(d);
    }
    return std::nullopt;
}

}  // namespace

ParsedIntent parse_intent_json(const json& doc) {
    if (!doc.is_object()) throw SchemaParseFailure("intent output is not a JSON object");
    ParsedIntent out;
    auto& intent = out.intent;
    auto issue = [&out](Field f, std::string reason) { out.issues.push_back({f, std::move(reason)}); };

    for (Field f : kAllFields) {
        auto it = doc.find(std::string(field_name(f)));
        if (it == doc.end() || it->is_null()) continue;
        const json& v = *it;
        switch (f) {
            case Field::CellId:
            case Field::SliceId:
            case Field::DeadlineS: {
                auto n = positive_int(v);
                if (!n) {
                    issue(f, "expected positive integer, got " + v.dump());
                } else if (f == Field::CellId) {
                    intent.cell_id = n;
                } else if (f == Field::SliceId) {
                    intent.slice_id = n;
                } else {
                    intent.deadline_s = n;
                }
                break;
            }
            case Field::Metric: {
                auto m = v.is_string() ? metric_from_string(v.get<std::string>()) : std::nullopt;
                if (!m) issue(f, "expected DownlinkThroughput|UplinkThroughput, got " + v.dump());
                intent.metric = m;
                break;
            }
            case Field::Action: {
                auto a = v.is_string() ? action_from_string(v.get<std::string>()) : std::nullopt;
                if (!a) issue(f, "expected Increase|Decrease, got " + v.dump());
                intent.action = a;
                break;
            }
            case Field::MagnitudePct: {
                if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() <= 100.0)) {
                    issue(f, "expected percentage in (0, 100], got " + v.dump());
                } else {
                    intent.magnitude_pct = v.get<double>();
                }
                break;
            }
        }
    }

    if (auto prov = doc.find("provenance"); prov != doc.end() && prov->is_object()) {
        for (const auto& [key, value] : prov->items()) {
            auto f = field_from_name(key);
            if (f && intent.is_set(*f) && value.is_number_integer() && value.get<int>() >= 0) {
                intent.provenance[*f] = value.get<int>();
            }
        }
    }
    return out;
}

std::string_view strip_code_fence(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.starts_with("```")) {
        auto nl = text.find('\n');
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto end = text.rfind("```"); end != std::string_view::npos) text = text.substr(0, end);
    }
    return trim(text);
}

ParsedIntent parse_intent_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(strip_code_fence(text));
    } catch (const json::parse_error&) {
        throw SchemaParseFailure("intent output is not valid JSON");
    }
    return parse_intent_json(doc);
}

json report_to_json(const EvaluationReport& r) {
    json missing = json::array();
    for (Field f : r.missing_fields) missing.push_back(std::string(field_name(f)));
    json violations = json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"field", std::string(field_name(v.field))},
                              {"evidence_turn", v.evidence_turn ? json(*v.evidence_turn) : json(nullptr)},
                              {"reason", v.reason}});
    }
    return {{"verdict", r.verdict == Verdict::Pass ? "Pass" : "Fail"},
            {"missing_fields", std::move(missing)},
            {"violations", std::move(violations)}};
}

EvaluationReport parse_report_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(strip_code_fence(text));
    } catch (const json::parse_error&) {
        throw SchemaParseFailure("evaluation output is not valid JSON");
    }
    if (!doc.is_object()) throw SchemaParseFailure("evaluation output is not a JSON object");
    EvaluationReport r;
    if (auto it = doc.find("missing_fields"); it != doc.end() && it->is_array()) {
        for (const auto& m : *it) {
            if (!m.is_string()) continue;
            if (auto f = field_from_name(m.get<std::string>())) r.missing_fields.push_back(*f);
        }
    }
    if (auto it = doc.find("violations"); it != doc.end() && it->is_array()) {
        for (const auto& v : *it) {
            if (!v.is_object() || !v.contains("field") || !v["field"].is_string()) continue;
            auto f = field_from_name(v["field"].get<std::string>());
            if (!f) continue;
            FieldViolation fv{*f, std::nullopt, v.value("reason", std::string("unspecified"))};
            if (v.contains("evidence_turn") && v["evidence_turn"].is_number_integer()) {
                fv.evidence_turn = v["evidence_turn"].get<int>();
            }
            r.violations.push_back(std::move(fv));
        }
    }
    r.seal();
    return r;
}

const json& intent_schema() {
    static const json schema = {
        {"type", "object"},
        {"properties",
         {
             {"cell_id", {{"type", "integer"}, {"minimum", 1}}},
             {"slice_id", {{"type", "integer"}, {"minimum", 1}}},
             {"metric", {{"enum", {"DownlinkThroughput", "UplinkThroughput"}}}},
             {"action", {{"enum", {"Increase", "Decrease"}}}},
             {"magnitude_pct", {{"type", "number"}, {"exclusiveMinimum", 0}, {"maximum", 100}}},
             {"deadline_s", {{"type", "integer"}, {"minimum", 1}}},
             {"provenance", {{"type", "object"}, {"additionalProperties", {{"type", "integer"}}}}},
         }},
        {"required", {"cell_id", "slice_id", "metric", "action", "magnitude_pct", "deadline_s"}},
        {"additionalProperties", false},
    };
    return schema;
}

}  // namespace caif::pipeline
