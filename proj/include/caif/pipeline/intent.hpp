#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "caif/util/time.hpp"

namespace caif::pipeline {

enum class Speaker { Operator, System };
enum class Metric { DownlinkThroughput, UplinkThroughput };
enum class Action { Increase, Decrease };

// Mandatory fields of the intent model.
enum class Field { CellId, SliceId, Metric, Action, MagnitudePct, DeadlineS };
inline constexpr std::array<Field, 6> kAllFields = {Field::CellId, Field::SliceId,      Field::Metric,
                                                    Field::Action, Field::MagnitudePct, Field::DeadlineS};

std::string_view field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);
std::string_view to_string(Metric m);
std::string_view to_string(Action a);
std::string_view to_string(Speaker s);
std::optional<Metric> metric_from_string(std::string_view s);
std::optional<Action> action_from_string(std::string_view s);

struct Turn {
    Speaker speaker = Speaker::Operator;
    std::string text;
    Timestamp at{};
};

struct Conversation {
    std::string session_id;
    std::vector<Turn> turns;

    void add_operator(std::string text, Timestamp at = now_ms());
    void add_system(std::string text, Timestamp at = now_ms());
    std::size_t operator_turns() const;
    // At least one operator turn and timestamps non-decreasing.
    bool well_formed() const;
};

struct StructuredIntent {
    std::optional<int> cell_id;
    std::optional<int> slice_id;
    std::optional<Metric> metric;
    std::optional<Action> action;
    std::optional<double> magnitude_pct;
    std::optional<int> deadline_s;
    // Turn index each populated field was extracted from.
    std::map<Field, int> provenance;

    bool is_set(Field f) const;
    void clear(Field f);
    // Copies one field (value and provenance) from `other`.
    void copy_field(Field f, const StructuredIntent& other);
    bool same_value(Field f, const StructuredIntent& other) const;
    std::string value_text(Field f) const;

    bool complete() const;
    std::vector<Field> missing() const;

    bool operator==(const StructuredIntent&) const = default;
};

// Fields whose value (or set-ness) differs between the two intents.
std::set<Field> differing_fields(const StructuredIntent& a, const StructuredIntent& b);

enum class Verdict { Pass, Fail };

struct FieldViolation {
    Field field;
    std::optional<int> evidence_turn;
    std::string reason;

    bool operator==(const FieldViolation&) const = default;
};

struct EvaluationReport {
    Verdict verdict = Verdict::Pass;
    std::vector<Field> missing_fields;
    std::vector<FieldViolation> violations;

    // Sets the verdict from the two lists.
    void seal();
    std::set<Field> flagged() const;

    bool operator==(const EvaluationReport&) const = default;
};

// A field whose value was present but failed the schema (wrong type/range).
struct SchemaIssue {
    Field field;
    std::string reason;

    bool operator==(const SchemaIssue&) const = default;
};

struct ParsedIntent {
    StructuredIntent intent;
    std::vector<SchemaIssue> issues;
};

// Backend output that is not a JSON object at all.
class SchemaParseFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json intent_to_json(const StructuredIntent& intent);
// Field-level leniency: malformed fields are left unset and reported as issues.
// Throws SchemaParseFailure when `doc` is not an object.
ParsedIntent parse_intent_json(const nlohmann::json& doc);
// Parses model text, tolerating a surrounding markdown code fence.
ParsedIntent parse_intent_text(std::string_view text);

nlohmann::json report_to_json(const EvaluationReport& report);
EvaluationReport parse_report_text(std::string_view text);

// Schema description handed to the models.
const nlohmann::json& intent_schema();

// Strips an optional ```json fence around model output.
std::string_view strip_code_fence(std::string_view text);

}  // namespace caif::pipeline
