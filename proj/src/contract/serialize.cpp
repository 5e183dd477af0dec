#include "caif/contract/serialize.hpp"

namespace caif::contract {

using nlohmann::json;

namespace {

const json& context() {
    static const json ctx = {
        {"icm", "http://tmforum.org/2020/07/IntentCommonModel#"},
        {"ran", "http://tmforum.org/2020/07/RanIntentModel#"},
        {"idan", "http://tmforum.org/2020/07/IntentDeliveryAndAssurance#"},
    };
    return ctx;
}

std::string join(const std::string& base, const std::string& key) { return base + "/" + key; }

const json& require(const json& obj, const std::string& base, const char* key) {
    if (!obj.is_object()) throw ParseError(base.empty() ? "/" : base, "expected object");
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) throw ParseError(join(base, key), "missing mandatory field");
    return *it;
}

std::string require_string(const json& obj, const std::string& base, const char* key) {
    const json& v = require(obj, base, key);
    if (!v.is_string()) throw ParseError(join(base, key), "expected string");
    return v.get<std::string>();
}

Timestamp require_time(const json& obj, const std::string& base, const char* key) {
    const std::string text = require_string(obj, base, key);
    try {
        return parse_iso8601(text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(join(base, key), e.what());
    }
}

}  // namespace

const std::vector<std::string>& mandatory_keys() {
    static const std::vector<std::string> k = {
        keys::kId,           keys::kTarget,       keys::kExpectation,    keys::kTargetValue,
        keys::kMechanism,    keys::kSpecification, keys::kRelationship,  keys::kCharacteristic,
        keys::kLifecycle,    keys::kCreated,
    };
    return k;
}

json serialize_contract(const IntentContract& c) {
    json doc;
    doc[keys::kContext] = context();
    doc[keys::kType] = "icm:Intent";
    doc[keys::kId] = c.id;
    doc[keys::kTarget] = c.target;
    doc[keys::kExpectation] = std::string(to_string(c.expectation));
    doc[keys::kTargetValue] = c.target_value_pct;
    doc[keys::kMechanism] = std::string(to_string(c.policy_mechanism));
    doc[keys::kSpecification] = {{"id", c.specification_id}};
    doc[keys::kRelationship] = {{"id", c.relationship.related_id},
                                {"relationshipType", c.relationship.relationship_kind}};
    json chars = json::array();
    for (const auto& ch : c.characteristics) {
        chars.push_back({{"id", ch.id},
                         {"name", ch.name},
                         {"valueType", std::string(to_string(ch.value_type))},
                         {"value", ch.value}});
    }
    doc[keys::kCharacteristic] = std::move(chars);
    json history = json::array();
    for (const auto& h : c.lifecycle.history) {
        history.push_back(
            {{"timestamp", format_iso8601(h.at)}, {"state", std::string(to_string(h.state))}, {"reason", h.reason}});
    }
    doc[keys::kLifecycle] = {{"state", std::string(to_string(c.lifecycle.state))}, {"history", std::move(history)}};
    doc[keys::kCreated] = format_iso8601(c.created_at);
    return doc;
}

IntentContract parse_contract(const json& doc) {
    if (!doc.is_object()) throw ParseError("/", "contract document must be a JSON object");
    IntentContract c;
    c.id = require_string(doc, "", keys::kId);
    c.target = require_string(doc, "", keys::kTarget);

    const std::string exp = require_string(doc, "", keys::kExpectation);
    auto e = expectation_from_string(exp);
    if (!e) throw ParseError(join("", keys::kExpectation), "unknown expectation '" + exp + "'");
    c.expectation = *e;

    const json& pct = require(doc, "", keys::kTargetValue);
    if (!pct.is_number()) throw ParseError(join("", keys::kTargetValue), "expected number");
    c.target_value_pct = pct.get<double>();

    const std::string mech = require_string(doc, "", keys::kMechanism);
    auto m = mechanism_from_string(mech);
    if (!m) throw ParseError(join("", keys::kMechanism), "unknown policy mechanism '" + mech + "'");
    c.policy_mechanism = *m;

    const json& spec = require(doc, "", keys::kSpecification);
    c.specification_id = require_string(spec, join("", keys::kSpecification), "id");

    const json& rel = require(doc, "", keys::kRelationship);
    const std::string rel_base = join("", keys::kRelationship);
    c.relationship.related_id = require_string(rel, rel_base, "id");
    c.relationship.relationship_kind = require_string(rel, rel_base, "relationshipType");

    const json& chars = require(doc, "", keys::kCharacteristic);
    const std::string chars_base = join("", keys::kCharacteristic);
    if (!chars.is_array()) throw ParseError(chars_base, "expected array");
    for (std::size_t i = 0; i < chars.size(); ++i) {
        const std::string base = chars_base + "/" + std::to_string(i);
        Characteristic ch;
        ch.id = require_string(chars[i], base, "id");
        ch.name = require_string(chars[i], base, "name");
        const std::string vt = require_string(chars[i], base, "valueType");
        auto parsed = value_type_from_string(vt);
        if (!parsed) throw ParseError(join(base, "valueType"), "unknown value type '" + vt + "'");
        ch.value_type = *parsed;
        ch.value = require_string(chars[i], base, "value");
        c.characteristics.push_back(std::move(ch));
    }

    const json& life = require(doc, "", keys::kLifecycle);
    const std::string life_base = join("", keys::kLifecycle);
    const std::string st = require_string(life, life_base, "state");
    auto state = state_from_string(st);
    if (!state) throw ParseError(join(life_base, "state"), "unknown lifecycle state '" + st + "'");
    c.lifecycle.state = *state;
    const json& hist = require(life, life_base, "history");
    if (!hist.is_array()) throw ParseError(join(life_base, "history"), "expected array");
    for (std::size_t i = 0; i < hist.size(); ++i) {
        const std::string base = life_base + "/history/" + std::to_string(i);
        LifecycleEntry entry;
        entry.at = require_time(hist[i], base, "timestamp");
        const std::string hs = require_string(hist[i], base, "state");
        auto hstate = state_from_string(hs);
        if (!hstate) throw ParseError(join(base, "state"), "unknown lifecycle state '" + hs + "'");
        entry.state = *hstate;
        entry.reason = require_string(hist[i], base, "reason");
        c.lifecycle.history.push_back(std::move(entry));
    }

    c.created_at = require_time(doc, "", keys::kCreated);
    return c;
}

std::string serialize_contract_text(const IntentContract& contract, int indent) {
    return serialize_contract(contract).dump(indent);
}

IntentContract parse_contract_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("not valid JSON: ") + e.what());
    }
    return parse_contract(doc);
}

}  // namespace caif::contract
