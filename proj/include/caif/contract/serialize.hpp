#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "caif/contract/types.hpp"

namespace caif::contract {

// Malformed or missing field; `path` is a JSON pointer into the document.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// JSON-LD keys. Prefixes are carried literally; no RDF expansion.
namespace keys {
inline constexpr const char* kContext = "@context";
inline constexpr const char* kType = "@type";
inline constexpr const char* kId = "id";
inline constexpr const char* kTarget = "icm:target";
inline constexpr const char* kExpectation = "icm:hasExpectation";
inline constexpr const char* kTargetValue = "ran:targetThroughputIncreasement";
inline constexpr const char* kMechanism = "idan:Delivery_slaPolicy";
inline constexpr const char* kSpecification = "intentSpecification";
inline constexpr const char* kRelationship = "intentRelationship";
inline constexpr const char* kCharacteristic = "characteristic";
inline constexpr const char* kLifecycle = "lifecycleStatus";
inline constexpr const char* kCreated = "creationDate";
}  // namespace keys

// Top-level keys whose absence makes parse_contract fail.
const std::vector<std::string>& mandatory_keys();

nlohmann::json serialize_contract(const IntentContract& contract);
IntentContract parse_contract(const nlohmann::json& document);

// Text variants; parse throws ParseError at "" when the text is not JSON.
std::string serialize_contract_text(const IntentContract& contract, int indent = 2);
IntentContract parse_contract_text(const std::string& text);

}  // namespace caif::contract
