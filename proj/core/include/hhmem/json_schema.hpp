#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hhmem {

// Declarative shape contract for structured LLM outputs: required keys,
// closed enums, list arities, value sets, plus custom cross-field rules.
// validate() returns an error message, or nullopt when the value conforms.
class JsonSchema {
public:
    using CustomRule = std::function<std::optional<std::string>(const nlohmann::json&)>;

    static JsonSchema any();
    static JsonSchema string(bool non_empty = true);
    static JsonSchema string_enum(std::vector<std::string> allowed);
    static JsonSchema number();
    static JsonSchema number_set(std::vector<double> allowed);
    static JsonSchema integer_range(long lo, long hi);
    static JsonSchema array(JsonSchema items, std::optional<size_t> min_items = std::nullopt,
                            std::optional<size_t> max_items = std::nullopt);
    static JsonSchema object(std::map<std::string, JsonSchema> required_keys,
                             bool allow_extra_keys = true);
    // Object whose keys are data (e.g. "log_12"); every value must conform.
    static JsonSchema map_of(JsonSchema values);

    JsonSchema with_rule(CustomRule rule) const;

    std::optional<std::string> validate(const nlohmann::json& value) const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit JsonSchema(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
};

// Extracts the single JSON value embedded in an LLM reply. Tolerates
// surrounding prose and Markdown code fences; fails when no JSON value or
// more than one top-level JSON value is present.
nlohmann::json extract_json(const std::string& text);

}  // namespace hhmem
