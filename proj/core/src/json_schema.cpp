#include "hhmem/json_schema.hpp"

#include <cmath>

#include "hhmem/errors.hpp"

namespace hhmem {

struct JsonSchema::Node {
    enum class Kind { any, string, number, integer, array, object, map } kind = Kind::any;

    bool non_empty_string = false;
    std::vector<std::string> allowed_strings;   // empty = unconstrained
    std::vector<double> allowed_numbers;        // empty = unconstrained
    long int_lo = 0, int_hi = 0;
    bool has_int_range = false;

    std::shared_ptr<const Node> items;          // array / map values
    std::optional<size_t> min_items, max_items;

    std::map<std::string, JsonSchema> required_keys;
    bool allow_extra_keys = true;

    std::vector<CustomRule> rules;
};

namespace {

std::string type_name(const nlohmann::json& v) { return v.type_name(); }

}  // namespace

JsonSchema JsonSchema::any() {
    return JsonSchema(std::make_shared<Node>());
}

JsonSchema JsonSchema::string(bool non_empty) {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::string;
    node->non_empty_string = non_empty;
    return JsonSchema(node);
}

JsonSchema JsonSchema::string_enum(std::vector<std::string> allowed) {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::string;
    node->allowed_strings = std::move(allowed);
    return JsonSchema(node);
}

JsonSchema JsonSchema::number() {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::number;
    return JsonSchema(node);
}

JsonSchema JsonSchema::number_set(std::vector<double> allowed) {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::number;
    node->allowed_numbers = std::move(allowed);
    return JsonSchema(node);
}

JsonSchema JsonSchema::integer_range(long lo, long hi) {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::integer;
    node->int_lo = lo;
    node->int_hi = hi;
    node->has_int_range = true;
    return JsonSchema(node);
}

JsonSchema JsonSchema::array(JsonSchema items, std::optional<size_t> min_items,
                             std::optional<size_t> max_items) {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::array;
    node->items = items.node_;
    node->min_items = min_items;
    node->max_items = max_items;
    return JsonSchema(node);
}

JsonSchema JsonSchema::object(std::map<std::string, JsonSchema> required_keys,
                              bool allow_extra_keys) {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::object;
    node->required_keys = std::move(required_keys);
    node->allow_extra_keys = allow_extra_keys;
    return JsonSchema(node);
}

JsonSchema JsonSchema::map_of(JsonSchema values) {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::map;
    node->items = values.node_;
    return JsonSchema(node);
}

JsonSchema JsonSchema::with_rule(CustomRule rule) const {
    auto node = std::make_shared<Node>(*node_);
    node->rules.push_back(std::move(rule));
    return JsonSchema(node);
}

std::optional<std::string> JsonSchema::validate(const nlohmann::json& value) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Node::Kind::any:
            break;
        case Node::Kind::string: {
            if (!value.is_string()) return "expected string, got " + type_name(value);
            const auto s = value.get<std::string>();
            if (n.non_empty_string && s.empty()) return "string must be non-empty";
            if (!n.allowed_strings.empty()) {
                bool ok = false;
                for (const auto& a : n.allowed_strings) ok = ok || a == s;
                if (!ok) return "'" + s + "' not in the allowed value set";
            }
            break;
        }
        case Node::Kind::number: {
            if (!value.is_number()) return "expected number, got " + type_name(value);
            if (!n.allowed_numbers.empty()) {
                const double d = value.get<double>();
                bool ok = false;
                for (double a : n.allowed_numbers) ok = ok || std::abs(a - d) < 1e-12;
                if (!ok) return "number " + value.dump() + " not in the allowed value set";
            }
            break;
        }
        case Node::Kind::integer: {
            if (!value.is_number_integer()) return "expected integer, got " + value.dump();
            const long v = value.get<long>();
            if (n.has_int_range && (v < n.int_lo || v > n.int_hi)) {
                return "integer " + std::to_string(v) + " outside [" + std::to_string(n.int_lo) +
                       ", " + std::to_string(n.int_hi) + "]";
            }
            break;
        }
        case Node::Kind::array: {
            if (!value.is_array()) return "expected array, got " + type_name(value);
            if (n.min_items && value.size() < *n.min_items) {
                return "array has " + std::to_string(value.size()) + " items, needs at least " +
                       std::to_string(*n.min_items);
            }
            if (n.max_items && value.size() > *n.max_items) {
                return "array has " + std::to_string(value.size()) + " items, allows at most " +
                       std::to_string(*n.max_items);
            }
            if (n.items) {
                JsonSchema item_schema(n.items);
                for (size_t i = 0; i < value.size(); ++i) {
                    if (auto err = item_schema.validate(value[i])) {
                        return "item " + std::to_string(i) + ": " + *err;
                    }
                }
            }
            break;
        }
        case Node::Kind::object: {
            if (!value.is_object()) return "expected object, got " + type_name(value);
            for (const auto& [key, schema] : n.required_keys) {
                if (!value.contains(key)) return "missing required key '" + key + "'";
                if (auto err = schema.validate(value[key])) {
                    return "key '" + key + "': " + *err;
                }
            }
            if (!n.allow_extra_keys) {
                for (auto it = value.begin(); it != value.end(); ++it) {
                    if (!n.required_keys.count(it.key())) {
                        return "unexpected key '" + it.key() + "'";
                    }
                }
            }
            break;
        }
        case Node::Kind::map: {
            if (!value.is_object()) return "expected object, got " + type_name(value);
            if (n.items) {
                JsonSchema value_schema(n.items);
                for (auto it = value.begin(); it != value.end(); ++it) {
                    if (auto err = value_schema.validate(it.value())) {
                        return "key '" + it.key() + "': " + *err;
                    }
                }
            }
            break;
        }
    }
    for (const auto& rule : n.rules) {
        if (auto err = rule(value)) return err;
    }
    return std::nullopt;
}

nlohmann::json extract_json(const std::string& text) {
    // Prefer fenced blocks when present.
    std::string body = text;
    const auto fence = body.find("```");
    if (fence != std::string::npos) {
        auto start = body.find('\n', fence);
        const auto end = body.find("```", start == std::string::npos ? fence + 3 : start);
        if (start != std::string::npos && end != std::string::npos && end > start) {
            body = body.substr(start + 1, end - start - 1);
        }
    }

    // Scan for maximal balanced {...} / [...] regions that parse as JSON.
    std::vector<nlohmann::json> found;
    size_t i = 0;
    while (i < body.size()) {
        const char c = body[i];
        if (c != '{' && c != '[') {
            ++i;
            continue;
        }
        const char open = c;
        const char close = (c == '{') ? '}' : ']';
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        size_t j = i;
        size_t end = std::string::npos;
        for (; j < body.size(); ++j) {
            const char d = body[j];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (d == '\\') {
                    escaped = true;
                } else if (d == '"') {
                    in_string = false;
                }
                continue;
            }
            if (d == '"') {
                in_string = true;
            } else if (d == open) {
                ++depth;
            } else if (d == close) {
                if (--depth == 0) {
                    end = j;
                    break;
                }
            }
        }
        if (end == std::string::npos) {
            ++i;
            continue;
        }
        const std::string candidate = body.substr(i, end - i + 1);
        nlohmann::json parsed = nlohmann::json::parse(candidate, nullptr, false);
        if (!parsed.is_discarded()) {
            found.push_back(std::move(parsed));
            i = end + 1;
        } else {
            ++i;
        }
    }

    if (found.empty()) throw schema_error("response contains no JSON value");
    if (found.size() > 1) throw schema_error("response contains multiple top-level JSON values");
    return found.front();
}

}  // namespace hhmem
