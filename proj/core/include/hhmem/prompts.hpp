#pragma once

#include <map>
#include <string>
#include <vector>

#include "hhmem/json_schema.hpp"

namespace hhmem {

// The four fixed background aspects, in canonical order.
inline const std::vector<std::string>& background_aspects() {
    static const std::vector<std::string> kAspects = {"work", "health", "family", "leisure"};
    return kAspects;
}

struct PromptTemplate {
    std::string template_id;
    std::string body;           // text with {snake_case} placeholders
    JsonSchema output_schema;   // shape contract for the model's reply
};

// Versioned registry of every prompt the system issues. Template ids:
//   mem.*   memory construction
//   rag.*   retrieval / response generation
//   task.*  single-turn benchmark tasks
//   judge.* LLM-as-judge evaluation
//   sim.*   multi-turn role simulation
//   base.*  baseline-only prompts
class PromptRegistry {
public:
    static const PromptRegistry& instance();

    const PromptTemplate& get(const std::string& template_id) const;
    std::vector<std::string> ids() const;

private:
    PromptRegistry();
    std::map<std::string, PromptTemplate> templates_;
};

// Pure single-pass substitution: every {placeholder} in the body must have a
// binding; substituted text is emitted literally and never re-scanned.
std::string render_prompt(const std::string& template_id,
                          const std::map<std::string, std::string>& bindings);
std::string render_template_body(const std::string& template_id, const std::string& body,
                                 const std::map<std::string, std::string>& bindings);

}  // namespace hhmem
