#pragma once

#include <string>
#include <vector>

#include "hhmem/core_model.hpp"

namespace hhmem {

// Shared plain-text serializations used when binding domain objects into
// prompts. The deterministic mock backend parses these same layouts, so
// builders and mock stay in sync through this one header.

std::string format_log_line(const LogEntry& log);                     // "log_3 | ts | type | content"
std::string format_logs(const std::vector<LogEntry>& logs);
std::string format_dialogue(const std::vector<DialogueTurn>& turns);  // "turn_1:\nuser (action): ..."
std::string bullet_list(const std::vector<std::string>& items);       // "- item" lines
std::string format_candidates(const std::vector<CandidateSolution>& candidates);  // "id: text"

// Lowercased alphanumeric tokens with length >= 4; the lexical backbone of
// the mock backend's fabricated outputs.
std::vector<std::string> salient_tokens(const std::string& text);

// Crude polarity detection for fabricated feedback labels.
bool sounds_positive(const std::string& text);
bool sounds_negative(const std::string& text);

std::string truncate_text(const std::string& text, size_t max_chars);

}  // namespace hhmem
