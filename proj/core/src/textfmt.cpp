#include "hhmem/textfmt.hpp"

#include <cctype>

namespace hhmem {

std::string format_log_line(const LogEntry& log) {
    return "log_" + std::to_string(log.local_id) + " | " + log.timestamp.to_string() + " | " +
           to_string(log.log_type) + " | " + log.content;
}

std::string format_logs(const std::vector<LogEntry>& logs) {
    std::string out;
    for (const auto& log : logs) {
        out += format_log_line(log);
        out += "\n";
    }
    return out;
}

std::string format_dialogue(const std::vector<DialogueTurn>& turns) {
    std::string out;
    for (const auto& turn : turns) {
        out += "turn_" + std::to_string(turn.turn_index) + ":\n";
        out += "user";
        if (turn.user_action) out += " (" + to_string(*turn.user_action) + ")";
        out += ": " + turn.user_utterance + "\n";
        out += "assistant";
        if (turn.assistant_action) out += " (" + to_string(*turn.assistant_action) + ")";
        out += ": " + turn.assistant_utterance + "\n";
    }
    return out;
}

std::string bullet_list(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        out += "- " + item + "\n";
    }
    return out;
}

std::string format_candidates(const std::vector<CandidateSolution>& candidates) {
    std::string out;
    for (const auto& c : candidates) {
        out += c.id + ": " + c.text + "\n";
    }
    return out;
}

std::vector<std::string> salient_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            if (current.size() >= 4) out.push_back(current);
            current.clear();
        }
    }
    if (current.size() >= 4) out.push_back(current);
    return out;
}

namespace {

bool contains_any(const std::string& lower, const std::vector<std::string>& needles) {
    for (const auto& n : needles) {
        if (lower.find(n) != std::string::npos) return true;
    }
    return false;
}

std::string lowercase(const std::string& text) {
    std::string out = text;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

bool sounds_positive(const std::string& text) {
    static const std::vector<std::string> kPositive = {
        "great", "perfect", "thanks", "thank you", "love", "sounds good",
        "works for me", "let's go", "yes", "exactly", "helpful"};
    return contains_any(lowercase(text), kPositive);
}

bool sounds_negative(const std::string& text) {
    static const std::vector<std::string> kNegative = {
        "no,", "not ", "don't", "do not", "dislike", "hate", "won't",
        "refuse", "rather not", "too expensive", "absolutely not"};
    return contains_any(lowercase(text), kNegative);
}

std::string truncate_text(const std::string& text, size_t max_chars) {
    if (text.size() <= max_chars) return text;
    return text.substr(0, max_chars) + "...";
}

}  // namespace hhmem
