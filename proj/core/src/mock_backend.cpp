#include "hhmem/mock_backend.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hhmem/hashing.hpp"
#include "hhmem/prompts.hpp"
#include "hhmem/textfmt.hpp"

namespace hhmem {

namespace {

std::string binding(const CallMeta& meta, const std::string& key) {
    if (!meta.bindings) return {};
    auto it = meta.bindings->find(key);
    return it == meta.bindings->end() ? std::string() : it->second;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

struct ParsedLog {
    int id = 0;
    std::string content;
};

// Parses the "log_<id> | ts | type | content" layout from textfmt.
std::vector<ParsedLog> parse_log_lines(const std::string& text) {
    std::vector<ParsedLog> out;
    for (const auto& line : split_lines(text)) {
        if (line.rfind("log_", 0) != 0) continue;
        const auto bar = line.find(" | ");
        if (bar == std::string::npos) continue;
        ParsedLog log;
        try {
            log.id = std::stoi(line.substr(4, bar - 4));
        } catch (...) {
            continue;
        }
        const auto last_bar = line.rfind(" | ");
        log.content = last_bar == std::string::npos ? line : line.substr(last_bar + 3);
        out.push_back(std::move(log));
    }
    return out;
}

struct ParsedTurn {
    int index = 0;
    std::string user_action;
    std::string user;
    std::string assistant_action;
    std::string assistant;
};

std::vector<ParsedTurn> parse_dialogue(const std::string& text) {
    std::vector<ParsedTurn> turns;
    ParsedTurn current;
    bool open = false;
    auto parse_utterance = [](const std::string& line, const std::string& role,
                              std::string* action, std::string* content) {
        // "user (action): text" or "user: text"
        std::string rest = line.substr(role.size());
        if (rest.rfind(" (", 0) == 0) {
            const auto close = rest.find(')');
            if (close != std::string::npos) {
                *action = rest.substr(2, close - 2);
                rest = rest.substr(close + 1);
            }
        }
        if (rest.rfind(": ", 0) == 0) rest = rest.substr(2);
        else if (rest.rfind(":", 0) == 0) rest = rest.substr(1);
        *content = rest;
    };
    for (const auto& line : split_lines(text)) {
        if (line.rfind("turn_", 0) == 0 && line.back() == ':') {
            if (open) turns.push_back(current);
            current = ParsedTurn{};
            try {
                current.index = std::stoi(line.substr(5, line.size() - 6));
            } catch (...) {
                current.index = static_cast<int>(turns.size()) + 1;
            }
            open = true;
        } else if (line.rfind("user", 0) == 0) {
            parse_utterance(line, "user", &current.user_action, &current.user);
        } else if (line.rfind("assistant", 0) == 0) {
            parse_utterance(line, "assistant", &current.assistant_action, &current.assistant);
        }
    }
    if (open) turns.push_back(current);
    return turns;
}

struct ParsedSituation {
    std::vector<std::string> aspects;
    std::string text;
};

// Parses "- [aspects: a, b] text" lines.
std::vector<ParsedSituation> parse_situation_list(const std::string& text) {
    std::vector<ParsedSituation> out;
    for (const auto& line : split_lines(text)) {
        if (line.rfind("- ", 0) != 0) continue;
        ParsedSituation s;
        std::string rest = line.substr(2);
        if (rest.rfind("[aspects: ", 0) == 0) {
            const auto close = rest.find(']');
            if (close != std::string::npos) {
                std::string names = rest.substr(10, close - 10);
                std::string current;
                for (char c : names + ",") {
                    if (c == ',') {
                        while (!current.empty() && current.front() == ' ') current.erase(0, 1);
                        while (!current.empty() && current.back() == ' ') current.pop_back();
                        if (!current.empty()) s.aspects.push_back(current);
                        current.clear();
                    } else {
                        current.push_back(c);
                    }
                }
                rest = rest.substr(close + 1);
                if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            }
        }
        s.text = rest;
        out.push_back(std::move(s));
    }
    return out;
}

size_t token_overlap(const std::string& a, const std::string& b) {
    const auto ta = salient_tokens(a);
    const std::set<std::string> tb_set = [&] {
        const auto tb = salient_tokens(b);
        return std::set<std::string>(tb.begin(), tb.end());
    }();
    std::set<std::string> seen;
    size_t overlap = 0;
    for (const auto& t : ta) {
        if (tb_set.count(t) && seen.insert(t).second) ++overlap;
    }
    return overlap;
}

std::vector<std::string> detect_aspects(const std::string& text) {
    static const std::map<std::string, std::vector<std::string>> kKeywords = {
        {"work",
         {"work", "office", "meeting", "project", "report", "client", "job", "career",
          "presentation", "colleague", "deadline", "market"}},
        {"health",
         {"health", "doctor", "hospital", "fitness", "jog", "sleep", "diet", "medication",
          "checkup", "yoga", "clinic", "exercise", "knee", "stretching"}},
        {"family",
         {"family", "mom", "dad", "parent", "kid", "child", "son", "daughter", "wife", "husband",
          "grandma", "grandpa", "birthday", "anniversary"}},
        {"leisure",
         {"travel", "trip", "movie", "game", "music", "hike", "hiking", "book", "reading",
          "photography", "restaurant", "park", "concert", "camping", "recipe"}},
    };
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::vector<std::string> found;
    for (const auto& aspect : background_aspects()) {
        for (const auto& kw : kKeywords.at(aspect)) {
            if (lower.find(kw) != std::string::npos) {
                found.push_back(aspect);
                break;
            }
        }
    }
    if (found.empty()) {
        found.push_back(background_aspects()[fnv1a64(text) % 4]);
    }
    return found;
}

std::string most_frequent_token(const std::string& text, const std::string& fallback) {
    std::map<std::string, int> counts;
    for (const auto& t : salient_tokens(text)) ++counts[t];
    std::string best = fallback;
    int best_count = 0;
    for (const auto& [token, count] : counts) {
        if (count > best_count) {
            best = token;
            best_count = count;
        }
    }
    return best;
}

std::string short_hash(const std::string& text) {
    return to_hex(fnv1a64(text)).substr(0, 8);
}

std::string last_user_utterance(const std::string& dialogue_context) {
    const auto turns = parse_dialogue(dialogue_context);
    for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
        if (!it->user.empty()) return it->user;
    }
    return "the current topic";
}

std::string extract_labeled_line(const std::string& text, const std::string& label) {
    for (const auto& line : split_lines(text)) {
        const auto pos = line.find(label);
        if (pos != std::string::npos) {
            return line.substr(pos + label.size());
        }
    }
    return {};
}

nlohmann::json fabricate_log_relations(const CallMeta& meta) {
    const auto logs = parse_log_lines(binding(meta, "logs"));
    const std::string span = binding(meta, "logs_id_span");  // "log_a ~ log_b"
    int lo = 0, hi = -1;
    const auto tilde = span.find('~');
    try {
        lo = std::stoi(span.substr(4, tilde - 4));
        hi = std::stoi(span.substr(span.rfind("log_") + 4));
    } catch (...) {
    }
    nlohmann::json out = nlohmann::json::object();
    for (const auto& log : logs) {
        if (log.id < lo || log.id > hi) continue;
        nlohmann::json caused_by = nlohmann::json::array();
        nlohmann::json follows = nlohmann::json::array();
        // Link to the nearest earlier visible log sharing vocabulary; strong
        // overlap reads as causation, weak as same-topic succession.
        for (auto it = logs.rbegin(); it != logs.rend(); ++it) {
            if (it->id >= log.id) continue;
            const size_t overlap = token_overlap(log.content, it->content);
            if (overlap >= 3) {
                caused_by.push_back("log_" + std::to_string(it->id));
                break;
            }
            if (overlap >= 1 && follows.empty()) {
                follows.push_back("log_" + std::to_string(it->id));
                break;
            }
        }
        out["log_" + std::to_string(log.id)] = {{"caused_by", caused_by}, {"follows", follows}};
    }
    return out;
}

nlohmann::json fabricate_situation(const CallMeta& meta) {
    const auto logs = parse_log_lines(binding(meta, "subgraph"));
    std::string text;
    for (const auto& log : logs) {
        if (!text.empty()) text += " ";
        text += log.content;
    }
    if (text.empty()) text = "The user had an uneventful period.";
    return {{"situation", text}, {"situation_aspects", detect_aspects(text)}};
}

nlohmann::json fabricate_background_update(const CallMeta& meta) {
    const auto situations = parse_situation_list(binding(meta, "cur_situations"));
    std::vector<std::string> aspects;
    for (const auto& aspect : background_aspects()) {
        for (const auto& s : situations) {
            if (std::find(s.aspects.begin(), s.aspects.end(), aspect) != s.aspects.end()) {
                aspects.push_back(aspect);
                break;
            }
        }
    }
    nlohmann::json content = nlohmann::json::object();
    for (const auto& aspect : aspects) {
        for (const auto& s : situations) {
            if (std::find(s.aspects.begin(), s.aspects.end(), aspect) != s.aspects.end()) {
                content[aspect] = "In " + aspect + ": " + truncate_text(s.text, 140);
                break;
            }
        }
    }
    return {{"updating_aspects", aspects}, {"updating_content", content}};
}

nlohmann::json fabricate_topic_outline(const CallMeta& meta) {
    const auto turns = parse_dialogue(binding(meta, "dialogue"));
    if (turns.empty()) {
        return nlohmann::json::array(
            {{{"turn_span", {"turn_1", "turn_1"}},
              {"requirement", "The user asked for advice."},
              {"solution_list",
               nlohmann::json::array({{{"solution", "A generic suggestion."},
                                       {"user_feedback", "unclear"},
                                       {"feedback_type", "others"}}})},
              {"preference", "No clear preference was expressed."}}});
    }

    // A new topic starts at each tagged topic_inquiry; untagged dialogues
    // fall back to chunks of three turns.
    std::vector<size_t> starts;
    for (size_t i = 0; i < turns.size(); ++i) {
        if (turns[i].user_action == "topic_inquiry") starts.push_back(i);
    }
    if (starts.empty() || starts.front() != 0) {
        starts.clear();
        for (size_t i = 0; i < turns.size(); i += 3) starts.push_back(i);
    }

    nlohmann::json outlines = nlohmann::json::array();
    for (size_t s = 0; s < starts.size(); ++s) {
        const size_t begin = starts[s];
        const size_t end = (s + 1 < starts.size()) ? starts[s + 1] - 1 : turns.size() - 1;
        nlohmann::json solutions = nlohmann::json::array();
        for (size_t i = begin; i <= end; ++i) {
            if (turns[i].assistant_action == "solution_proposal" ||
                (solutions.empty() && i == end)) {
                std::string feedback = (i + 1 <= end) ? turns[i + 1].user : turns[end].user;
                std::string type = "others";
                if (sounds_positive(feedback)) type = "pos";
                else if (sounds_negative(feedback)) type = "neg";
                solutions.push_back({{"solution", truncate_text(turns[i].assistant, 160)},
                                     {"user_feedback", truncate_text(feedback, 120)},
                                     {"feedback_type", type}});
            }
        }
        std::string preference = "The user accepted the discussed approach.";
        for (const auto& sol : solutions) {
            if (sol["feedback_type"] == "neg") {
                preference = "The user tends to reject: " + sol["solution"].get<std::string>();
                break;
            }
            if (sol["feedback_type"] == "pos") {
                preference = "The user prefers: " + sol["solution"].get<std::string>();
            }
        }
        outlines.push_back({{"turn_span",
                             {"turn_" + std::to_string(turns[begin].index),
                              "turn_" + std::to_string(turns[end].index)}},
                            {"requirement", truncate_text(turns[begin].user, 160)},
                            {"solution_list", solutions},
                            {"preference", preference}});
    }
    return outlines;
}

nlohmann::json fabricate_user_turn(const CallMeta& meta) {
    const std::string action = binding(meta, "action");
    const std::string persona = binding(meta, "persona");
    if (action == "topic_inquiry") {
        std::string query = extract_labeled_line(persona, "user_query: ");
        if (query.empty()) query = "I could use some advice today.";
        return {{"content", query}};
    }
    if (action == "requirement_confirmation") {
        std::string need = extract_labeled_line(persona, "need: ");
        if (need.empty()) need = "what you described";
        return {{"content", "Yes, that is right, I also need " + truncate_text(need, 100)}};
    }
    if (action == "solution_discussion") {
        return {{"content", "Can you explain how that would fit into my schedule?"}};
    }
    // solution_feedback: compare the last proposal against persona preferences.
    const std::string context = binding(meta, "dialogue_context");
    const auto turns = parse_dialogue(context);
    std::string proposal;
    for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
        if (!it->assistant.empty()) {
            proposal = it->assistant;
            break;
        }
    }
    const std::string neg = extract_labeled_line(persona, "neg_solutions: ");
    const std::string pos = extract_labeled_line(persona, "pos_solutions: ");
    const size_t neg_overlap = token_overlap(proposal, neg);
    const size_t pos_overlap = token_overlap(proposal, pos);
    if (neg_overlap > pos_overlap) {
        return {{"content", "No, I don't like that at all, it really doesn't suit me."}};
    }
    return {{"content", "That sounds great, thanks, let's go with it."}};
}

nlohmann::json fabricate_assistant_turn(const CallMeta& meta) {
    const std::string action = binding(meta, "action");
    const std::string memory = binding(meta, "memory");
    const std::string context = binding(meta, "dialogue_context");
    if (action == "requirement_prediction") {
        const std::string token = most_frequent_token(memory, "your recent plans");
        return {{"content", "It sounds like this relates to " + token +
                                " from your recent activity; do you also need help with that?"}};
    }
    if (action == "solution_proposal") {
        std::string basis = extract_labeled_line(memory, "preference: ");
        if (basis.empty()) basis = most_frequent_token(memory + context, "a practical option");
        return {{"content", "I suggest an option aligned with " + truncate_text(basis, 120) +
                                " (ref " + short_hash(memory + context) + ")."}};
    }
    if (action == "solution_discussion") {
        return {{"content", "It would slot into your routine with minor adjustments; "
                            "the key steps are flexible."}};
    }
    const std::string last_user = last_user_utterance(context);
    if (sounds_negative(last_user)) {
        return {{"content", "I'm sorry that suggestion missed the mark; I'll keep it in mind."}};
    }
    return {{"content", "Glad that works for you; anything else I can help with?"}};
}

nlohmann::json fabricate_g_score(const CallMeta& meta) {
    const std::string prediction = binding(meta, "prediction");
    const std::string reference = binding(meta, "reference");
    // One grade per implicit need by lexical coverage.
    double score = 0.0;
    int needs_seen = 0;
    for (const auto& line : split_lines(reference)) {
        const auto pos = line.find("need: ");
        if (pos == std::string::npos) continue;
        ++needs_seen;
        const std::string need = line.substr(pos + 6);
        const auto need_tokens = salient_tokens(need);
        if (need_tokens.empty()) continue;
        const size_t overlap = token_overlap(prediction, need);
        const double coverage = static_cast<double>(overlap) /
                                static_cast<double>(std::set<std::string>(need_tokens.begin(),
                                                                          need_tokens.end())
                                                        .size());
        if (coverage >= 0.6) score += 1.0;
        else if (coverage >= 0.25) score += 0.5;
        if (needs_seen == 2) break;
    }
    return {{"analysis", "lexical coverage estimate"}, {"score", score}};
}

nlohmann::json fabricate_pairwise_scores(const CallMeta& meta, const std::string& reference_key) {
    const std::string reference = binding(meta, reference_key);
    auto grade = [&reference](const std::string& dialogue) {
        const auto turns = parse_dialogue(dialogue);
        std::string assistant_text;
        for (const auto& t : turns) assistant_text += t.assistant + " ";
        const size_t overlap = token_overlap(assistant_text, reference);
        return static_cast<int>(1 + std::min<size_t>(9, overlap));
    };
    return {{"analysis",
             {{"assistant-1", "graded by reference overlap"},
              {"assistant-2", "graded by reference overlap"},
              {"overall", "higher overlap scores higher"}}},
            {"scores",
             {{"assistant-1", grade(binding(meta, "dialogue_assistant_1"))},
              {"assistant-2", grade(binding(meta, "dialogue_assistant_2"))}}}};
}

nlohmann::json fabricate_solution_select(const CallMeta& meta) {
    const std::string memory = binding(meta, "memory");
    struct Scored {
        size_t overlap;
        std::string id;
    };
    std::vector<Scored> scored;
    for (const auto& line : split_lines(binding(meta, "candidate_solutions"))) {
        const auto colon = line.find(": ");
        if (colon == std::string::npos) continue;
        scored.push_back({token_overlap(line.substr(colon + 2), memory), line.substr(0, colon)});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        return a.id < b.id;
    });
    nlohmann::json ids = nlohmann::json::array();
    for (size_t i = 0; i < scored.size() && i < 2; ++i) ids.push_back(scored[i].id);
    while (ids.size() < 2) ids.push_back("1");
    return {{"analysis", "picked by overlap with personalized information"},
            {"selected_solutions", ids}};
}

}  // namespace

void MockBackend::script(const std::string& template_id, std::vector<std::string> responses) {
    scripted_[template_id] = std::move(responses);
}

void MockBackend::script_for(const std::string& template_id, std::uint64_t bindings_hash,
                             std::vector<std::string> responses) {
    scripted_exact_[{template_id, bindings_hash}] = std::move(responses);
}

std::string MockBackend::complete(const std::string& /*prompt*/, const SamplingParams& /*sampling*/,
                                  const CallMeta& meta) {
    auto pick = [&meta](const std::vector<std::string>& responses) {
        const size_t index = std::min<size_t>(static_cast<size_t>(meta.attempt - 1),
                                              responses.size() - 1);
        return responses[index];
    };
    if (auto it = scripted_exact_.find({meta.template_id, meta.bindings_hash});
        it != scripted_exact_.end() && !it->second.empty()) {
        return pick(it->second);
    }
    if (auto it = scripted_.find(meta.template_id); it != scripted_.end() && !it->second.empty()) {
        return pick(it->second);
    }
    return generate(meta);
}

std::string MockBackend::generate(const CallMeta& meta) const {
    const std::string& id = meta.template_id;
    nlohmann::json out;
    if (id == "mem.log_relations") {
        out = fabricate_log_relations(meta);
    } else if (id == "mem.situation") {
        out = fabricate_situation(meta);
    } else if (id == "mem.background_update") {
        out = fabricate_background_update(meta);
    } else if (id == "mem.topic_outline") {
        out = fabricate_topic_outline(meta);
    } else if (id == "mem.requirement_rewrite") {
        out = {{"requirement", binding(meta, "requirement") + " (context: " +
                                   truncate_text(binding(meta, "situation"), 100) + ")"}};
    } else if (id == "mem.req_abstraction") {
        out = {{"general_requirement",
                "recurring " + most_frequent_token(binding(meta, "requirements"), "daily") +
                    " needs"}};
    } else if (id == "mem.pref_abstraction") {
        out = {{"principle", "For " + binding(meta, "general_requirement") +
                                 ", the user prefers options involving " +
                                 most_frequent_token(binding(meta, "preferences"), "familiar") +
                                 "."}};
    } else if (id == "mem.req_update" || id == "mem.pref_update") {
        out = {{"adjust", "No"}};
    } else if (id == "rag.query_formation") {
        out = {{"requirement", "The user needs help with: " +
                                   truncate_text(last_user_utterance(binding(meta, "dialogue_context")),
                                                 120)}};
    } else if (id == "rag.respond") {
        out = {{"response", "Considering your history, here is a suggestion for: " +
                                truncate_text(binding(meta, "question"), 120) + " (ref " +
                                short_hash(binding(meta, "memory") + binding(meta, "question")) +
                                ")"}};
    } else if (id == "task.restate") {
        out = {{"requirement",
                "The user actually needs: " + truncate_text(binding(meta, "user_query"), 140) +
                    ", informed by " + most_frequent_token(binding(meta, "memory"), "history")}};
    } else if (id == "task.solution_generate") {
        out = {{"solution", "A plan for '" + truncate_text(binding(meta, "requirement"), 80) +
                                "' tailored around " +
                                most_frequent_token(binding(meta, "memory"), "their routine") +
                                " (ref " + short_hash(binding(meta, "memory")) + ")"}};
    } else if (id == "task.solution_select") {
        out = fabricate_solution_select(meta);
    } else if (id == "judge.implicit_needs") {
        out = fabricate_g_score(meta);
    } else if (id == "judge.requirement") {
        out = fabricate_pairwise_scores(meta, "requirement");
    } else if (id == "judge.preference") {
        out = fabricate_pairwise_scores(meta, "preference");
    } else if (id == "sim.user") {
        out = fabricate_user_turn(meta);
    } else if (id == "sim.assistant") {
        out = fabricate_assistant_turn(meta);
    } else if (id == "base.recursive_dialogue_summary" || id == "base.recursive_log_summary") {
        const std::string prev = binding(meta, "previous_summary");
        const std::string fresh = id == "base.recursive_dialogue_summary"
                                      ? binding(meta, "dialogue")
                                      : binding(meta, "logs");
        std::string first_line = split_lines(fresh).empty() ? "" : split_lines(fresh).front();
        out = {{"summary", truncate_text(prev, 400) + (prev.empty() ? "" : " | ") +
                               truncate_text(first_line, 160)}};
    } else {
        out = {{"content", "ok (" + short_hash(id) + ")"}};
    }
    return out.dump();
}

}  // namespace hhmem
