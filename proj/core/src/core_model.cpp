#include "hhmem/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "hhmem/errors.hpp"

namespace hhmem {

namespace {

std::string normalize_enum_name(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == ' ' || c == '-') {
            out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

const std::map<std::string, LogType>& log_type_names() {
    static const std::map<std::string, LogType> kNames = {
        {"web_search", LogType::web_search},
        {"content_publishing", LogType::content_publishing},
        {"content_browsing", LogType::content_browsing},
        {"message_sending", LogType::message_sending},
        {"message_receiving", LogType::message_receiving},
        {"schedule_management", LogType::schedule_management},
        {"transaction_record", LogType::transaction_record},
        {"device_operation", LogType::device_operation},
    };
    return kNames;
}

nlohmann::json collect_annotations(const nlohmann::json& object,
                                   const std::set<std::string>& known) {
    nlohmann::json extra = nlohmann::json::object();
    for (auto it = object.begin(); it != object.end(); ++it) {
        if (!known.count(it.key())) extra[it.key()] = it.value();
    }
    return extra;
}

std::string require_string(const nlohmann::json& object, const std::string& key,
                           const std::string& context) {
    if (!object.contains(key) || !object[key].is_string()) {
        throw schema_error(context + ": missing or non-string field '" + key + "'");
    }
    return object[key].get<std::string>();
}

FrameworkTopic parse_framework_topic(const std::string& topic_id, const nlohmann::json& node,
                                     const std::string& context) {
    FrameworkTopic topic;
    topic.topic_id = topic_id;
    topic.user_query = require_string(node, "user_query", context);
    topic.requirement = require_string(node, "requirement", context);

    const auto& needs = node.value("implicit_needs", nlohmann::json::array());
    if (needs.size() != 2) {
        throw schema_error(context + ": implicit_needs must have exactly 2 entries, got " +
                           std::to_string(needs.size()));
    }
    for (const auto& n : needs) {
        ImplicitNeed need;
        need.need = require_string(n, "need", context);
        for (const auto& e : n.value("evidences", nlohmann::json::array())) {
            need.evidences.push_back(e.get<std::string>());
        }
        topic.implicit_needs.push_back(std::move(need));
    }

    const auto& candidates = node.value("candidate_solutions", nlohmann::json::array());
    if (candidates.size() != 8) {
        throw schema_error(context + ": candidate_solutions must have exactly 8 entries, got " +
                           std::to_string(candidates.size()));
    }
    std::set<std::string> candidate_ids;
    for (const auto& c : candidates) {
        CandidateSolution sol;
        sol.id = require_string(c, "id", context);
        sol.text = require_string(c, "text", context);
        if (!candidate_ids.insert(sol.id).second) {
            throw schema_error(context + ": duplicate candidate id '" + sol.id + "'");
        }
        topic.candidates.push_back(std::move(sol));
    }

    auto read_ids = [&](const char* key) {
        std::vector<std::string> ids;
        for (const auto& v : node.value(key, nlohmann::json::array())) {
            ids.push_back(v.get<std::string>());
        }
        if (ids.size() != 2) {
            throw schema_error(context + ": " + key + " must have exactly 2 entries");
        }
        for (const auto& id : ids) {
            if (!candidate_ids.count(id)) {
                throw schema_error(context + ": " + key + " references unknown candidate '" + id + "'");
            }
        }
        return ids;
    };
    topic.pos_ids = read_ids("pos_ids");
    topic.neg_ids = read_ids("neg_ids");
    for (const auto& p : topic.pos_ids) {
        if (std::find(topic.neg_ids.begin(), topic.neg_ids.end(), p) != topic.neg_ids.end()) {
            throw schema_error(context + ": pos_ids and neg_ids overlap on '" + p + "'");
        }
    }

    if (node.contains("preference")) {
        topic.pos_preference = node["preference"].value("pos", "");
        topic.neg_preference = node["preference"].value("neg", "");
    }
    return topic;
}

Session parse_session(const nlohmann::json& node, size_t index) {
    static const std::set<std::string> kKnown = {"session_id", "time_span", "logs",
                                                 "dialogue", "framework"};
    Session session;
    session.session_id = node.value("session_id", "session_" + std::to_string(index));
    const std::string ctx = "session " + session.session_id;

    const auto& span = node.value("time_span", nlohmann::json::array());
    if (span.size() != 2) throw schema_error(ctx + ": time_span must be [start, end]");
    session.time_span.first = parse_date(span[0].get<std::string>(), ctx + " time_span start");
    session.time_span.second = parse_date(span[1].get<std::string>(), ctx + " time_span end");
    if (session.time_span.second < session.time_span.first) {
        throw schema_error(ctx + ": time_span end precedes start");
    }

    int local_id = 0;
    for (const auto& raw : node.value("logs", nlohmann::json::array())) {
        LogEntry entry;
        const std::string log_ctx = ctx + " log " + std::to_string(local_id);
        entry.timestamp = parse_timestamp(require_string(raw, "timestamp", log_ctx), log_ctx);
        entry.log_type = parse_log_type(require_string(raw, "type", log_ctx), log_ctx);
        entry.content = require_string(raw, "content", log_ctx);
        entry.local_id = local_id++;
        if (!session.logs.empty() && entry.timestamp < session.logs.back().timestamp) {
            throw schema_error(log_ctx + ": timestamps must be non-decreasing");
        }
        if (entry.timestamp < session.time_span.first.start_of_day() ||
            session.time_span.second.end_of_day() < entry.timestamp) {
            throw schema_error(log_ctx + ": timestamp outside session time_span");
        }
        session.logs.push_back(std::move(entry));
    }

    if (node.contains("dialogue")) {
        const auto& dialogue = node["dialogue"];
        int turn = 1;
        while (true) {
            const std::string key = "turn_" + std::to_string(turn);
            if (!dialogue.contains(key)) break;
            const auto& t = dialogue[key];
            const std::string turn_ctx = ctx + " " + key;
            DialogueTurn dt;
            dt.turn_index = turn;
            if (!t.contains("user") || !t.contains("assistant")) {
                throw schema_error(turn_ctx + ": turn must carry user and assistant parts");
            }
            dt.user_utterance = require_string(t["user"], "content", turn_ctx);
            dt.assistant_utterance = require_string(t["assistant"], "content", turn_ctx);
            if (t["user"].contains("action")) {
                dt.user_action = parse_user_action(t["user"]["action"].get<std::string>(), turn_ctx);
            }
            if (t["assistant"].contains("action")) {
                dt.assistant_action =
                    parse_assistant_action(t["assistant"]["action"].get<std::string>(), turn_ctx);
            }
            session.dialogue.push_back(std::move(dt));
            ++turn;
        }
        if (session.dialogue.size() != dialogue.size()) {
            throw schema_error(ctx + ": dialogue turn indices must be dense from 1");
        }
    }

    if (node.contains("framework") && !node["framework"].is_null()) {
        GroundTruthFramework fw;
        for (auto it = node["framework"].begin(); it != node["framework"].end(); ++it) {
            fw.push_back(parse_framework_topic(it.key(), it.value(),
                                               ctx + " framework topic " + it.key()));
        }
        session.framework = std::move(fw);
    }

    session.annotations = collect_annotations(node, kKnown);
    return session;
}

Persona parse_persona(const nlohmann::json& node) {
    static const std::set<std::string> kKnown = {"background", "personality", "situations"};
    Persona persona;
    persona.background = node.value("background", "");
    persona.personality = node.value("personality", "");
    if (node.contains("situations")) {
        for (auto it = node["situations"].begin(); it != node["situations"].end(); ++it) {
            persona.situations[it.key()] = it.value().get<std::string>();
        }
    }
    persona.annotations = collect_annotations(node, kKnown);
    return persona;
}

}  // namespace

LogType parse_log_type(const std::string& name, const std::string& context) {
    auto it = log_type_names().find(normalize_enum_name(name));
    if (it == log_type_names().end()) {
        throw schema_error(context + ": unknown log type '" + name + "'");
    }
    return it->second;
}

std::string to_string(LogType type) {
    for (const auto& [name, value] : log_type_names()) {
        if (value == type) return name;
    }
    return "web_search";
}

UserAction parse_user_action(const std::string& name, const std::string& context) {
    const std::string n = normalize_enum_name(name);
    if (n == "topic_inquiry") return UserAction::topic_inquiry;
    if (n == "requirement_confirmation") return UserAction::requirement_confirmation;
    if (n == "solution_discussion") return UserAction::solution_discussion;
    if (n == "solution_feedback") return UserAction::solution_feedback;
    throw schema_error(context + ": unknown user action '" + name + "'");
}

AssistantAction parse_assistant_action(const std::string& name, const std::string& context) {
    const std::string n = normalize_enum_name(name);
    if (n == "requirement_prediction") return AssistantAction::requirement_prediction;
    if (n == "solution_proposal") return AssistantAction::solution_proposal;
    if (n == "solution_discussion") return AssistantAction::solution_discussion;
    if (n == "feedback_response") return AssistantAction::feedback_response;
    throw schema_error(context + ": unknown assistant action '" + name + "'");
}

std::string to_string(UserAction action) {
    switch (action) {
        case UserAction::topic_inquiry: return "topic_inquiry";
        case UserAction::requirement_confirmation: return "requirement_confirmation";
        case UserAction::solution_discussion: return "solution_discussion";
        case UserAction::solution_feedback: return "solution_feedback";
    }
    return "topic_inquiry";
}

std::string to_string(AssistantAction action) {
    switch (action) {
        case AssistantAction::requirement_prediction: return "requirement_prediction";
        case AssistantAction::solution_proposal: return "solution_proposal";
        case AssistantAction::solution_discussion: return "solution_discussion";
        case AssistantAction::feedback_response: return "feedback_response";
    }
    return "requirement_prediction";
}

std::string action_description(UserAction action) {
    switch (action) {
        case UserAction::topic_inquiry:
            return "The user initiates an inquiry to the assistant about a certain topic, "
                   "which is usually brief and somewhat vague.";
        case UserAction::requirement_confirmation:
            return "The user effectively responds to the assistant's requirement inference, "
                   "confirming their actual requirement.";
        case UserAction::solution_discussion:
            return "In response to a proposal provided by the assistant, the user does not give "
                   "a clear positive or negative evaluation of the overall proposal, but instead "
                   "discusses specific details of the proposal with the assistant.";
        case UserAction::solution_feedback:
            return "The user expresses a clear positive approval or negative disapproval "
                   "attitude toward the proposal suggested by the assistant.";
    }
    return "";
}

std::string action_description(AssistantAction action) {
    switch (action) {
        case AssistantAction::requirement_prediction:
            return "The assistant proactively infers the user's implicit requirement behind "
                   "their inquiry, based on the user's profile or relevant experience.";
        case AssistantAction::solution_proposal:
            return "The assistant proposes a solution as a suggestion for the user, based on "
                   "the user's specific requirement under the current topic.";
        case AssistantAction::solution_discussion:
            return "The assistant responds to the user's opinions or inquiries about the current "
                   "proposal, further discussing the proposal with the user based on the user's "
                   "profile or relevant experience, and tries to persuade the user to accept "
                   "the proposal.";
        case AssistantAction::feedback_response:
            return "The assistant responds to the user's expressed positive or negative "
                   "attitude, without offering solutions beyond those already discussed; for "
                   "negative attitudes the assistant only expresses apology or regret.";
    }
    return "";
}

UserCorpus ingest_corpus(const nlohmann::json& document) {
    static const std::set<std::string> kKnown = {"user_id", "sessions", "persona"};
    if (!document.is_object()) throw schema_error("corpus document must be a JSON object");

    UserCorpus corpus;
    corpus.user_id = require_string(document, "user_id", "corpus");
    size_t index = 0;
    for (const auto& raw : document.value("sessions", nlohmann::json::array())) {
        corpus.sessions.push_back(parse_session(raw, index++));
    }
    for (size_t i = 1; i < corpus.sessions.size(); ++i) {
        if (!(corpus.sessions[i - 1].time_span.first < corpus.sessions[i].time_span.first)) {
            throw schema_error("sessions must be strictly ordered by time_span start; '" +
                               corpus.sessions[i].session_id + "' violates the order");
        }
    }
    for (size_t i = 0; i + 1 < corpus.sessions.size(); ++i) {
        if (corpus.sessions[i].dialogue.empty()) {
            throw schema_error("session " + corpus.sessions[i].session_id +
                               ": dialogue may be empty only for the trailing session");
        }
    }
    if (document.contains("persona") && !document["persona"].is_null()) {
        corpus.persona = parse_persona(document["persona"]);
    }
    corpus.annotations = collect_annotations(document, kKnown);
    return corpus;
}

UserCorpus ingest_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open corpus file '" + path + "'");
    nlohmann::json document;
    try {
        in >> document;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("corpus file '" + path + "' is not valid JSON: " + e.what());
    }
    return ingest_corpus(document);
}

nlohmann::json serialize_corpus(const UserCorpus& corpus) {
    nlohmann::json doc = corpus.annotations.is_object() ? corpus.annotations
                                                        : nlohmann::json::object();
    doc["user_id"] = corpus.user_id;
    auto sessions = nlohmann::json::array();
    for (const auto& session : corpus.sessions) {
        nlohmann::json s = session.annotations.is_object() ? session.annotations
                                                           : nlohmann::json::object();
        s["session_id"] = session.session_id;
        s["time_span"] = {session.time_span.first.to_string(), session.time_span.second.to_string()};
        auto logs = nlohmann::json::array();
        for (const auto& log : session.logs) {
            logs.push_back({{"timestamp", log.timestamp.to_string()},
                            {"type", to_string(log.log_type)},
                            {"content", log.content}});
        }
        s["logs"] = std::move(logs);
        nlohmann::json dialogue = nlohmann::json::object();
        for (const auto& turn : session.dialogue) {
            nlohmann::json u = {{"content", turn.user_utterance}};
            nlohmann::json a = {{"content", turn.assistant_utterance}};
            if (turn.user_action) u["action"] = to_string(*turn.user_action);
            if (turn.assistant_action) a["action"] = to_string(*turn.assistant_action);
            dialogue["turn_" + std::to_string(turn.turn_index)] = {{"user", u}, {"assistant", a}};
        }
        s["dialogue"] = std::move(dialogue);
        if (session.framework) {
            nlohmann::json fw = nlohmann::json::object();
            for (const auto& topic : *session.framework) {
                nlohmann::json t;
                t["user_query"] = topic.user_query;
                auto needs = nlohmann::json::array();
                for (const auto& n : topic.implicit_needs) {
                    needs.push_back({{"need", n.need}, {"evidences", n.evidences}});
                }
                t["implicit_needs"] = std::move(needs);
                t["requirement"] = topic.requirement;
                auto cands = nlohmann::json::array();
                for (const auto& c : topic.candidates) {
                    cands.push_back({{"id", c.id}, {"text", c.text}});
                }
                t["candidate_solutions"] = std::move(cands);
                t["pos_ids"] = topic.pos_ids;
                t["neg_ids"] = topic.neg_ids;
                t["preference"] = {{"pos", topic.pos_preference}, {"neg", topic.neg_preference}};
                fw[topic.topic_id] = std::move(t);
            }
            s["framework"] = std::move(fw);
        }
        sessions.push_back(std::move(s));
    }
    doc["sessions"] = std::move(sessions);
    if (corpus.persona) {
        nlohmann::json p = corpus.persona->annotations.is_object() ? corpus.persona->annotations
                                                                   : nlohmann::json::object();
        p["background"] = corpus.persona->background;
        p["personality"] = corpus.persona->personality;
        if (!corpus.persona->situations.empty()) {
            p["situations"] = corpus.persona->situations;
        }
        doc["persona"] = std::move(p);
    }
    return doc;
}

HistoryQuerySplit split_history_query(const UserCorpus& corpus) {
    if (corpus.sessions.empty()) {
        throw validation_error("split_history_query requires at least one session");
    }
    std::pair<int, int> last_month{0, 0};
    for (const auto& session : corpus.sessions) {
        last_month = std::max(last_month, {session.time_span.first.year,
                                           session.time_span.first.month});
    }
    HistoryQuerySplit split;
    for (size_t i = 0; i < corpus.sessions.size(); ++i) {
        const auto& start = corpus.sessions[i].time_span.first;
        if (std::pair<int, int>{start.year, start.month} == last_month) {
            split.query.push_back(i);
        } else {
            split.history.push_back(i);
        }
    }
    return split;
}

std::vector<LogEntry> collect_latest_logs(const UserCorpus& corpus,
                                          size_t current_session_index) {
    if (current_session_index >= corpus.sessions.size()) {
        throw validation_error("collect_latest_logs: session index out of range");
    }
    const auto& session = corpus.sessions[current_session_index];
    if (current_session_index == 0) return session.logs;
    const Timestamp prev_end =
        corpus.sessions[current_session_index - 1].time_span.second.end_of_day();
    std::vector<LogEntry> out;
    for (const auto& log : session.logs) {
        if (prev_end < log.timestamp) out.push_back(log);
    }
    // Keep local ids dense for downstream graph construction.
    for (size_t i = 0; i < out.size(); ++i) out[i].local_id = static_cast<int>(i);
    return out;
}

}  // namespace hhmem
