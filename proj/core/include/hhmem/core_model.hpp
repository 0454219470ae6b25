#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hhmem/timeutil.hpp"

namespace hhmem {

// The eight predefined behavior-log types.
enum class LogType {
    web_search,
    content_publishing,
    content_browsing,
    message_sending,
    message_receiving,
    schedule_management,
    transaction_record,
    device_operation,
};

LogType parse_log_type(const std::string& name, const std::string& context);
std::string to_string(LogType type);

enum class UserAction {
    topic_inquiry,
    requirement_confirmation,
    solution_discussion,
    solution_feedback,
};

enum class AssistantAction {
    requirement_prediction,
    solution_proposal,
    solution_discussion,
    feedback_response,
};

UserAction parse_user_action(const std::string& name, const std::string& context);
AssistantAction parse_assistant_action(const std::string& name, const std::string& context);
std::string to_string(UserAction action);
std::string to_string(AssistantAction action);
std::string action_description(UserAction action);
std::string action_description(AssistantAction action);

struct LogEntry {
    Timestamp timestamp;
    LogType log_type = LogType::web_search;
    std::string content;
    int local_id = 0;  // dense from 0 within the session
};

struct DialogueTurn {
    int turn_index = 0;  // dense from 1
    std::string user_utterance;
    std::string assistant_utterance;
    std::optional<UserAction> user_action;
    std::optional<AssistantAction> assistant_action;
};

struct ImplicitNeed {
    std::string need;
    std::vector<std::string> evidences;
};

struct CandidateSolution {
    std::string id;
    std::string text;
};

// One topic of the evaluation framework: exactly 2 implicit needs, 8
// candidate solutions, 2 positive and 2 negative ids (disjoint).
struct FrameworkTopic {
    std::string topic_id;
    std::string user_query;
    std::vector<ImplicitNeed> implicit_needs;
    std::string requirement;
    std::vector<CandidateSolution> candidates;
    std::vector<std::string> pos_ids;
    std::vector<std::string> neg_ids;
    std::string pos_preference;
    std::string neg_preference;
};

using GroundTruthFramework = std::vector<FrameworkTopic>;

struct Session {
    std::string session_id;
    std::pair<Date, Date> time_span;
    std::vector<LogEntry> logs;
    std::vector<DialogueTurn> dialogue;
    std::optional<GroundTruthFramework> framework;
    nlohmann::json annotations;  // unknown input fields, preserved opaquely
};

// Ground-truth persona; evaluation-only, never fed into memory construction.
struct Persona {
    std::string background;
    std::string personality;
    // Optional per-session situation texts keyed by session_id.
    std::map<std::string, std::string> situations;
    nlohmann::json annotations;

    std::string situation_for(const std::string& session_id) const {
        auto it = situations.find(session_id);
        return it == situations.end() ? std::string() : it->second;
    }
};

struct UserCorpus {
    std::string user_id;
    std::vector<Session> sessions;  // strictly ordered by time_span start
    std::optional<Persona> persona;
    nlohmann::json annotations;
};

// Parses and validates one corpus document (see the schema in README).
UserCorpus ingest_corpus(const nlohmann::json& document);
UserCorpus ingest_corpus_file(const std::string& path);

// Inverse of ingestion; ingest(serialize(c)) == c on all modeled fields.
nlohmann::json serialize_corpus(const UserCorpus& corpus);

struct HistoryQuerySplit {
    std::vector<size_t> history;  // session indices, corpus order
    std::vector<size_t> query;
};

// Query set = all sessions starting in the final calendar month present;
// everything earlier is history. Session order is preserved in both parts.
HistoryQuerySplit split_history_query(const UserCorpus& corpus);

// Logs of session `current_session_index` collected after the previous
// session's dialogue ended (end of the previous span) and before the
// current dialogue begins. With non-interleaved corpora this is the whole
// log list of the session.
std::vector<LogEntry> collect_latest_logs(const UserCorpus& corpus, size_t current_session_index);

}  // namespace hhmem
