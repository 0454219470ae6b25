#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hhmem/json_schema.hpp"
#include "hhmem/prompts.hpp"

namespace hhmem {

struct SamplingParams {
    std::optional<double> temperature;  // nullopt = backend default
    std::optional<int> max_tokens;
    std::optional<unsigned> seed;       // honored where the backend supports it
};

struct CompletionRequest {
    std::string template_id;
    std::map<std::string, std::string> bindings;
    SamplingParams sampling;
};

struct CompletionResult {
    std::string raw_text;
    nlohmann::json parsed;
    int attempts = 0;
};

// Per-call metadata handed to backends; the mock backend derives its
// deterministic replies from it.
struct CallMeta {
    std::string template_id;
    const std::map<std::string, std::string>* bindings = nullptr;
    std::uint64_t bindings_hash = 0;
    int attempt = 1;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const std::string& prompt, const SamplingParams& sampling,
                                 const CallMeta& meta) = 0;
    // Live backends get rate limiting and concurrency caps; pure local
    // backends bypass them.
    virtual bool is_live() const { return true; }
};

struct TranscriptRecord {
    std::string template_id;
    std::uint64_t bindings_hash = 0;
    int attempt = 1;
    std::string raw;
    std::optional<nlohmann::json> parsed;
    std::optional<std::string> error;
    std::string rendered_prompt;

    nlohmann::json to_json() const;
};

struct GatewayLimits {
    int max_concurrent_requests = 4;
    double requests_per_second = 10.0;
    int transport_retries = 3;
    int backoff_initial_ms = 200;
};

// Sole entry point for chat completions. Every structured call goes through
// complete_validated: render -> complete -> extract JSON -> validate, with a
// bounded regeneration budget. All attempts are transcribed.
class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<ChatBackend> backend, GatewayLimits limits = {});

    CompletionResult complete_validated(const CompletionRequest& request,
                                        const JsonSchema& schema, int retry_budget);

    // Uses the template's registered output schema.
    CompletionResult complete_validated(const CompletionRequest& request, int retry_budget);

    // Unvalidated free-text completion (still transcribed, one attempt).
    std::string complete_text(const CompletionRequest& request);

    std::vector<TranscriptRecord> transcript() const;
    void clear_transcript();
    // Optional JSON-lines sink, one record per attempt.
    void set_transcript_path(const std::string& path);

    // Count of transcript records whose template_id matches exactly.
    size_t calls_to(const std::string& template_id) const;

private:
    std::string call_backend(const std::string& prompt, const CompletionRequest& request,
                             const CallMeta& meta);
    void record(TranscriptRecord rec);

    std::shared_ptr<ChatBackend> backend_;
    GatewayLimits limits_;
    mutable std::mutex mutex_;
    std::vector<TranscriptRecord> transcript_;
    std::string transcript_path_;

    // Token bucket for live backends.
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
    int in_flight_ = 0;
};

}  // namespace hhmem
