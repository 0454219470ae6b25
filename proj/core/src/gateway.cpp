#include "hhmem/gateway.hpp"

#include <chrono>
#include <condition_variable>
#include <fstream>
#include <thread>

#include "hhmem/errors.hpp"
#include "hhmem/hashing.hpp"

namespace hhmem {

namespace {

char hex_digit(unsigned v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }

}  // namespace

std::string to_hex(std::uint64_t value) {
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = hex_digit(static_cast<unsigned>(value & 0xf));
        value >>= 4;
    }
    return out;
}

nlohmann::json TranscriptRecord::to_json() const {
    nlohmann::json j = {
        {"template_id", template_id},
        {"bindings_hash", to_hex(bindings_hash)},
        {"attempt", attempt},
        {"raw", raw},
    };
    if (parsed) j["parsed"] = *parsed;
    if (error) j["error"] = *error;
    return j;
}

LlmGateway::LlmGateway(std::shared_ptr<ChatBackend> backend, GatewayLimits limits)
    : backend_(std::move(backend)),
      limits_(limits),
      tokens_(limits.requests_per_second),
      last_refill_(std::chrono::steady_clock::now()) {
    if (!backend_) throw config_error("gateway requires a backend");
}

std::string LlmGateway::call_backend(const std::string& prompt, const CompletionRequest& request,
                                     const CallMeta& meta) {
    if (backend_->is_live()) {
        // Rate limit: refill the bucket, then wait for a token and a
        // concurrency slot.
        std::unique_lock lock(mutex_);
        for (;;) {
            const auto now = std::chrono::steady_clock::now();
            const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
            last_refill_ = now;
            tokens_ = std::min(limits_.requests_per_second,
                               tokens_ + elapsed * limits_.requests_per_second);
            if (tokens_ >= 1.0 && in_flight_ < limits_.max_concurrent_requests) {
                tokens_ -= 1.0;
                ++in_flight_;
                break;
            }
            lock.unlock();
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
            lock.lock();
        }
        lock.unlock();

        std::string result;
        std::exception_ptr failure;
        int backoff = limits_.backoff_initial_ms;
        for (int attempt = 0; attempt < std::max(1, limits_.transport_retries); ++attempt) {
            try {
                result = backend_->complete(prompt, request.sampling, meta);
                failure = nullptr;
                break;
            } catch (const Error& e) {
                failure = std::current_exception();
                if (e.kind() != ErrorKind::backend) break;
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
                backoff *= 2;
            }
        }
        {
            std::lock_guard guard(mutex_);
            --in_flight_;
        }
        if (failure) std::rethrow_exception(failure);
        return result;
    }
    return backend_->complete(prompt, request.sampling, meta);
}

void LlmGateway::record(TranscriptRecord rec) {
    std::lock_guard guard(mutex_);
    if (!transcript_path_.empty()) {
        std::ofstream out(transcript_path_, std::ios::app);
        out << rec.to_json().dump() << "\n";
    }
    transcript_.push_back(std::move(rec));
}

CompletionResult LlmGateway::complete_validated(const CompletionRequest& request,
                                                const JsonSchema& schema, int retry_budget) {
    if (retry_budget < 1) throw config_error("retry budget must be >= 1");
    const std::string prompt = render_prompt(request.template_id, request.bindings);
    const std::uint64_t bhash = hash_bindings(request.bindings);

    std::string last_raw;
    std::string last_error;
    for (int attempt = 1; attempt <= retry_budget; ++attempt) {
        CallMeta meta{request.template_id, &request.bindings, bhash, attempt};
        const std::string raw = call_backend(prompt, request, meta);
        last_raw = raw;

        TranscriptRecord rec;
        rec.template_id = request.template_id;
        rec.bindings_hash = bhash;
        rec.attempt = attempt;
        rec.raw = raw;
        rec.rendered_prompt = prompt;

        nlohmann::json parsed;
        try {
            parsed = extract_json(raw);
        } catch (const Error& e) {
            last_error = e.what();
            rec.error = last_error;
            record(std::move(rec));
            continue;  // non-JSON payload counts as one failed attempt
        }
        if (auto err = schema.validate(parsed)) {
            last_error = *err;
            rec.error = last_error;
            record(std::move(rec));
            continue;
        }
        rec.parsed = parsed;
        record(std::move(rec));
        return CompletionResult{raw, std::move(parsed), attempt};
    }
    throw backend_error("template '" + request.template_id + "': output failed validation after " +
                        std::to_string(retry_budget) + " attempts (" + last_error +
                        "); last response: " + last_raw);
}

CompletionResult LlmGateway::complete_validated(const CompletionRequest& request,
                                                int retry_budget) {
    const auto& tmpl = PromptRegistry::instance().get(request.template_id);
    return complete_validated(request, tmpl.output_schema, retry_budget);
}

std::string LlmGateway::complete_text(const CompletionRequest& request) {
    const std::string prompt = render_prompt(request.template_id, request.bindings);
    const std::uint64_t bhash = hash_bindings(request.bindings);
    CallMeta meta{request.template_id, &request.bindings, bhash, 1};
    const std::string raw = call_backend(prompt, request, meta);
    TranscriptRecord rec;
    rec.template_id = request.template_id;
    rec.bindings_hash = bhash;
    rec.attempt = 1;
    rec.raw = raw;
    rec.rendered_prompt = prompt;
    record(std::move(rec));
    return raw;
}

std::vector<TranscriptRecord> LlmGateway::transcript() const {
    std::lock_guard guard(mutex_);
    return transcript_;
}

void LlmGateway::clear_transcript() {
    std::lock_guard guard(mutex_);
    transcript_.clear();
}

void LlmGateway::set_transcript_path(const std::string& path) {
    std::lock_guard guard(mutex_);
    transcript_path_ = path;
}

size_t LlmGateway::calls_to(const std::string& template_id) const {
    std::lock_guard guard(mutex_);
    size_t count = 0;
    for (const auto& rec : transcript_) {
        if (rec.template_id == template_id) ++count;
    }
    return count;
}

}  // namespace hhmem
