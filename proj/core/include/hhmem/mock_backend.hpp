#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hhmem/gateway.hpp"

namespace hhmem {

// Deterministic offline backend. Replies are a pure function of
// (template_id, bindings, attempt): scripted fixtures take precedence,
// otherwise a generative fallback fabricates schema-valid output from the
// binding contents (lexical overlap, keyword aspects, token hashes).
class MockBackend : public ChatBackend {
public:
    // Scripted replies for a template regardless of bindings; attempt n
    // beyond the list reuses the last entry.
    void script(const std::string& template_id, std::vector<std::string> responses);
    // Scripted replies for one exact binding set.
    void script_for(const std::string& template_id, std::uint64_t bindings_hash,
                    std::vector<std::string> responses);

    std::string complete(const std::string& prompt, const SamplingParams& sampling,
                         const CallMeta& meta) override;
    bool is_live() const override { return false; }

private:
    std::string generate(const CallMeta& meta) const;

    std::map<std::pair<std::string, std::uint64_t>, std::vector<std::string>> scripted_exact_;
    std::map<std::string, std::vector<std::string>> scripted_;
};

}  // namespace hhmem
