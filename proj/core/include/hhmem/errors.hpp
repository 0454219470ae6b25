#pragma once

#include <stdexcept>
#include <string>

namespace hhmem {

// Error taxonomy shared across the library. The CLI maps kinds onto exit
// codes: parse/schema/validation/store -> 1, backend -> 2, config -> 3.
enum class ErrorKind {
    parse,       // malformed input data (timestamps, JSON, ...)
    schema,      // input violates the documented corpus/LLM-output schema
    validation,  // internal consistency check failed (totality, arity, ...)
    backend,     // transport or LLM-output failure after retries
    store,       // snapshot persistence problems
    config,      // bad configuration, protocol misuse, unknown strategy
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
            case ErrorKind::parse:
            case ErrorKind::schema:
            case ErrorKind::validation:
            case ErrorKind::store:
                return 1;
            case ErrorKind::backend:
                return 2;
            case ErrorKind::config:
                return 3;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

inline Error parse_error(const std::string& msg) { return Error(ErrorKind::parse, msg); }
inline Error schema_error(const std::string& msg) { return Error(ErrorKind::schema, msg); }
inline Error validation_error(const std::string& msg) { return Error(ErrorKind::validation, msg); }
inline Error backend_error(const std::string& msg) { return Error(ErrorKind::backend, msg); }
inline Error store_error(const std::string& msg) { return Error(ErrorKind::store, msg); }
inline Error config_error(const std::string& msg) { return Error(ErrorKind::config, msg); }

}  // namespace hhmem
