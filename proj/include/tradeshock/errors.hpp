#ifndef TRADESHOCK_ERRORS_HPP
#define TRADESHOCK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tradeshock {

/// Failure categories surfaced by the library. The C API maps these 1:1 to
/// ts_status codes.
enum class errc {
    io = 1,
    format,               // malformed CSV header
    row,                  // malformed data rows (message lists line numbers)
    argument,
    empty_year,
    dimension,
    non_finite,
    diverged,             // non-finite values produced mid-iteration
    singular,             // equilibrium solve not invertible / non-unique
    degenerate_baseline,  // zero total income where a positive one is required
    exhausted,            // every node deleted without crossing the stop threshold
    internal,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

} // namespace tradeshock

#endif
