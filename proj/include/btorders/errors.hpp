#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bto {

// All recoverable failures carry a short machine-readable code ("NotPrime",
// "NotFullRank", ...) next to the human message. The CLI maps codes to exit
// codes; tests match on them.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

inline void check(bool ok, const std::string& code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

} // namespace bto
