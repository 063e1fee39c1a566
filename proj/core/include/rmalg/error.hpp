#pragma once

#include <stdexcept>
#include <string>

namespace rmalg {

// Error taxonomy mirrored by the CLI exit codes: parse/domain -> 2,
// compile -> 3, numeric -> 4.
enum class ErrorKind { Parse, Domain, Compile, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

}  // namespace rmalg
