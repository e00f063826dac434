#pragma once

#include <stdexcept>
#include <string>

namespace hbc {

enum class ErrorKind {
    Input,     // malformed vectors, dimension mismatch, bad files
    Budget,    // batch does not fit the chosen construction
    Limit,     // soft resource cap hit without force
    Internal,  // contract breach inside an algorithm; indicates a bug
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool cond, ErrorKind k, const std::string& msg) {
    if (!cond) fail(k, msg);
}

}  // namespace hbc
