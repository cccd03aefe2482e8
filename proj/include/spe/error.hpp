#pragma once

#include <stdexcept>
#include <string>

namespace spe {

// Coarse failure classes. The CLI maps these onto exit codes.
enum class ErrorKind {
    data,       // malformed or invalid input data
    usage,      // bad arguments or preconditions supplied by the caller
    not_found,  // missing input file
    numeric,    // a metric or fit is undefined for the given values
};

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace spe
