#ifndef ZSTAR_ERROR_HPP
#define ZSTAR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace zstar
{

enum class ErrorKind {
    InvalidIndex,
    DivergentValue,
    NotInDomain,
    OutOfDomain,
    BelowRange,
    OutOfRange,
    PrecisionInsufficient,
    InvalidNode,
    UnboundedFamily,
    NonTerminating,
    CorruptCache,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (notably the CLI) can map it onto an exit status.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &what);

    ErrorKind kind() const noexcept
    {
        return kind_;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string &what);

} // namespace zstar

#endif
