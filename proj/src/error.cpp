#include <zstar/error.hpp>

namespace zstar
{

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::InvalidIndex:
            return "InvalidIndex";
        case ErrorKind::DivergentValue:
            return "DivergentValue";
        case ErrorKind::NotInDomain:
            return "NotInDomain";
        case ErrorKind::OutOfDomain:
            return "OutOfDomain";
        case ErrorKind::BelowRange:
            return "BelowRange";
        case ErrorKind::OutOfRange:
            return "OutOfRange";
        case ErrorKind::PrecisionInsufficient:
            return "PrecisionInsufficient";
        case ErrorKind::InvalidNode:
            return "InvalidNode";
        case ErrorKind::UnboundedFamily:
            return "UnboundedFamily";
        case ErrorKind::NonTerminating:
            return "NonTerminating";
        case ErrorKind::CorruptCache:
            return "CorruptCache";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

void raise(ErrorKind kind, const std::string &what)
{
    throw Error(kind, what);
}

} // namespace zstar
