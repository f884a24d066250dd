#pragma once

#include <stdexcept>
#include <string>

namespace flowmend {

/// Base for every error the engine raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int col)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}
    int line;
    int col;
};

#define FLOWMEND_ERROR(Name)                 \
    class Name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    };

FLOWMEND_ERROR(MalformedTree)
FLOWMEND_ERROR(NotAChild)
FLOWMEND_ERROR(IndexOutOfRange)
FLOWMEND_ERROR(NotAStatementList)
FLOWMEND_ERROR(SpecError)
FLOWMEND_ERROR(UnsupportedGuardShape)
FLOWMEND_ERROR(UnsupportedSanitizerShape)
FLOWMEND_ERROR(TraversalStuck)
FLOWMEND_ERROR(NotAnAncestor)
FLOWMEND_ERROR(StrategyInapplicable)
FLOWMEND_ERROR(NoTraversalFound)

#undef FLOWMEND_ERROR

class StrategyParseError : public Error {
public:
    StrategyParseError(const std::string& msg, std::size_t pos)
        : Error("at " + std::to_string(pos) + ": " + msg), pos(pos) {}
    std::size_t pos;
};

}  // namespace flowmend
