#pragma once

#include <stdexcept>
#include <string>

namespace gravicaustic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lexical or syntax error while parsing a mirror expression.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

// Non-finite value, domain violation or non-differentiable point during
// mirror evaluation.
struct EvalError : Error {
    using Error::Error;
};

// Root refinement exhausted max_iter; carries the last bracket.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, double lo_, double hi_)
        : Error(msg), lo(lo_), hi(hi_) {}
    double lo;
    double hi;
};

} // namespace gravicaustic
