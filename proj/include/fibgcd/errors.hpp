#pragma once

#include <stdexcept>
#include <string>

namespace fibgcd {

/// An argument violated a documented precondition (CLI exit code 2).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured cap was exceeded or a value no longer fits in 64 bits
/// (CLI exit code 3).
class capacity_error : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Raised when a result contradicts a known theorem; always a bug.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace fibgcd
