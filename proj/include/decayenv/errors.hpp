#pragma once

#include <stdexcept>
#include <string>

namespace decayenv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (out-of-range parameter, bad grid size, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The requested norm cannot be evaluated on this representation, or has no supported dual.
class UnsupportedNorm : public Error {
public:
    using Error::Error;
};

/// A net or search would exceed its dimension or point budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// The vector system does not span the space.
class NotAFrame : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string &what) {
    if (!ok) throw InvalidArgument(what);
}

} // namespace detail
} // namespace decayenv
