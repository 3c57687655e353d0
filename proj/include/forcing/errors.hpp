#pragma once

#include <stdexcept>
#include <string>

namespace forcing {

/// A precondition or a type invariant was violated. The message names the
/// violated invariant.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested computation exceeds the sizes supported by every available
/// strategy.
class UnsupportedSize : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace forcing
