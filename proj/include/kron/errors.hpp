#pragma once

#include <stdexcept>

namespace kron {

/// An internal invariant broke, e.g. a character sum failed to divide by k!.
class consistency_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A theorem-backed check came out false. This never indicates bad input;
/// it means the implementation itself is wrong somewhere.
class falsification_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem or serialization failure.
class io_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kron
