#pragma once

#include <stdexcept>
#include <string>

namespace crowds {

// Input text violates one of the documented file formats.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value violates a documented precondition (bad threshold, bad bounds, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A node id was looked up that is not part of the graph.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable output).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace crowds
