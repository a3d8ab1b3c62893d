#pragma once

#include <stdexcept>
#include <string>

namespace supportsum {

// Root of every error raised by the library. Callers that only need to
// report a failure can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No passage survived segmentation.
class EmptySource : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Evaluation was requested for a document without reference summaries.
class MissingReference : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A set-overlap metric was asked to compare an empty token set.
class EmptyPassage : public Error {
public:
    using Error::Error;
};

// A reference summary cannot yield a single n-gram of the requested order.
class DegenerateReference : public Error {
public:
    using Error::Error;
};

// Fewer informative (non-zero difference) pairs than the normal
// approximation of the signed-rank test needs.
class TooFewPairs : public Error {
public:
    using Error::Error;
};

// Parameter outside its documented range, or a malformed configuration.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace supportsum
