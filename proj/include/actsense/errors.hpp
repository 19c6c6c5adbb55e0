#pragma once

#include <stdexcept>
#include <string>

namespace actsense {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A structural invariant of a world, plan or document was violated. `field`
// is a path such as "edges[2].actions[0]".
class InvariantViolation : public Error {
public:
    InvariantViolation(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ScopeViolation : public Error {
public:
    using Error::Error;
};

class AlphabetMismatch : public Error {
public:
    using Error::Error;
};

class NotASolution : public Error {
public:
    using Error::Error;
};

class NotFinite : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class NoRepresentative : public Error {
public:
    using Error::Error;
};

class InvalidMeasure : public Error {
public:
    using Error::Error;
};

class NotACovering : public Error {
public:
    using Error::Error;
};

class SelectionOutsideCone : public Error {
public:
    using Error::Error;
};

class EmptySelection : public Error {
public:
    using Error::Error;
};

class PartitionMismatch : public Error {
public:
    using Error::Error;
};

} // namespace actsense
