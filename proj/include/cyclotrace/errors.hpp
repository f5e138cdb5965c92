#pragma once

#include <stdexcept>
#include <string>

namespace cyclotrace {

struct NonPrimeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct FieldTooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ExtensionTooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BadCongruenceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ZeroPolynomialError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BothZeroError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegreeTooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TooManyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct FamilyTooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EmptyFamilyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonIntegralGenusError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
// An exact identity failed to reduce to a rational integer; signals an
// implementation fault, never bad user input.
struct NonIntegerResultError : std::logic_error {
    using std::logic_error::logic_error;
};
struct RhViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SupportViolationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OutOfRangeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnsupportedDirectEvalError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace cyclotrace
