#pragma once

#include <stdexcept>
#include <string>

namespace stirval {

/// Argument outside an operation's domain (n = 0, k > n, p < 2, prefix mismatch).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input exceeds a configured exact-arithmetic size cap.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Modular precision could not pin the answer within the configured budget.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two independent engines produced different answers for the same input.
class DiscrepancyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace stirval
