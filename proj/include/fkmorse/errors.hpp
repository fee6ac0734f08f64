#ifndef FKMORSE_ERRORS_HPP
#define FKMORSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fkmorse {

// Precondition failures: index out of range, dimension mismatch, bad cell.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A computation needed a cell outside the configured (max_dim, max_length) box.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal consistency check failed. Always a bug or an invalid matching.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace fkmorse

#endif
