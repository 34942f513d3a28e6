#pragma once

#include <stdexcept>
#include <string>

namespace bezmod {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operands belong to different backends.
class BackendMismatch : public Error {
public:
    explicit BackendMismatch(const std::string& msg) : Error(msg) {}
};

// Operand outside the contract of an operation (zero where nonzero is
// required, reducible element where a prime is required, and so on).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// The requested operation is not available for the selected backend.
class CapabilityError : public Error {
public:
    explicit CapabilityError(const std::string& msg) : Error(msg) {}
};

// A documented computational limit was exceeded (factorization search
// bounds, system size caps, DNF caps).
class LimitError : public Error {
public:
    explicit LimitError(const std::string& msg) : Error(msg) {}
};

// Text input rejected; `pos` is a 0-based offset into the input when
// one is known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg), pos(0) {}
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), pos(pos) {}
    std::size_t pos;
};

} // namespace bezmod
