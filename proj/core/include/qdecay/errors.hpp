#pragma once

#include <stdexcept>
#include <string>

namespace qdecay {

// Input violates a documented precondition (non-unitary matrix, bad norm, ...).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A requested size exceeds a documented compute cap.
class SizeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

// Argument outside the mathematical domain of a builder or formula.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

} // namespace qdecay
