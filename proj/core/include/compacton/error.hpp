#pragma once

#include <stdexcept>
#include <string>

namespace compacton {

/// Parameters or inputs outside an operation's domain.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to produce a trustworthy result.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace compacton
