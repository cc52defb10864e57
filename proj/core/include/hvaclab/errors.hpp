#pragma once

#include <stdexcept>
#include <string>

namespace hvaclab {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector lengths disagree (actions vs rooms, parsed list vs expected n).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Bad scenario / experiment / dataset configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Invalid scalar input (non-finite number, empty text, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

// Operation illegal in the current lifecycle state (e.g. stepping a finished episode).
class StateError : public Error {
 public:
  using Error::Error;
};

// Could not extract the expected structure from free-form text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Endpoint replied, but not with the protocol we speak.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Endpoint unreachable after all retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Prompt cannot be reduced under the character budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hvaclab
