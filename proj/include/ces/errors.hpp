#pragma once

#include <stdexcept>
#include <string>

namespace ces {

// Base of every error raised by the library. Callers that only need to
// distinguish "our" failures from foreign ones can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A charge profile that discharges energy it never stored.
class MalformedProfileError : public Error {
 public:
  using Error::Error;
};

// Profile / tariff / grid lengths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A pricing function was evaluated outside its usage domain. Inside the
// engine this indicates a broken feasibility guard.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: non-positive limits, L > U, unequal U/L ratios.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class CannotEstimateError : public Error {
 public:
  using Error::Error;
};

// Online protocol violations, e.g. a request id processed twice.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Offline oracle refused an instance above its size caps.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// Malformed external input (scenario JSON, CSV fixtures, generator args).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace ces
