#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input-shaped problems: bad words, bad presentations, unparsable files.
class InputError : public Error {
 public:
  using Error::Error;
};

class MalformedWord : public InputError {
 public:
  using InputError::InputError;
};

class MalformedPresentation : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// Arithmetic requested on a presentation that never passed consistency_check.
class StateError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, uint64_t used, std::string unscanned = {})
      : Error(what), used_(used), unscanned_(std::move(unscanned)) {}
  uint64_t used() const { return used_; }
  const std::string& unscanned() const { return unscanned_; }

 private:
  uint64_t used_;
  std::string unscanned_;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class Undefined : public Error {
 public:
  using Error::Error;
};

class InvarianceError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace pf
