#pragma once

#include <stdexcept>

namespace textanon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied settings: bad ratios, bad template parameters,
// model/config fingerprint mismatch. Maps to exit status 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input: corpus rows, model files, lexicons, tag sequences.
// Maps to exit status 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite values during numeric work, e.g. a diverging training run.
// Maps to exit status 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace textanon
