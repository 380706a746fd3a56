#pragma once

#include <stdexcept>
#include <string>

namespace svc {

// Parameter or precondition violation. Maps to CLI exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two routes that must agree (closed forms, unimodularity) did not.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Closed form and brute-force product disagree beyond tolerance. Exit code 3.
class OracleMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing a file failed, or a grid file is malformed. Exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fit had nothing usable to fit (no maxima, everything underflowed).
class DegenerateFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace svc
