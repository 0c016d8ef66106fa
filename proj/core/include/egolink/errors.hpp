#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace egolink {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The sampled block carries no information (e.g. an all-zero in-sample block).
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

// A quantity that is mathematically undefined for the input (e.g. the
// numerical rank of an empty graph).
class UndefinedValue : public Error {
 public:
  using Error::Error;
};

// A ranking metric with no comparable pairs.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

// Rank selection found no held-out row with a defined AUC.
class DegenerateCv : public Error {
 public:
  using Error::Error;
};

// Malformed experiment specification or command-line configuration.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input file. line() is 1-based, 0 when the error is
// not tied to a particular line.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace egolink
