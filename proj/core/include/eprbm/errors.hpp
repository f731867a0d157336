#pragma once

#include <stdexcept>
#include <string>

namespace eprbm {

// Mismatched vector/matrix shapes or a model that is not in the EPR layout.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact enumeration requested for a machine with too many units.
class TooLargeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A statistic needs samples that the dataset does not contain.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dataset, model or config file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eprbm
