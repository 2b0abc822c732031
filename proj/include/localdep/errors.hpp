#pragma once

#include <stdexcept>
#include <string>

namespace localdep {

/// Input data that cannot form a valid sample (parse failures, non-finite
/// values, too few rows).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An estimator was called outside its domain (bad ε/δ/k, degenerate data).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace localdep
