#pragma once

#include <stdexcept>
#include <string>

namespace kqd {

// Bad inputs: wrong sites, malformed configs, broken invariants in user data.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Failures of the computation itself: empty retained subspace, fits that
// never pass, dimensions over budget.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace kqd
