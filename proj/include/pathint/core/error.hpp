#pragma once

#include <stdexcept>
#include <string>

namespace pathint {

/// Raised when an argument violates an operation's precondition.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A test function is supported outside the region an operation requires.
class invalid_support_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

/// Argument outside the mathematical domain of a function (e.g. K_nu(z) for z <= 0).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class singular_matrix_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class not_positive_definite_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested configuration is valid but not handled by this routine.
class unsupported_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An optimizer ended on the edge of its search interval.
class boundary_hit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Monte Carlo estimator produced a non-finite sample.
class estimator_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_input(what);
}

}  // namespace detail
}  // namespace pathint
