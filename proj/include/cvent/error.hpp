#pragma once

#include <stdexcept>
#include <string>

namespace cvent {

/// Input that cannot describe a covariance matrix at all (non-symmetric, wrong shape, bad JSON).
class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Well-formed input outside the domain of an operation (unphysical CM, violated parameter constraint).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The operation is only defined for a subclass of states (e.g. symmetric closed forms).
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cvent
