#pragma once

#include <stdexcept>
#include <string>

namespace nchodge {

/// Violated precondition or malformed input supplied by the caller.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the analytic domain of an operation (u = 0, branch cut, q = 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive integration gave up; `position` is the arclength where it stopped.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, double position)
      : std::runtime_error(what), position_(position) {}
  double position() const noexcept { return position_; }

 private:
  double position_;
};

/// Descent data that cannot be turned into gluing data (acyclicity fails).
class NotConvertibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A u-window exceeded its cap; carries the window that would be needed.
class WindowOverflow : public std::range_error {
 public:
  WindowOverflow(const std::string& what, int required_min, int required_max)
      : std::range_error(what), required_min_(required_min), required_max_(required_max) {}
  int required_min() const noexcept { return required_min_; }
  int required_max() const noexcept { return required_max_; }

 private:
  int required_min_;
  int required_max_;
};

/// A linear system in the formal-arc recursion had no solution.
class UnsolvableOrder : public std::runtime_error {
 public:
  UnsolvableOrder(const std::string& what, int order) : std::runtime_error(what), order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// A numerical self-check that must hold did not.
class SelfCheckError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nchodge
