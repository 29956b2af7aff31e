#pragma once

#include <stdexcept>
#include <string>

namespace lclab {

/// Invalid argument outside an operation's domain (non-positive radius,
/// parameter constraint violation, malformed descriptor, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Endpoint { none, zero, infinity };

inline const char* endpoint_name(Endpoint e) {
  switch (e) {
    case Endpoint::zero: return "0";
    case Endpoint::infinity: return "inf";
    default: return "none";
  }
}

/// A required integral diverges; `where` names the offending endpoint.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(Endpoint where, const std::string& what)
      : std::runtime_error(what), where_(where) {}
  Endpoint where() const { return where_; }

 private:
  Endpoint where_;
};

/// Adaptive quadrature could not reach the requested tolerance. Carries the
/// best available estimate (as a natural log) and its relative error.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(double best_log_value, double rel_error, const std::string& what)
      : std::runtime_error(what), best_log_value_(best_log_value), rel_error_(rel_error) {}
  double best_log_value() const { return best_log_value_; }
  double rel_error() const { return rel_error_; }

 private:
  double best_log_value_;
  double rel_error_;
};

}  // namespace lclab
