#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "lclab/errors.hpp"

namespace lclab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Strictly non-negative scalar stored as its natural logarithm, so products
/// of large powers (r^{beta Q} and friends) never overflow until the caller
/// asks for the linear value.
class LogValue {
 public:
  LogValue() : log_(kNegInf) {}  // zero

  static LogValue from_log(double lg) {
    LogValue v;
    v.log_ = lg;
    return v;
  }
  static LogValue from_value(double x) {
    if (x < 0.0 || std::isnan(x)) throw DomainError("LogValue: negative or NaN value");
    return from_log(std::log(x));
  }

  double log() const { return log_; }
  /// Linear value; may round to 0 or +inf at the API boundary.
  double value() const { return std::exp(log_); }
  bool is_zero() const { return log_ == kNegInf; }
  bool is_inf() const { return log_ == kPosInf; }

  LogValue& operator*=(LogValue o) {
    log_ += o.log_;
    return *this;
  }
  LogValue& operator/=(LogValue o) {
    log_ -= o.log_;
    return *this;
  }
  LogValue pow(double k) const { return from_log(k * log_); }

  friend LogValue operator*(LogValue a, LogValue b) { return a *= b; }
  friend LogValue operator/(LogValue a, LogValue b) { return a /= b; }
  friend bool operator<(LogValue a, LogValue b) { return a.log_ < b.log_; }
  friend bool operator>(LogValue a, LogValue b) { return a.log_ > b.log_; }

 private:
  double log_;
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// log|exp(a) - exp(b)| and the sign of the difference (0 on exact cancel).
inline std::pair<double, int> log_sub_exp(double a, double b) {
  if (a == b) return {kNegInf, 0};
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  int sign = a > b ? 1 : -1;
  return {hi + std::log1p(-std::exp(lo - hi)), sign};
}

inline double log_sum_exp(std::span<const double> logs) {
  double m = kNegInf;
  for (double x : logs) m = std::max(m, x);
  if (m == kNegInf || m == kPosInf) return m;
  double s = 0.0;
  for (double x : logs) s += std::exp(x - m);
  return m + std::log(s);
}

/// Pairwise (cascade) summation: deterministic for a fixed input order and
/// better conditioned than a running sum.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 4) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double relative_diff(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace lclab
