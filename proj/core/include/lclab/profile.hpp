#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lclab/group.hpp"
#include "lclab/numeric.hpp"

namespace lclab {

/// One multiplicative term exp(sign * e^{log_abs_coeff} * r^{power}) of a
/// profile's endpoint model. Coefficients are kept as (log, sign) so that
/// knot^m-sized factors never overflow.
struct ExpTerm {
  double log_abs_coeff = kNegInf;
  int sign = 0;
  double power = 0.0;

  double eval(double log_r) const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_abs_coeff + power * log_r);
  }
  static ExpTerm from_coeff(double coeff, double power) {
    ExpTerm t;
    t.sign = coeff > 0 ? 1 : (coeff < 0 ? -1 : 0);
    t.log_abs_coeff = coeff == 0 ? kNegInf : std::log(std::abs(coeff));
    t.power = power;
    return t;
  }
  double coeff() const { return sign * std::exp(log_abs_coeff); }
};

/// Endpoint model of ln f:
///   ln f(r) = log_coeff + exponent * ln r + sum_j terms_j(ln r),
/// valid on (0, boundary] for a head and on [boundary, inf) for a tail.
/// `exact` means the identity holds to machine precision on its range;
/// otherwise it is an asymptote the quadrature engine must reconcile.
struct LogExpansion {
  double log_coeff = 0.0;
  double exponent = 0.0;
  std::vector<ExpTerm> terms;
  double boundary = 0.0;
  bool exact = true;

  double eval_log(double r) const {
    double lr = std::log(r);
    double s = log_coeff + exponent * lr;
    for (const auto& t : terms) s += t.eval(lr);
    return s;
  }
};

class ProfileImpl;
using ProfilePtr = std::shared_ptr<const ProfileImpl>;

struct PowerPiece {
  double log_coeff = 0.0;  // kNegInf encodes a zero piece
  double exponent = 0.0;
};

/// Strictly positive radial function with a closed-form natural log,
/// declared breakpoints, and endpoint models at 0 and infinity. Immutable
/// value type; cheap to copy and safe to share between threads.
class RadialProfile {
 public:
  RadialProfile();  // constant 1

  static RadialProfile constant(double value);
  static RadialProfile power_law(double exponent);                       // r^c
  static RadialProfile monomial(double log_coeff, double exponent);      // C r^e
  static RadialProfile ball_power(double a, const HomogeneousGroup& g);  // |B(0,r)|^a
  static RadialProfile exp_power(double eta, double gamma);              // exp(eta r^gamma)
  /// inner_value on [0, r0], tail_mult * r^{-gamma} on (r0, inf).
  /// tail_mult = 0 gives the characteristic function of [0, r0].
  static RadialProfile cutoff_power_tail(double r0, double inner_value, double gamma,
                                         double tail_mult = 1.0);
  static RadialProfile piecewise_power(std::vector<double> knots,
                                       std::vector<PowerPiece> pieces);
  static RadialProfile product(std::vector<RadialProfile> factors);
  /// (sum_i |B(0,r)|^{a_i})^k
  static RadialProfile sum_power(const std::vector<double>& a, const HomogeneousGroup& g,
                                 int k);
  /// (sum_i C_i r^{e_i})^k with positive C_i.
  static RadialProfile power_sum(std::vector<PowerPiece> terms, double k);
  /// Log-log linear interpolation through (nodes, values); extrapolates by
  /// the endpoint slopes. Nodes strictly increasing, values positive.
  static RadialProfile sampled(std::vector<double> nodes, std::vector<double> values);

  static RadialProfile from_impl(ProfilePtr impl);

  double log_eval(double r) const;
  double operator()(double r) const { return std::exp(log_eval(r)); }

  const std::vector<double>& breakpoints() const;
  LogExpansion head() const;
  LogExpansion tail() const;

  /// m r^{-m} \int_0^r s^{m-1} ln f(s) ds when a closed form exists.
  std::optional<double> closed_scaled_ln_mean(double r, double m) const;
  /// (log_coeff, exponent) when the profile is exactly C r^e.
  std::optional<PowerPiece> as_monomial() const;
  /// (eta, gamma) when the profile is exactly exp(eta r^gamma).
  std::optional<std::pair<double, double>> as_exp_power() const;

  RadialProfile inverted() const;              // r -> f(1/r)
  RadialProfile substituted(double s) const;   // r -> f(r^s), s > 0
  RadialProfile powered(double k) const;       // f^k
  RadialProfile scaled(double factor) const;   // factor * f, factor > 0

  const ProfilePtr& impl() const { return impl_; }

 private:
  explicit RadialProfile(ProfilePtr impl);
  ProfilePtr impl_;
};

RadialProfile operator*(const RadialProfile& a, const RadialProfile& b);

/// Implementation interface. Subclassed outside profile.cpp for lazy
/// profiles (exponential means) that need the quadrature engine.
class ProfileImpl : public std::enable_shared_from_this<ProfileImpl> {
 public:
  virtual ~ProfileImpl() = default;
  virtual double log_eval(double r) const = 0;
  virtual const std::vector<double>& breakpoints() const;
  virtual LogExpansion head() const = 0;
  virtual LogExpansion tail() const = 0;
  virtual std::optional<double> closed_scaled_ln_mean(double r, double m) const;
  virtual std::optional<PowerPiece> as_monomial() const;
  virtual std::optional<std::pair<double, double>> as_exp_power() const;
  virtual ProfilePtr invert() const;
  virtual ProfilePtr substitute(double s) const;
  virtual ProfilePtr power(double k) const;

 protected:
  static const std::vector<double> kNoBreakpoints;
};

namespace detail {
/// Shared helper: m r^{-m} \int_a^b s^{m-1} (logC + e ln s) ds, 0 <= a <= b <= r.
double scaled_piece_moment(double r, double m, double a, double b, double log_coeff,
                           double exponent);
/// Generic wrapper r -> f(1/r) for impls with no structural inverse.
ProfilePtr make_inverted(ProfilePtr base);
}  // namespace detail

}  // namespace lclab
