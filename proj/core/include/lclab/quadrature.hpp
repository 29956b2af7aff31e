#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lclab/errors.hpp"
#include "lclab/group.hpp"
#include "lclab/numeric.hpp"
#include "lclab/profile.hpp"

namespace lclab {

enum class TailPolicy { analytic_power_tail, truncate_with_bound };

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
  double r_min_hint = 1e-8;
  double r_max_hint = 1e8;
  TailPolicy tail_policy = TailPolicy::analytic_power_tail;

  void validate() const;
};

struct IntegralResult {
  LogValue value;
  double rel_error = 0.0;
  bool divergent = false;
  Endpoint endpoint = Endpoint::none;
  std::string diagnosis;

  bool finite() const { return !divergent; }
};

/// Positive integrand prod_i f_i(r)^{k_i}, assembled so that endpoint models
/// combine exactly (matching exponential terms cancel instead of being
/// evaluated as huge logs).
class RadialIntegrand {
 public:
  struct Term {
    RadialProfile profile;
    double power = 1.0;
  };

  RadialIntegrand() = default;
  explicit RadialIntegrand(std::vector<Term> terms);

  double log_eval(double r) const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const LogExpansion& head() const { return head_; }
  const LogExpansion& tail() const { return tail_; }

 private:
  std::vector<Term> terms_;
  std::vector<double> breakpoints_;
  LogExpansion head_;
  LogExpansion tail_;
};

/// L(r) = \int_0^r s^{m-1} ln f(s) ds. Closed form for symbolic profiles,
/// adaptive graded-mesh quadrature otherwise. May overflow for large r^m;
/// prefer scaled_ln_mean in operator code.
double log_mean_inner(const RadialProfile& f, double r, double m,
                      const QuadratureSpec& spec);

/// N(r) = m r^{-m} L(r), the well-scaled form used by the exponential means.
/// force_quadrature bypasses the closed forms (for cross-checks).
double scaled_ln_mean(const RadialProfile& f, double r, double m,
                      const QuadratureSpec& spec, bool force_quadrature = false);

/// \int_lower^inf h(r) r^{Q-1} dr (no sphere factor). Splits at declared
/// breakpoints, closes both endpoints analytically from the integrand's
/// endpoint models, and reports divergence rather than guessing.
IntegralResult outer_integral(const RadialIntegrand& h, const HomogeneousGroup& g,
                              double lower, const QuadratureSpec& spec);

/// \int_a^b h(r) r^{Q-1} dr over a finite window.
IntegralResult outer_integral_segment(const RadialIntegrand& h, const HomogeneousGroup& g,
                                      double a, double b, const QuadratureSpec& spec);

/// |S| \int_0^inf g(r) r^{Q-1} dr: the polar decomposition of \int_G g(|x|) dx.
IntegralResult polar_integral(const HomogeneousGroup& g, const RadialProfile& profile,
                              const QuadratureSpec& spec);

}  // namespace lclab
