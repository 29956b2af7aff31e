#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lclab/criterion.hpp"
#include "lclab/operators.hpp"

#include "json.hpp"

namespace lclab {

enum class InequalitySide { forward, dual };
enum class EvalPath { automatic, generic };  // generic forces the quadrature route

struct VerificationReport {
  double lhs = 0.0;  // raw norm (no constant baked in); +inf on divergence
  double rhs = 0.0;
  double log_lhs = kNegInf;
  double log_rhs = kNegInf;
  std::optional<double> ratio;  // lhs/rhs when both finite
  double bound_lower = 0.0;
  double bound_upper = kPosInf;
  std::optional<bool> holds;  // ratio <= bound_upper * (1 + kHoldsSlack)
  double quadrature_error = 0.0;
  std::vector<std::string> flags;
};

inline constexpr double kHoldsSlack = 1e-6;

nlohmann::json to_json(const VerificationReport& r);

/// Evaluates both raw norms of the weighted inequality:
/// lhs = (|S| \int [mean f]^q u r^{Q-1} dr)^{1/q},
/// rhs = (|S| \int f^p v r^{Q-1} dr)^{1/p}, with the forward or dual mean.
/// Criterion bounds are attached; divergences are flagged, not thrown.
VerificationReport evaluate_inequality(const RadialProfile& f, const WeightSpec& u,
                                       const WeightSpec& v, const InequalityParams& params,
                                       const HomogeneousGroup& g, const QuadratureSpec& spec,
                                       InequalitySide side = InequalitySide::forward,
                                       EvalPath path = EvalPath::automatic);

/// lhs/rhs only, skipping the criterion optimization (probe-sequence use).
double inequality_ratio(const RadialProfile& f, const WeightSpec& u, const WeightSpec& v,
                        const InequalityParams& params, const HomogeneousGroup& g,
                        const QuadratureSpec& spec,
                        InequalitySide side = InequalitySide::forward,
                        EvalPath path = EvalPath::automatic);

struct ProbePoint {
  double gamma_over_Q = 0.0;
  double ratio_numeric = 0.0;
  double ratio_closed_form = 0.0;
};

struct ProbeSequence {
  std::vector<ProbePoint> points;
  double limit_constant = 0.0;
  bool monotone = true;
};

/// Extremal family of the sharp-constant proof at weight exponent a
/// (p = q = 1). For a+1 > 0: f = 1 on [0, e^{1/(beta Q)}], r^{-gamma}
/// beyond, gamma/Q decreasing toward (a+1)^+. For a+1 < 0 the family is the
/// inverted one (r^{gamma} inside, 1 outside). Ratios increase toward
/// e^{(a+1)/beta}.
ProbeSequence sharpness_probe_power(double a, double beta, const HomogeneousGroup& g,
                                    const std::vector<double>& gamma_over_Q,
                                    const QuadratureSpec& spec);

/// Default geometric sequence gamma/Q = (a+1) + |a+1| 2^{-j}, j = 0..count-1.
std::vector<double> default_probe_gammas(double a, int count = 11);

/// Dual sharpness probe: maps through the dual weight transform and
/// delegates to sharpness_probe_power with exponent -(a+2); the ratio limit
/// is e^{-(a+1)/beta}.
ProbeSequence sharpness_probe_dual(double a, double beta, const HomogeneousGroup& g,
                                   const std::vector<double>& gamma_over_Q,
                                   const QuadratureSpec& spec);

/// CSV with pinned columns gamma_over_Q, ratio_numeric, ratio_closed_form,
/// limit_constant.
void write_probe_csv(std::ostream& os, const ProbeSequence& seq);

/// Inequality with weight (sum_i |B|^{a_i})^k against the multinomial
/// bounds; also expands the weight by the multinomial theorem and checks
/// term-by-term consistency (flags record the outcome).
VerificationReport verify_multinomial(const std::vector<double>& a, int k, double beta,
                                      const HomogeneousGroup& g, const RadialProfile& f,
                                      const QuadratureSpec& spec);

/// Matched-weight inequality: u = matched_weight(v), constant e^{1/beta}.
/// Also checks the substitution identity ratio(f; u, v) = ratio(f v; 1, 1).
VerificationReport verify_matched(const WeightSpec& v, double beta,
                                  const HomogeneousGroup& g, const RadialProfile& f,
                                  const QuadratureSpec& spec);

struct BetaReductionCheck {
  double ratio_direct = 0.0;
  double ratio_reduced = 0.0;
  std::optional<bool> agreement;  // relative difference < 1e-7
};

/// Evaluates the inequality ratio at params.beta directly and again at
/// beta = 1 after the reduction substitution; the two must agree.
BetaReductionCheck check_beta_reduction(const WeightSpec& u, const WeightSpec& v,
                                        const RadialProfile& f,
                                        const InequalityParams& params,
                                        const HomogeneousGroup& g,
                                        const QuadratureSpec& spec);

struct NecessityWitness {
  double witness_value = 0.0;  // lower estimate of C from the proof's test function
  double A_alpha_value = 0.0;
  double certificate_rel_diff = 0.0;  // |LHS-from-witness - T(R)| / T(R)
};

/// Builds the necessity proof's test function at radius R, evaluates the
/// truncated left side over G \ B(0,R), and divides by the test function's
/// right-side norm factor. Requires alpha > Q(1 - beta).
NecessityWitness necessity_witness(const WeightSpec& u, const WeightSpec& v,
                                   const InequalityParams& params, const HomogeneousGroup& g,
                                   double R, const QuadratureSpec& spec);

}  // namespace lclab
