#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lclab/operators.hpp"

#include "json.hpp"

namespace lclab {

enum class SupLocation { interior, at_zero_boundary, at_inf_boundary };

struct CriterionResult {
  double alpha = 0.0;
  double A_value = kPosInf;        // +inf when not finite
  double log_A = kPosInf;
  double sup_R = 0.0;              // meaningful when location == interior
  SupLocation sup_location = SupLocation::interior;
  double lower_bound_C = 0.0;      // per-alpha necessity bound
  double upper_bound_C = kPosInf;  // per-alpha sufficiency bound
  double grid_flatness = kPosInf;  // max T / min T over the R grid
  bool finite = false;
  std::vector<std::string> flags;
};

nlohmann::json to_json(const CriterionResult& r);

/// A(alpha) = sup_{R>0} R^{(Q(beta-1)+alpha)/p} (\int_{G \ B(0,R)}
/// |x|^{-(Q beta + alpha) q/p} w(x) dx)^{1/q}, maximized over a log grid of
/// 64 points per decade on [r_min_hint, r_max_hint] with golden-section
/// refinement. Monotone growth by more than 10x across a boundary decade is
/// reported as sup = +inf.
CriterionResult A_alpha(const WeightSpec& u, const WeightSpec& v,
                        const InequalityParams& params, const HomogeneousGroup& g,
                        const QuadratureSpec& spec);

/// Closed form of A(alpha) for balanced power weights
/// (p/q)^{1/q} |B(0,1)|^{1/p} e^{b/(p beta)} / [alpha/Q + beta - 1]^{1/q};
/// +inf when the balance condition (1+a)/q = (1+b)/p fails.
double A_alpha_power_closed(double a, double b, const InequalityParams& params,
                            const HomogeneousGroup& g);

struct ConstantBounds {
  double lower = 0.0;
  double upper = kPosInf;
  double alpha_star_lower = 0.0;
  double alpha_star_upper = 0.0;
  bool finite = false;
  std::vector<std::string> flags;
};

nlohmann::json to_json(const ConstantBounds& b);

/// Best-constant bounds: upper = (beta/|B(0,1)|)^{1/p} inf_a e^{a/(beta p Q)} A(a),
/// lower = |B(0,1)|^{-1/p} sup_a (1 + e^{-(betaQ+a)/(betaQ)}/(a/Q+beta-1))^{-1/p} A(a),
/// each optimized over ln(alpha) in [ln(Q e-3), ln(Q e3)] by a 200-point grid
/// seed plus golden-section refinement to relative width 1e-8.
ConstantBounds constant_bounds(const WeightSpec& u, const WeightSpec& v,
                               const InequalityParams& params_without_alpha,
                               const HomogeneousGroup& g, const QuadratureSpec& spec);

/// Dual criterion: applies the dual weight transform to u and v, then
/// delegates to A_alpha.
CriterionResult dual_A_alpha(const WeightSpec& u, const WeightSpec& v,
                             const InequalityParams& params, const HomogeneousGroup& g,
                             const QuadratureSpec& spec);

ConstantBounds dual_constant_bounds(const WeightSpec& u, const WeightSpec& v,
                                    const InequalityParams& params,
                                    const HomogeneousGroup& g, const QuadratureSpec& spec);

struct MultinomialBounds {
  double lower = 1.0;
  double upper = 1.0;
  std::vector<int> lower_collection;  // the m_i achieving the reported lower bound
};

/// exp((1 + k min_i a_i)/beta) <= C <= exp((1 + k sum_i a_i)/beta) for the
/// weight (sum_i |B|^{a_i})^k. The lower bound reports the minimum-sum
/// collection: only one collection is guaranteed to achieve its bound.
MultinomialBounds multinomial_constant_bounds(const std::vector<double>& a, int k,
                                              double beta, const HomogeneousGroup& g);

}  // namespace lclab
