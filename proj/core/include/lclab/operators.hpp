#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lclab/group.hpp"
#include "lclab/numeric.hpp"
#include "lclab/profile.hpp"
#include "lclab/quadrature.hpp"

namespace lclab {

struct InequalityParams {
  double p = 1.0;
  double q = 1.0;
  double beta = 1.0;
  double alpha = 1.0;

  void validate() const;  // 0 < p <= q < inf, beta > 0, alpha > 0
};

/// Radial weight descriptor. `to_profile` resolves it against a group and
/// beta (Matched needs the mean operator's beta).
class WeightSpec {
 public:
  struct BallPower {
    double a = 0.0;
  };
  struct ExpPower {
    double eta = 0.0;
    double gamma = 1.0;
    double scale = 1.0;
  };
  struct Multinomial {
    std::vector<double> a;
    int k = 1;
  };
  struct Matched {  // u generated from v by the forward mean
    std::shared_ptr<const WeightSpec> v;
  };
  struct Custom {
    RadialProfile profile;
  };
  using Variant = std::variant<BallPower, ExpPower, Multinomial, Matched, Custom>;

  WeightSpec() : WeightSpec(BallPower{0.0}) {}
  WeightSpec(Variant v);

  static WeightSpec one() { return WeightSpec(BallPower{0.0}); }
  static WeightSpec ball_power(double a) { return WeightSpec(BallPower{a}); }
  static WeightSpec exp_power(double eta, double gamma, double scale = 1.0) {
    return WeightSpec(ExpPower{eta, gamma, scale});
  }
  static WeightSpec multinomial(std::vector<double> a, int k);
  static WeightSpec matched(WeightSpec v);
  static WeightSpec custom(RadialProfile p) { return WeightSpec(Custom{std::move(p)}); }

  RadialProfile to_profile(const HomogeneousGroup& g, double beta,
                           const QuadratureSpec& spec) const;
  const Variant& variant() const { return *variant_; }

 private:
  std::shared_ptr<const Variant> variant_;
};

/// exp(beta Q r^{-beta Q} L_f(r)): the Levin-Cochran-Lee forward mean of f
/// over the quasi-ball of radius r, radially reduced. Returned in the log
/// domain; .value() exponentiates at the boundary.
LogValue forward_mean(const RadialProfile& f, double r, double beta,
                      const HomogeneousGroup& g, const QuadratureSpec& spec);

/// exp(beta Q r^{beta Q} \int_r^inf s^{-beta Q - 1} ln f(s) ds): the dual
/// mean over the exterior of the ball. Implemented through the inversion
/// identity dual_mean(f, r) = forward_mean(f(1/.), 1/r).
LogValue dual_mean(const RadialProfile& f, double r, double beta,
                   const HomogeneousGroup& g, const QuadratureSpec& spec);

/// Profile r -> exp(scale * m r^{-m} L_f(r)). Collapses to a symbolic form
/// for monomial and exp-power inner profiles; otherwise lazily evaluated.
RadialProfile mean_profile(const RadialProfile& f, double m, double scale,
                           const QuadratureSpec& spec, bool force_quadrature = false);

/// Profile of the dual mean r -> exp(m r^{m} \int_r^inf s^{-m-1} ln f ds)^scale.
RadialProfile dual_mean_profile(const RadialProfile& f, double m, double scale,
                                const QuadratureSpec& spec, bool force_quadrature = false);

/// w = u * [forward mean of 1/v]^{q/p}, the transformed weight of the
/// criterion. Symbolic for power-weight pairs.
RadialProfile transformed_weight(const WeightSpec& u, const WeightSpec& v,
                                 const InequalityParams& params, const HomogeneousGroup& g,
                                 const QuadratureSpec& spec);

/// u~(r) = r^{-2Q} u(1/r): the weight transform of the dual inequality.
RadialProfile dual_weight_transform(const RadialProfile& u, const HomogeneousGroup& g);

/// u(r) = exp(beta Q r^{-beta Q} L_v(r)): the matched weight generated from v.
RadialProfile matched_weight(const WeightSpec& v, double beta, const HomogeneousGroup& g,
                             const QuadratureSpec& spec);

/// The substitution s = r^beta mapping the beta-operator problem to beta = 1:
/// g(r) = f(r^{1/beta}), and the weights pick up (1/beta) r^{Q(1-beta)/beta}.
struct BetaReduction {
  RadialProfile u_reduced;
  RadialProfile v_reduced;
  RadialProfile f_reduced;
};
BetaReduction beta_reduce(const RadialProfile& u, const RadialProfile& v,
                          const RadialProfile& f, double beta, const HomogeneousGroup& g);

}  // namespace lclab
