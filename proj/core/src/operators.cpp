#include "lclab/operators.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "lclab/errors.hpp"

namespace lclab {

void InequalityParams::validate() const {
  if (!(p > 0.0) || !(q > 0.0) || !(p <= q) || std::isinf(q)) {
    throw DomainError("inequality parameters require 0 < p <= q < inf");
  }
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
}

WeightSpec::WeightSpec(Variant v) : variant_(std::make_shared<Variant>(std::move(v))) {}

WeightSpec WeightSpec::multinomial(std::vector<double> a, int k) {
  if (a.empty()) throw DomainError("multinomial weight: empty exponent list");
  for (double ai : a) {
    if (!(ai > 0.0)) throw DomainError("multinomial weight: exponents must be > 0");
  }
  if (k < 0) throw DomainError("multinomial weight: k must be >= 0");
  return WeightSpec(Multinomial{std::move(a), k});
}

WeightSpec WeightSpec::matched(WeightSpec v) {
  return WeightSpec(Matched{std::make_shared<const WeightSpec>(std::move(v))});
}

RadialProfile WeightSpec::to_profile(const HomogeneousGroup& g, double beta,
                                     const QuadratureSpec& spec) const {
  struct Visitor {
    const HomogeneousGroup& g;
    double beta;
    const QuadratureSpec& spec;

    RadialProfile operator()(const BallPower& w) const {
      return RadialProfile::ball_power(w.a, g);
    }
    RadialProfile operator()(const ExpPower& w) const {
      if (!(w.scale > 0.0)) throw DomainError("exp-power weight: scale must be > 0");
      return RadialProfile::exp_power(w.eta, w.gamma).scaled(w.scale);
    }
    RadialProfile operator()(const Multinomial& w) const {
      return RadialProfile::sum_power(w.a, g, w.k);
    }
    RadialProfile operator()(const Matched& w) const {
      return matched_weight(*w.v, beta, g, spec);
    }
    RadialProfile operator()(const Custom& w) const { return w.profile; }
  };
  return std::visit(Visitor{g, beta, spec}, *variant_);
}

// ---------------------------------------------------------------------------
// Lazy mean profile: r -> exp(scale * m r^{-m} \int_0^r s^{m-1} ln f(s) ds)
// ---------------------------------------------------------------------------

namespace {

// Endpoint model of N(r) = m r^{-m} L(r) induced by an endpoint model of ln f:
//   lc + e ln s + sum c_j s^{g_j}  ->  lc + e (ln r - 1/m) + sum c_j' r^{g_j}
// with c_j' = c_j m / (m + g_j). Terms with g_j <= -m have no from-zero
// integral (head side: divergence) or are absorbed by the r^{-m} memory term
// (tail side).
LogExpansion mean_endpoint_model(const LogExpansion& inner, double m, double scale,
                                 bool is_head) {
  LogExpansion out;
  out.boundary = inner.boundary;
  out.exact = inner.exact;
  if (inner.log_coeff == kNegInf) {
    out.log_coeff = kNegInf;
    return out;
  }
  out.log_coeff = scale * (inner.log_coeff - inner.exponent / m);
  out.exponent = scale * inner.exponent;
  for (const auto& t : inner.terms) {
    if (t.sign == 0) continue;
    if (m + t.power <= 0.0) {
      if (is_head) {
        throw DivergenceError(Endpoint::zero,
                              "inner log-mean diverges: ln f not integrable at 0");
      }
      out.exact = false;  // absorbed into the r^{-m} memory term
      continue;
    }
    ExpTerm nt = t;
    nt.log_abs_coeff += std::log(std::abs(scale) * m / (m + t.power));
    if (scale < 0.0) nt.sign = -nt.sign;
    out.terms.push_back(nt);
  }
  return out;
}

class ExpScaledMeanImpl final : public ProfileImpl {
 public:
  ExpScaledMeanImpl(RadialProfile inner, double m, double scale, QuadratureSpec spec,
                    bool force_quadrature)
      : inner_(std::move(inner)),
        m_(m),
        scale_(scale),
        spec_(spec),
        force_(force_quadrature) {
    // Quadrature-backed evaluations feed outer quadratures; run the inner
    // integral two orders tighter so its noise stays below the outer goal.
    spec_.rel_tol = std::max(spec_.rel_tol * 1e-2, 1e-14);
    spec_.abs_tol = std::max(spec_.abs_tol * 1e-2, 1e-300);
  }

  double log_eval(double r) const override { return scale_ * n_of(r); }

  const std::vector<double>& breakpoints() const override {
    return inner_.breakpoints();
  }

  LogExpansion head() const override {
    {
      std::scoped_lock lock(mutex_);
      if (head_) return *head_;
    }
    LogExpansion h = mean_endpoint_model(inner_.head(), m_, scale_, /*is_head=*/true);
    std::scoped_lock lock(mutex_);
    if (!head_) head_ = std::move(h);
    return *head_;
  }

  LogExpansion tail() const override {
    {
      std::scoped_lock lock(mutex_);
      if (tail_) return *tail_;
    }
    LogExpansion t = compute_tail();
    std::scoped_lock lock(mutex_);
    if (!tail_) tail_ = std::move(t);
    return *tail_;
  }

  ProfilePtr substitute(double s) const override {
    // N_f(r^s; m) = N_{f(.^s)}(r; m s), so substitution rescales m.
    if (!(s > 0.0)) throw DomainError("mean profile substitution needs s > 0");
    return std::make_shared<ExpScaledMeanImpl>(inner_.substituted(s), m_ * s, scale_,
                                               spec_, force_);
  }

  ProfilePtr power(double k) const override {
    return std::make_shared<ExpScaledMeanImpl>(inner_, m_, scale_ * k, spec_, force_);
  }

 private:
  LogExpansion compute_tail() const {
    LogExpansion model = mean_endpoint_model(inner_.tail(), m_, scale_, /*is_head=*/false);
    const bool covers_everything = inner_.tail().boundary == 0.0 &&
                                   inner_.breakpoints().empty();
    if (covers_everything || model.log_coeff == kNegInf) return model;

    // The finite region below the model's validity contributes a constant to
    // L(r); reconcile it as an exact r^{-m} memory term.
    double rb = std::max(inner_.tail().boundary, 1e-300);
    if (!inner_.breakpoints().empty()) {
      rb = std::max(rb, inner_.breakpoints().back());
    }
    const double n_true = scale_ * n_of(rb);
    if (n_true == kNegInf) {
      // f vanishes on a set of positive measure below rb: the mean is 0.
      model = LogExpansion{};
      model.log_coeff = kNegInf;
      model.boundary = rb;
      return model;
    }
    const double n_model = model.eval_log(rb);
    const double diff = n_true - n_model;
    if (diff != 0.0 && std::isfinite(diff)) {
      ExpTerm memory;
      memory.sign = diff > 0 ? 1 : -1;
      memory.log_abs_coeff = std::log(std::abs(diff)) + m_ * std::log(rb);
      memory.power = -m_;
      model.terms.push_back(memory);
    }
    model.boundary = rb;
    const bool closed = !force_ && inner_.closed_scaled_ln_mean(rb, m_).has_value();
    model.exact = model.exact && closed;
    return model;
  }

  double n_of(double r) const {
    {
      std::scoped_lock lock(mutex_);
      auto it = memo_.find(r);
      if (it != memo_.end()) return it->second;
    }
    const double n = scaled_ln_mean(inner_, r, m_, spec_, force_);
    std::scoped_lock lock(mutex_);
    memo_.emplace(r, n);
    return n;
  }

  RadialProfile inner_;
  double m_;
  double scale_;
  QuadratureSpec spec_;
  bool force_;
  mutable std::mutex mutex_;
  mutable std::map<double, double> memo_;
  mutable std::optional<LogExpansion> head_;
  mutable std::optional<LogExpansion> tail_;
};

}  // namespace

RadialProfile mean_profile(const RadialProfile& f, double m, double scale,
                           const QuadratureSpec& spec, bool force_quadrature) {
  if (!(m > 0.0)) throw DomainError("mean profile: m must be > 0");
  if (scale == 0.0) return RadialProfile::constant(1.0);
  if (!force_quadrature) {
    if (auto mono = f.as_monomial()) {
      if (mono->log_coeff == kNegInf) {
        throw DivergenceError(Endpoint::zero, "log-mean of the zero profile diverges");
      }
      // N(r) = logC + e (ln r - 1/m)
      return RadialProfile::monomial(scale * (mono->log_coeff - mono->exponent / m),
                                     scale * mono->exponent);
    }
    if (auto ep = f.as_exp_power()) {
      const auto [eta, gamma] = *ep;
      if (m + gamma <= 0.0) {
        throw DivergenceError(Endpoint::zero,
                              "log-mean of exp(eta r^gamma) diverges at 0");
      }
      return RadialProfile::exp_power(scale * eta / (1.0 + gamma / m), gamma);
    }
  }
  return RadialProfile::from_impl(
      std::make_shared<ExpScaledMeanImpl>(f, m, scale, spec, force_quadrature));
}

RadialProfile dual_mean_profile(const RadialProfile& f, double m, double scale,
                                const QuadratureSpec& spec, bool force_quadrature) {
  return mean_profile(f.inverted(), m, scale, spec, force_quadrature).inverted();
}

LogValue forward_mean(const RadialProfile& f, double r, double beta,
                      const HomogeneousGroup& g, const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw DomainError("forward_mean: r must be > 0");
  if (!(beta > 0.0)) throw DomainError("forward_mean: beta must be > 0");
  return LogValue::from_log(scaled_ln_mean(f, r, beta * g.Q, spec));
}

LogValue dual_mean(const RadialProfile& f, double r, double beta,
                   const HomogeneousGroup& g, const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw DomainError("dual_mean: r must be > 0");
  if (!(beta > 0.0)) throw DomainError("dual_mean: beta must be > 0");
  try {
    return LogValue::from_log(scaled_ln_mean(f.inverted(), 1.0 / r, beta * g.Q, spec));
  } catch (const DivergenceError&) {
    // the inversion maps the tail of ln f to the origin; report the
    // endpoint the caller sees
    throw DivergenceError(Endpoint::infinity,
                          "dual_mean: ln f not integrable against s^{-m-1} at infinity");
  }
}

RadialProfile transformed_weight(const WeightSpec& u, const WeightSpec& v,
                                 const InequalityParams& params, const HomogeneousGroup& g,
                                 const QuadratureSpec& spec) {
  params.validate();
  const double m = params.beta * g.Q;
  const RadialProfile u_prof = u.to_profile(g, params.beta, spec);
  const RadialProfile v_prof = v.to_profile(g, params.beta, spec);
  RadialProfile inner_mean =
      mean_profile(v_prof.powered(-1.0), m, params.q / params.p, spec);
  inner_mean.head();  // trigger the divergence pre-check eagerly
  return u_prof * inner_mean;
}

RadialProfile dual_weight_transform(const RadialProfile& u, const HomogeneousGroup& g) {
  return RadialProfile::monomial(0.0, -2.0 * g.Q) * u.inverted();
}

RadialProfile matched_weight(const WeightSpec& v, double beta, const HomogeneousGroup& g,
                             const QuadratureSpec& spec) {
  if (!(beta > 0.0)) throw DomainError("matched_weight: beta must be > 0");
  RadialProfile u = mean_profile(v.to_profile(g, beta, spec), beta * g.Q, 1.0, spec);
  u.head();
  return u;
}

BetaReduction beta_reduce(const RadialProfile& u, const RadialProfile& v,
                          const RadialProfile& f, double beta,
                          const HomogeneousGroup& g) {
  if (!(beta > 0.0)) throw DomainError("beta_reduce: beta must be > 0");
  if (beta == 1.0) return {u, v, f};
  // Substitution s = r^beta. The measure factor r^{Q-1} dr turns into
  // (1/beta) s^{Q(1-beta)/beta} s^{Q-1} ds, which the reduced weights absorb.
  const double wexp = g.Q * (1.0 - beta) / beta;
  const RadialProfile jac = RadialProfile::monomial(-std::log(beta), wexp);
  BetaReduction out{
      jac * u.substituted(1.0 / beta),
      jac * v.substituted(1.0 / beta),
      f.substituted(1.0 / beta),
  };
  return out;
}

}  // namespace lclab
