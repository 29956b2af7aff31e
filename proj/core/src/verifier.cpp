#include "lclab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

namespace lclab {

namespace {

nlohmann::json json_number_or_inf(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

struct NormOutcome {
  double log_norm = kNegInf;
  double rel_error = 0.0;
  bool divergent = false;
  std::string diagnosis;
};

// (|S| \int integrand r^{Q-1} dr)^{1/power}
NormOutcome weighted_norm(const RadialIntegrand& integrand, double power,
                          const HomogeneousGroup& g, const QuadratureSpec& spec) {
  NormOutcome out;
  try {
    IntegralResult res = outer_integral(integrand, g, 0.0, spec);
    if (res.divergent) {
      out.divergent = true;
      std::ostringstream msg;
      msg << "integral divergent at " << endpoint_name(res.endpoint) << ": "
          << res.diagnosis;
      out.diagnosis = msg.str();
      return out;
    }
    out.log_norm = (std::log(g.sphere_measure) + res.value.log()) / power;
    out.rel_error = res.rel_error / power;
  } catch (const DivergenceError& e) {
    out.divergent = true;
    out.diagnosis = e.what();
  }
  return out;
}

RadialProfile side_mean_profile(const RadialProfile& f, InequalitySide side, double m,
                                const QuadratureSpec& spec, bool force) {
  if (side == InequalitySide::forward) return mean_profile(f, m, 1.0, spec, force);
  return dual_mean_profile(f, m, 1.0, spec, force);
}

double multinomial_log_coeff(int k, const std::vector<int>& m) {
  double lg = std::lgamma(k + 1.0);
  for (int mi : m) lg -= std::lgamma(mi + 1.0);
  return lg;
}

void enumerate_compositions(int k, int n,
                            const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> m(n, 0);
  std::function<void(int, int)> rec = [&](int idx, int rest) {
    if (idx == n - 1) {
      m[idx] = rest;
      visit(m);
      return;
    }
    for (int take = 0; take <= rest; ++take) {
      m[idx] = take;
      rec(idx + 1, rest - take);
    }
  };
  rec(0, k);
}

}  // namespace

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["lhs"] = json_number_or_inf(r.lhs);
  j["rhs"] = json_number_or_inf(r.rhs);
  j["ratio"] = r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr);
  j["bound_lower"] = json_number_or_inf(r.bound_lower);
  j["bound_upper"] = json_number_or_inf(r.bound_upper);
  j["holds"] = r.holds ? nlohmann::json(*r.holds) : nlohmann::json(nullptr);
  j["quadrature_error"] = r.quadrature_error;
  j["flags"] = r.flags;
  return j;
}

VerificationReport evaluate_inequality(const RadialProfile& f, const WeightSpec& u,
                                       const WeightSpec& v, const InequalityParams& params,
                                       const HomogeneousGroup& g, const QuadratureSpec& spec,
                                       InequalitySide side, EvalPath path) {
  params.validate();
  spec.validate();
  const bool force = path == EvalPath::generic;
  const double m = params.beta * g.Q;

  VerificationReport report;
  const RadialProfile u_prof = u.to_profile(g, params.beta, spec);
  const RadialProfile v_prof = v.to_profile(g, params.beta, spec);

  NormOutcome lhs;
  try {
    RadialProfile mean = side_mean_profile(f, side, m, spec, force);
    lhs = weighted_norm(RadialIntegrand({{mean, params.q}, {u_prof, 1.0}}), params.q, g,
                        spec);
  } catch (const DivergenceError& e) {
    lhs.divergent = true;
    lhs.diagnosis = e.what();
  }
  NormOutcome rhs = weighted_norm(RadialIntegrand({{f, params.p}, {v_prof, 1.0}}),
                                  params.p, g, spec);

  report.log_lhs = lhs.divergent ? kPosInf : lhs.log_norm;
  report.log_rhs = rhs.divergent ? kPosInf : rhs.log_norm;
  report.lhs = lhs.divergent ? kPosInf : std::exp(lhs.log_norm);
  report.rhs = rhs.divergent ? kPosInf : std::exp(rhs.log_norm);
  if (lhs.divergent) report.flags.push_back("lhs: " + lhs.diagnosis);
  if (rhs.divergent) report.flags.push_back("rhs: " + rhs.diagnosis);
  report.quadrature_error = std::max(lhs.rel_error, rhs.rel_error);

  try {
    ConstantBounds bounds = side == InequalitySide::forward
                                ? constant_bounds(u, v, params, g, spec)
                                : dual_constant_bounds(u, v, params, g, spec);
    report.bound_lower = bounds.lower;
    report.bound_upper = bounds.upper;
    for (const auto& fl : bounds.flags) report.flags.push_back(fl);
  } catch (const DivergenceError& e) {
    report.bound_lower = 0.0;
    report.bound_upper = kPosInf;
    report.flags.push_back(std::string("bounds: ") + e.what());
  }

  if (!lhs.divergent && !rhs.divergent) {
    report.ratio = std::exp(lhs.log_norm - rhs.log_norm);
    if (std::isfinite(report.bound_upper)) {
      report.holds = *report.ratio <= report.bound_upper * (1.0 + kHoldsSlack);
    }
  }
  return report;
}

double inequality_ratio(const RadialProfile& f, const WeightSpec& u, const WeightSpec& v,
                        const InequalityParams& params, const HomogeneousGroup& g,
                        const QuadratureSpec& spec, InequalitySide side, EvalPath path) {
  params.validate();
  const bool force = path == EvalPath::generic;
  const double m = params.beta * g.Q;
  const RadialProfile u_prof = u.to_profile(g, params.beta, spec);
  const RadialProfile v_prof = v.to_profile(g, params.beta, spec);
  RadialProfile mean = side_mean_profile(f, side, m, spec, force);
  NormOutcome lhs = weighted_norm(RadialIntegrand({{mean, params.q}, {u_prof, 1.0}}),
                                  params.q, g, spec);
  NormOutcome rhs = weighted_norm(RadialIntegrand({{f, params.p}, {v_prof, 1.0}}),
                                  params.p, g, spec);
  if (lhs.divergent || rhs.divergent) {
    throw DivergenceError(Endpoint::none,
                          lhs.divergent ? "lhs diverges: " + lhs.diagnosis
                                        : "rhs diverges: " + rhs.diagnosis);
  }
  return std::exp(lhs.log_norm - rhs.log_norm);
}

std::vector<double> default_probe_gammas(double a, int count) {
  if (a == -1.0) throw DomainError("probe family undefined at a = -1");
  const double scale = std::abs(a + 1.0);
  std::vector<double> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    out.push_back(scale * (1.0 + std::exp2(-j)));
  }
  return out;
}

ProbeSequence sharpness_probe_power(double a, double beta, const HomogeneousGroup& g,
                                    const std::vector<double>& gamma_over_Q,
                                    const QuadratureSpec& spec) {
  if (a == -1.0) throw DomainError("probe family undefined at a = -1");
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  const double Q = g.Q;
  const double m = beta * Q;
  const double A1 = a + 1.0;
  const double B1 = std::abs(A1);
  const double r0 = std::exp(1.0 / m);

  InequalityParams params;
  params.beta = beta;

  ProbeSequence seq;
  seq.limit_constant = std::exp(A1 / beta);
  for (double gQ : gamma_over_Q) {
    if (!(gQ > B1)) {
      std::ostringstream msg;
      msg << "gamma/Q = " << gQ << " <= |a+1| = " << B1 << ": rhs integral diverges";
      throw DomainError(msg.str());
    }
    const double gamma = gQ * Q;
    const double E = std::exp(gQ / beta);
    RadialProfile f;
    double closed;
    if (A1 > 0.0) {
      f = RadialProfile::cutoff_power_tail(r0, 1.0, gamma);
      closed = E / (A1 / gQ + (1.0 - A1 / gQ) * E);
    } else {
      // Inverted family: r^gamma inside the ball, 1 outside.
      f = RadialProfile::piecewise_power({r0}, {{0.0, gamma}, {0.0, 0.0}});
      closed = gQ / (B1 * E + (gQ - B1));
    }
    ProbePoint pt;
    pt.gamma_over_Q = gQ;
    pt.ratio_closed_form = closed;
    pt.ratio_numeric = inequality_ratio(f, WeightSpec::ball_power(a),
                                        WeightSpec::ball_power(a), params, g, spec);
    seq.points.push_back(pt);
  }
  for (std::size_t i = 1; i < seq.points.size(); ++i) {
    if (seq.points[i].ratio_numeric < seq.points[i - 1].ratio_numeric) {
      seq.monotone = false;
    }
  }
  return seq;
}

ProbeSequence sharpness_probe_dual(double a, double beta, const HomogeneousGroup& g,
                                   const std::vector<double>& gamma_over_Q,
                                   const QuadratureSpec& spec) {
  // The inversion identities turn the dual problem with weight |B|^a into the
  // forward problem at exponent -(a+2); constants cancel at p = q = 1.
  return sharpness_probe_power(-(a + 2.0), beta, g, gamma_over_Q, spec);
}

void write_probe_csv(std::ostream& os, const ProbeSequence& seq) {
  os << "gamma_over_Q,ratio_numeric,ratio_closed_form,limit_constant\n";
  char buf[128];
  for (const auto& p : seq.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.gamma_over_Q,
                  p.ratio_numeric, p.ratio_closed_form, seq.limit_constant);
    os << buf;
  }
}

VerificationReport verify_multinomial(const std::vector<double>& a, int k, double beta,
                                      const HomogeneousGroup& g, const RadialProfile& f,
                                      const QuadratureSpec& spec) {
  const WeightSpec weight = WeightSpec::multinomial(a, k);
  InequalityParams params;
  params.beta = beta;
  const double m = beta * g.Q;

  VerificationReport report;
  const RadialProfile w_prof = weight.to_profile(g, beta, spec);
  RadialProfile mean = mean_profile(f, m, 1.0, spec);
  NormOutcome lhs =
      weighted_norm(RadialIntegrand({{mean, 1.0}, {w_prof, 1.0}}), 1.0, g, spec);
  NormOutcome rhs =
      weighted_norm(RadialIntegrand({{f, 1.0}, {w_prof, 1.0}}), 1.0, g, spec);
  report.log_lhs = lhs.divergent ? kPosInf : lhs.log_norm;
  report.log_rhs = rhs.divergent ? kPosInf : rhs.log_norm;
  report.lhs = lhs.divergent ? kPosInf : std::exp(lhs.log_norm);
  report.rhs = rhs.divergent ? kPosInf : std::exp(rhs.log_norm);
  if (lhs.divergent) report.flags.push_back("lhs: " + lhs.diagnosis);
  if (rhs.divergent) report.flags.push_back("rhs: " + rhs.diagnosis);
  report.quadrature_error = std::max(lhs.rel_error, rhs.rel_error);

  MultinomialBounds bounds = multinomial_constant_bounds(a, k, beta, g);
  report.bound_lower = bounds.lower;
  report.bound_upper = bounds.upper;
  if (!lhs.divergent && !rhs.divergent) {
    report.ratio = std::exp(lhs.log_norm - rhs.log_norm);
    report.holds = *report.ratio <= bounds.upper * (1.0 + kHoldsSlack);

    // Multinomial-theorem expansion: the weight splits into ball powers at
    // exponents sum a_i m_i; each term obeys its own sharp bound and the
    // coefficient-weighted sums must reproduce the direct integrals.
    double lhs_sum = kNegInf, rhs_sum = kNegInf;
    bool term_bounds_ok = true;
    bool term_divergent = false;
    const int n = static_cast<int>(a.size());
    enumerate_compositions(k, n, [&](const std::vector<int>& mcol) {
      const double lc = multinomial_log_coeff(k, mcol);
      double expo = 0.0;
      for (int i = 0; i < n; ++i) expo += a[i] * mcol[i];
      const RadialProfile bp = RadialProfile::ball_power(expo, g);
      NormOutcome tl =
          weighted_norm(RadialIntegrand({{mean, 1.0}, {bp, 1.0}}), 1.0, g, spec);
      NormOutcome tr =
          weighted_norm(RadialIntegrand({{f, 1.0}, {bp, 1.0}}), 1.0, g, spec);
      if (tl.divergent || tr.divergent) {
        term_divergent = true;
        return;
      }
      lhs_sum = log_add_exp(lhs_sum, lc + tl.log_norm);
      rhs_sum = log_add_exp(rhs_sum, lc + tr.log_norm);
      const double term_ratio = std::exp(tl.log_norm - tr.log_norm);
      if (term_ratio > std::exp((1.0 + expo) / beta) * (1.0 + kHoldsSlack)) {
        term_bounds_ok = false;
      }
    });
    if (term_divergent) {
      report.flags.push_back("multinomial expansion skipped: divergent term integral");
    } else {
      const double lhs_diff = std::abs(std::expm1(lhs_sum - lhs.log_norm));
      const double rhs_diff = std::abs(std::expm1(rhs_sum - rhs.log_norm));
      if (lhs_diff < 1e-6 && rhs_diff < 1e-6 && term_bounds_ok) {
        report.flags.push_back("multinomial expansion consistent");
      } else {
        std::ostringstream msg;
        msg << "multinomial expansion mismatch: lhs " << lhs_diff << ", rhs " << rhs_diff
            << (term_bounds_ok ? "" : ", term bound violated");
        report.flags.push_back(msg.str());
      }
    }
  }
  return report;
}

VerificationReport verify_matched(const WeightSpec& v, double beta,
                                  const HomogeneousGroup& g, const RadialProfile& f,
                                  const QuadratureSpec& spec) {
  InequalityParams params;
  params.beta = beta;
  const WeightSpec u = WeightSpec::matched(v);
  VerificationReport report = evaluate_inequality(f, u, v, params, g, spec);

  if (report.ratio) {
    // The substitution g = f v turns the matched inequality into the
    // unweighted one; the two ratios agree exactly in exact arithmetic.
    const RadialProfile fv = f * v.to_profile(g, beta, spec);
    try {
      const double unweighted =
          inequality_ratio(fv, WeightSpec::one(), WeightSpec::one(), params, g, spec);
      const double diff = relative_diff(*report.ratio, unweighted);
      if (diff <= 1e-8) {
        report.flags.push_back("matched substitution identity holds");
      } else {
        std::ostringstream msg;
        msg << "matched substitution mismatch: relative difference " << diff;
        report.flags.push_back(msg.str());
      }
    } catch (const DivergenceError& e) {
      report.flags.push_back(std::string("matched substitution check diverged: ") +
                             e.what());
    }
  }
  return report;
}

BetaReductionCheck check_beta_reduction(const WeightSpec& u, const WeightSpec& v,
                                        const RadialProfile& f,
                                        const InequalityParams& params,
                                        const HomogeneousGroup& g,
                                        const QuadratureSpec& spec) {
  params.validate();
  BetaReductionCheck out;
  out.ratio_direct = inequality_ratio(f, u, v, params, g, spec);

  const RadialProfile u_prof = u.to_profile(g, params.beta, spec);
  const RadialProfile v_prof = v.to_profile(g, params.beta, spec);
  BetaReduction red = beta_reduce(u_prof, v_prof, f, params.beta, g);
  InequalityParams reduced_params = params;
  reduced_params.beta = 1.0;
  out.ratio_reduced = inequality_ratio(red.f_reduced, WeightSpec::custom(red.u_reduced),
                                       WeightSpec::custom(red.v_reduced), reduced_params,
                                       g, spec);
  out.agreement = relative_diff(out.ratio_direct, out.ratio_reduced) < 1e-7;
  return out;
}

NecessityWitness necessity_witness(const WeightSpec& u, const WeightSpec& v,
                                   const InequalityParams& params, const HomogeneousGroup& g,
                                   double R, const QuadratureSpec& spec) {
  params.validate();
  if (!(R > 0.0)) throw DomainError("necessity witness: R must be > 0");
  const double Q = g.Q;
  const double p = params.p, q = params.q, beta = params.beta, alpha = params.alpha;
  if (!(alpha > Q * (1.0 - beta))) {
    throw DomainError("necessity witness requires alpha > Q(1 - beta)");
  }
  const double m = beta * Q;

  // Test function: R^{-Q} inside B(0,R), then
  // e^{-(Q beta + alpha)/(beta Q)} R^{Q(beta-1)+alpha} r^{-(beta Q + alpha)}.
  const double tail_log_coeff =
      -(m + alpha) / m + (Q * (beta - 1.0) + alpha) * std::log(R);
  const RadialProfile witness = RadialProfile::piecewise_power(
      {R}, {{-Q * std::log(R), 0.0}, {tail_log_coeff, -(m + alpha)}});

  const RadialProfile w = transformed_weight(u, v, params, g, spec);
  RadialProfile mean = mean_profile(witness, m, 1.0, spec);

  IntegralResult lhs_int = outer_integral(
      RadialIntegrand({{mean, q / p}, {w, 1.0}}), g, R, spec);
  if (lhs_int.divergent) {
    throw DivergenceError(lhs_int.endpoint,
                          "necessity witness: truncated lhs diverges: " +
                              lhs_int.diagnosis);
  }
  const double log_lhs_trunc =
      (std::log(g.sphere_measure) + lhs_int.value.log()) / q;

  // Same quantity through the criterion's tail-integral route.
  IntegralResult tail_int = outer_integral(
      RadialIntegrand(
          {{w, 1.0}, {RadialProfile::power_law(-(m + alpha) * q / p), 1.0}}),
      g, R, spec);
  const double log_T =
      (Q * (beta - 1.0) + alpha) / p * std::log(R) +
      (std::log(g.sphere_measure) + tail_int.value.log()) / q;

  const double denom = alpha / Q + beta - 1.0;
  const double x = std::exp(-(m + alpha) / m) / denom;
  const double log_factor = g.log_unit_ball_volume() / p + std::log1p(x) / p;

  NecessityWitness out;
  out.witness_value = std::exp(log_lhs_trunc - log_factor);
  out.certificate_rel_diff = std::abs(std::expm1(log_lhs_trunc - log_T));
  out.A_alpha_value = A_alpha(u, v, params, g, spec).A_value;
  return out;
}

}  // namespace lclab
