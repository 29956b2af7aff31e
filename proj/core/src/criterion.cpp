#include "lclab/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lclab/minimize.hpp"

namespace lclab {

namespace {

nlohmann::json json_number_or_inf(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

constexpr int kPointsPerDecade = 64;

struct GridSup {
  double log_T_max = kNegInf;
  double R_max = 0.0;
  bool grew_into_zero = false;
  bool grew_into_inf = false;
};

}  // namespace

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json j;
  j["alpha"] = r.alpha;
  j["A_value"] = json_number_or_inf(r.A_value);
  switch (r.sup_location) {
    case SupLocation::interior: j["sup_R_location"] = r.sup_R; break;
    case SupLocation::at_zero_boundary: j["sup_R_location"] = "0+"; break;
    case SupLocation::at_inf_boundary: j["sup_R_location"] = "inf"; break;
  }
  j["lower_bound_C"] = json_number_or_inf(r.lower_bound_C);
  j["upper_bound_C"] = json_number_or_inf(r.upper_bound_C);
  j["grid_flatness"] = json_number_or_inf(r.grid_flatness);
  j["finite"] = r.finite;
  j["flags"] = r.flags;
  return j;
}

nlohmann::json to_json(const ConstantBounds& b) {
  nlohmann::json j;
  j["lower"] = json_number_or_inf(b.lower);
  j["upper"] = json_number_or_inf(b.upper);
  j["alpha_star_lower"] = b.alpha_star_lower;
  j["alpha_star_upper"] = b.alpha_star_upper;
  j["finite"] = b.finite;
  j["flags"] = b.flags;
  return j;
}

CriterionResult A_alpha(const WeightSpec& u, const WeightSpec& v,
                        const InequalityParams& params, const HomogeneousGroup& g,
                        const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  const double Q = g.Q;
  const double p = params.p, q = params.q, beta = params.beta, alpha = params.alpha;

  CriterionResult out;
  out.alpha = alpha;

  RadialProfile w = transformed_weight(u, v, params, g, spec);
  const double tail_exp = -(Q * beta + alpha) * q / p;
  RadialIntegrand integrand(
      {{w, 1.0}, {RadialProfile::power_law(tail_exp), 1.0}});

  // The tail integral converges for one R iff it converges for all.
  IntegralResult tail_probe = outer_integral(integrand, g, spec.r_max_hint, spec);
  if (tail_probe.divergent) {
    out.A_value = kPosInf;
    out.log_A = kPosInf;
    out.finite = false;
    out.lower_bound_C = kPosInf;
    out.upper_bound_C = kPosInf;
    out.flags.push_back("tail integral divergent for every R: " + tail_probe.diagnosis);
    return out;
  }

  const double c_T = (Q * (beta - 1.0) + alpha) / p;
  const double log_sigma = std::log(g.sphere_measure);

  const double ulo = std::log(spec.r_min_hint);
  const double uhi = std::log(spec.r_max_hint);
  const int n = static_cast<int>(
                    std::ceil((uhi - ulo) / std::log(10.0) * kPointsPerDecade)) +
                1;
  std::vector<double> Rs(n);
  for (int i = 0; i < n; ++i) {
    Rs[i] = std::exp(ulo + (uhi - ulo) * static_cast<double>(i) / (n - 1));
  }

  // Suffix accumulation: one pass of segment integrals, summed tail-first.
  std::vector<double> suffix_log(n);
  suffix_log[n - 1] = tail_probe.value.log();
  for (int i = n - 2; i >= 0; --i) {
    const double seg =
        outer_integral_segment(integrand, g, Rs[i], Rs[i + 1], spec).value.log();
    suffix_log[i] = log_add_exp(seg, suffix_log[i + 1]);
  }

  std::vector<double> log_T(n);
  int best = 0, worst = 0;
  for (int i = 0; i < n; ++i) {
    log_T[i] = c_T * std::log(Rs[i]) + (log_sigma + suffix_log[i]) / q;
    if (log_T[i] > log_T[best]) best = i;
    if (log_T[i] < log_T[worst]) worst = i;
  }
  out.grid_flatness = std::exp(log_T[best] - log_T[worst]);

  // Boundary growth test: monotone by a factor > 10 across the last decade.
  const int window = std::min(kPointsPerDecade, n - 1);
  auto monotone = [&](int from, int to, int step) {
    for (int i = from; i != to; i += step) {
      if (log_T[i + step] < log_T[i]) return false;
    }
    return true;
  };
  GridSup sup;
  if (log_T[0] - log_T[window] > std::log(10.0) && monotone(window, 0, -1)) {
    sup.grew_into_zero = true;
  }
  if (log_T[n - 1] - log_T[n - 1 - window] > std::log(10.0) &&
      monotone(n - 1 - window, n - 1, 1)) {
    sup.grew_into_inf = true;
  }
  // Slowly growing unbounded suprema escape the factor-10 test; an argmax
  // sitting on the window edge with a still-climbing last decade is treated
  // the same way.
  if (!sup.grew_into_zero && !sup.grew_into_inf &&
      (best == 0 || best == n - 1) && out.grid_flatness > 1.0 + 1e-6) {
    const double edge_climb = best == 0 ? log_T[0] - log_T[window]
                                        : log_T[n - 1] - log_T[n - 1 - window];
    if (edge_climb > std::log1p(1e-3)) {
      (best == 0 ? sup.grew_into_zero : sup.grew_into_inf) = true;
    } else {
      out.flags.push_back("supremum attained at the explored-window boundary");
      out.sup_location = best == 0 ? SupLocation::at_zero_boundary
                                   : SupLocation::at_inf_boundary;
    }
  }
  if (sup.grew_into_zero || sup.grew_into_inf) {
    out.A_value = kPosInf;
    out.log_A = kPosInf;
    out.finite = false;
    out.lower_bound_C = kPosInf;
    out.upper_bound_C = kPosInf;
    out.sup_location = sup.grew_into_zero ? SupLocation::at_zero_boundary
                                          : SupLocation::at_inf_boundary;
    out.flags.push_back("T(R) grows monotonically into the boundary");
    return out;
  }

  // Golden refinement of the supremum around the best grid point.
  const auto log_T_at = [&](double lnR) -> double {
    const double R = std::exp(lnR);
    const int j = static_cast<int>(
        std::upper_bound(Rs.begin(), Rs.end(), R) - Rs.begin());
    double tail_from_R;
    if (j >= n) {
      tail_from_R = outer_integral(integrand, g, R, spec).value.log();
    } else if (Rs[j] == R) {
      tail_from_R = suffix_log[j];
    } else {
      const double seg =
          outer_integral_segment(integrand, g, R, Rs[j], spec).value.log();
      tail_from_R = log_add_exp(seg, suffix_log[j]);
    }
    return c_T * lnR + (log_sigma + tail_from_R) / q;
  };
  if (out.sup_location != SupLocation::interior) {
    out.log_A = log_T[best];
    out.A_value = std::exp(out.log_A);
    out.sup_R = Rs[best];
    out.finite = true;
  } else {
    const int lo = std::max(best - 1, 0);
    const int hi = std::min(best + 1, n - 1);
    MinimizeResult refined = minimize_grid_golden(
        [&](double lnR) { return -log_T_at(lnR); }, std::log(Rs[lo]), std::log(Rs[hi]),
        17, 1e-10);
    out.log_A = -refined.f;
    out.A_value = std::exp(out.log_A);
    out.sup_R = std::exp(refined.x);
    out.finite = true;
  }

  // Per-alpha constant bounds.
  const double log_bv = g.log_unit_ball_volume();
  out.upper_bound_C =
      std::exp((std::log(beta) - log_bv) / p + alpha / (beta * p * Q) + out.log_A);
  const double denom = alpha / Q + beta - 1.0;
  if (denom > 0.0) {
    const double x = std::exp(-(beta * Q + alpha) / (beta * Q)) / denom;
    out.lower_bound_C =
        std::exp(-log_bv / p - std::log1p(x) / p + out.log_A);
  } else {
    out.lower_bound_C = 0.0;
    out.flags.push_back("alpha <= Q(1-beta): necessity bound not applicable");
  }
  return out;
}

double A_alpha_power_closed(double a, double b, const InequalityParams& params,
                            const HomogeneousGroup& g) {
  params.validate();
  const double Q = g.Q;
  const double p = params.p, q = params.q, beta = params.beta, alpha = params.alpha;
  const double balance = (1.0 + a) / q - (1.0 + b) / p;
  if (std::abs(balance) > 1e-12 * (std::abs((1.0 + a) / q) + std::abs((1.0 + b) / p) + 1.0)) {
    return kPosInf;
  }
  const double threshold = Q * p * ((1.0 + a) / q - (beta + b) / p);
  if (!(alpha > threshold)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is not admissible: need alpha > Qp((1+a)/q-(beta+b)/p) = "
        << threshold;
    throw DomainError(msg.str());
  }
  const double denom = alpha / Q + beta - 1.0;
  return std::exp(std::log(p / q) / q + g.log_unit_ball_volume() / p +
                  b / (p * beta) - std::log(denom) / q);
}

namespace {

struct AlphaObjective {
  // Memoized log A(alpha) over ln alpha; +inf marks an inadmissible point.
  const WeightSpec& u;
  const WeightSpec& v;
  InequalityParams params;
  const HomogeneousGroup& g;
  const QuadratureSpec& spec;
  std::map<double, double>& cache;

  double log_A(double ln_alpha) const {
    auto it = cache.find(ln_alpha);
    if (it != cache.end()) return it->second;
    InequalityParams par = params;
    par.alpha = std::exp(ln_alpha);
    CriterionResult res = A_alpha(u, v, par, g, spec);
    const double value = res.finite ? res.log_A : kPosInf;
    cache.emplace(ln_alpha, value);
    return value;
  }
};

}  // namespace

ConstantBounds constant_bounds(const WeightSpec& u, const WeightSpec& v,
                               const InequalityParams& params_without_alpha,
                               const HomogeneousGroup& g, const QuadratureSpec& spec) {
  InequalityParams params = params_without_alpha;
  params.alpha = g.Q;
  params.validate();
  const double Q = g.Q;
  const double p = params.p, beta = params.beta;
  const double log_bv = g.log_unit_ball_volume();

  ConstantBounds out;

  // One finite alpha implies all are finite; probe alpha = Q first.
  CriterionResult probe = A_alpha(u, v, params, g, spec);
  if (!probe.finite) {
    out.lower = kPosInf;
    out.upper = kPosInf;
    out.finite = false;
    out.flags.push_back("A(alpha) infinite at alpha = Q; no finite constant");
    for (const auto& f : probe.flags) out.flags.push_back(f);
    return out;
  }
  out.finite = true;

  std::map<double, double> cache;
  AlphaObjective obj{u, v, params, g, spec, cache};

  const double ln_lo = std::log(Q * 1e-3);
  const double ln_hi = std::log(Q * 1e3);

  // Upper bound: minimize alpha/(beta p Q) + log A(alpha).
  const auto upper_objective = [&](double ln_alpha) {
    const double la = obj.log_A(ln_alpha);
    if (la == kPosInf) return kPosInf;
    return std::exp(ln_alpha) / (beta * p * Q) + la;
  };
  MinimizeResult up = minimize_grid_golden(upper_objective, ln_lo, ln_hi, 200, 1e-8);
  out.upper = std::exp((std::log(beta) - log_bv) / p + up.f);
  out.alpha_star_upper = std::exp(up.x);
  if (up.at_boundary) out.flags.push_back("upper-bound optimizer at alpha boundary");

  // Lower bound: maximize -(1/p) log(1 + x(alpha)) + log A(alpha) over the
  // necessity range alpha > Q(1-beta).
  double ln_lo_nec = ln_lo;
  if (beta < 1.0) {
    ln_lo_nec = std::max(ln_lo, std::log(Q * (1.0 - beta)) + 1e-9);
  }
  const auto lower_objective = [&](double ln_alpha) {
    const double la = obj.log_A(ln_alpha);
    if (la == kPosInf) return kPosInf;
    const double alpha = std::exp(ln_alpha);
    const double denom = alpha / Q + beta - 1.0;
    if (!(denom > 0.0)) return kPosInf;
    const double x = std::exp(-(beta * Q + alpha) / (beta * Q)) / denom;
    return -(la - std::log1p(x) / p);
  };
  MinimizeResult lowr = minimize_grid_golden(lower_objective, ln_lo_nec, ln_hi, 200, 1e-8);
  out.lower = std::exp(-log_bv / p - lowr.f);
  out.alpha_star_lower = std::exp(lowr.x);
  if (lowr.at_boundary) out.flags.push_back("lower-bound optimizer at alpha boundary");

  // For beta < 1 the two bounds pinch at the necessity boundary; quadrature
  // noise may push the lower estimate a hair past the upper one.
  if (out.lower > out.upper) {
    if (out.lower <= out.upper * (1.0 + 1e-6)) {
      out.lower = out.upper;
    } else {
      out.flags.push_back("bounds inconsistent: lower exceeds upper");
    }
  }
  return out;
}

CriterionResult dual_A_alpha(const WeightSpec& u, const WeightSpec& v,
                             const InequalityParams& params, const HomogeneousGroup& g,
                             const QuadratureSpec& spec) {
  const WeightSpec ud = WeightSpec::custom(
      dual_weight_transform(u.to_profile(g, params.beta, spec), g));
  const WeightSpec vd = WeightSpec::custom(
      dual_weight_transform(v.to_profile(g, params.beta, spec), g));
  return A_alpha(ud, vd, params, g, spec);
}

ConstantBounds dual_constant_bounds(const WeightSpec& u, const WeightSpec& v,
                                    const InequalityParams& params,
                                    const HomogeneousGroup& g,
                                    const QuadratureSpec& spec) {
  const WeightSpec ud = WeightSpec::custom(
      dual_weight_transform(u.to_profile(g, params.beta, spec), g));
  const WeightSpec vd = WeightSpec::custom(
      dual_weight_transform(v.to_profile(g, params.beta, spec), g));
  return constant_bounds(ud, vd, params, g, spec);
}

MultinomialBounds multinomial_constant_bounds(const std::vector<double>& a, int k,
                                              double beta, const HomogeneousGroup& g) {
  (void)g;  // the bounds depend only on the exponents
  if (a.empty()) throw DomainError("multinomial bounds: empty exponent list");
  if (k < 0) throw DomainError("multinomial bounds: k must be >= 0");
  if (!(beta > 0.0)) throw DomainError("multinomial bounds: beta must be > 0");
  for (double ai : a) {
    if (!(ai > 0.0)) throw DomainError("multinomial bounds: exponents must be > 0");
  }
  double sum = 0.0;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i];
    if (a[i] < a[argmin]) argmin = i;
  }
  MultinomialBounds out;
  out.upper = std::exp((1.0 + k * sum) / beta);
  // Only one collection is guaranteed to achieve its bound; report the
  // weakest (minimum-sum) one rather than overclaim.
  out.lower = std::exp((1.0 + k * a[argmin]) / beta);
  out.lower_collection.assign(a.size(), 0);
  out.lower_collection[argmin] = k;
  return out;
}

}  // namespace lclab
