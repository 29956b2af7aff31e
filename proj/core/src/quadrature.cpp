#include "lclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace lclab {

namespace {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 abscissae).
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {0.129484966168870, 0.279705391489277,
                                     0.381830050505119, 0.417959183673469};

struct Panel {
  double a = 0.0, b = 0.0;
  double val = 0.0, err = 0.0;
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kKronrodWeights[7] * fc;
  double resg = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kKronrodWeights[i] * (f1 + f2);
    if (i % 2 == 1) resg += kGaussWeights[i / 2] * (f1 + f2);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.val = resk * h;
  p.err = std::max(std::abs(resk - resg) * h, std::abs(p.val) * 5e-16);
  return p;
}

struct AdaptResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.a > y.a;  // deterministic tie-break
  }
};

/// Adaptive refinement of an initial mesh; final sum is pairwise over cells
/// sorted by left endpoint, so the result is independent of split order.
template <class F>
AdaptResult adapt(const F& f, const std::vector<double>& mesh, double abs_goal,
                  double rel_tol, int max_cells) {
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    Panel p = gk15(f, mesh[i], mesh[i + 1]);
    total += p.val;
    err += p.err;
    heap.push(p);
  }
  int cells = static_cast<int>(mesh.size()) - 1;
  while (err > std::max(abs_goal, rel_tol * std::abs(total)) && cells < max_cells) {
    Panel worst = heap.top();
    if (worst.b - worst.a < 1e-14 * (std::abs(worst.a) + std::abs(worst.b))) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel l = gk15(f, worst.a, mid);
    Panel r = gk15(f, mid, worst.b);
    total += l.val + r.val - worst.val;
    err += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
    ++cells;
  }
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> vals, errs;
  vals.reserve(panels.size());
  errs.reserve(panels.size());
  for (const auto& p : panels) {
    vals.push_back(p.val);
    errs.push_back(p.err);
  }
  AdaptResult out;
  out.value = pairwise_sum(vals);
  out.abs_error = pairwise_sum(errs);
  out.converged = out.abs_error <= std::max(abs_goal, rel_tol * std::abs(out.value));
  return out;
}

LogExpansion scale_expansion(LogExpansion e, double k) {
  if (e.log_coeff != kNegInf) e.log_coeff *= k;
  // -inf * k: a vanishing factor makes the product vanish (k > 0 assumed for
  // -inf pieces; integrands never raise vanishing profiles to negative powers).
  e.exponent *= k;
  for (auto& t : e.terms) {
    t.log_abs_coeff += std::log(std::abs(k));
    if (k < 0) t.sign = -t.sign;
    if (k == 0) t.sign = 0;
  }
  return e;
}

void merge_into(LogExpansion& out, const LogExpansion& e, bool is_head) {
  out.log_coeff += e.log_coeff;
  out.exponent += e.exponent;
  for (const auto& t : e.terms) {
    if (t.sign == 0) continue;
    bool merged = false;
    for (auto& u : out.terms) {
      if (u.power == t.power) {
        if (u.sign == 0) {
          u = t;
        } else if (u.sign == t.sign) {
          u.log_abs_coeff = log_add_exp(u.log_abs_coeff, t.log_abs_coeff);
        } else {
          auto [lg, sgn] = log_sub_exp(u.log_abs_coeff, t.log_abs_coeff);
          // residues of analytically exact cancellations are float noise
          if (lg <= std::max(u.log_abs_coeff, t.log_abs_coeff) + std::log(1e-10)) {
            sgn = 0;
          }
          u.log_abs_coeff = lg;
          u.sign = sgn == 0 ? 0 : sgn * u.sign;
        }
        merged = true;
        break;
      }
    }
    if (!merged) out.terms.push_back(t);
  }
  out.boundary = is_head ? std::min(out.boundary, e.boundary)
                         : std::max(out.boundary, e.boundary);
  out.exact = out.exact && e.exact;
}

void compress(LogExpansion& e) {
  for (auto& t : e.terms) {
    if (t.sign != 0 && t.power == 0.0) {
      e.log_coeff += t.sign * std::exp(t.log_abs_coeff);
      t.sign = 0;
    }
  }
  std::erase_if(e.terms, [](const ExpTerm& t) {
    return t.sign == 0 || t.log_abs_coeff == kNegInf;
  });
  std::sort(e.terms.begin(), e.terms.end(),
            [](const ExpTerm& a, const ExpTerm& b) { return a.power < b.power; });
}

constexpr double kCorrectionThreshold = 1e-7;  // first-order closure keeps x^2/2 < 1e-14

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be > 0");
  }
  if (!(r_min_hint > 0.0) || !(r_min_hint < r_max_hint)) {
    throw DomainError("quadrature window requires 0 < r_min_hint < r_max_hint");
  }
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

// ---------------------------------------------------------------------------
// RadialIntegrand
// ---------------------------------------------------------------------------

RadialIntegrand::RadialIntegrand(std::vector<Term> terms) : terms_(std::move(terms)) {
  head_.boundary = kPosInf;
  head_.exact = true;
  tail_.boundary = 0.0;
  tail_.exact = true;
  for (const auto& t : terms_) {
    const auto& bps = t.profile.breakpoints();
    breakpoints_.insert(breakpoints_.end(), bps.begin(), bps.end());
    merge_into(head_, scale_expansion(t.profile.head(), t.power), /*is_head=*/true);
    merge_into(tail_, scale_expansion(t.profile.tail(), t.power), /*is_head=*/false);
  }
  compress(head_);
  compress(tail_);
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()),
                     breakpoints_.end());
}

double RadialIntegrand::log_eval(double r) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.power * t.profile.log_eval(r);
  return s;
}

// ---------------------------------------------------------------------------
// scaled_ln_mean: N(r) = m \int_0^1 t^{m-1} ln f(rt) dt
// ---------------------------------------------------------------------------

namespace {

struct LnMeanClosure {
  double value = 0.0;
  double error = 0.0;
};

// \int_0^eps m t^{m-1} ln f(rt) dt from the head model of f; exact on the
// model's validity range.
LnMeanClosure ln_mean_closure(const RadialProfile& f, const LogExpansion& head, double r,
                              double m, double eps) {
  LnMeanClosure out;
  const double em = std::exp(m * std::log(eps));
  double v = em * (head.log_coeff + head.exponent * (std::log(r * eps) - 1.0 / m));
  for (const auto& t : head.terms) {
    if (t.sign == 0) continue;
    if (m + t.power <= 0.0) {
      throw DivergenceError(Endpoint::zero,
                            "ln f has a non-integrable singularity at 0 against s^{m-1}");
    }
    v += t.sign * std::exp(t.log_abs_coeff + t.power * std::log(r)) * m *
         std::exp((m + t.power) * std::log(eps)) / (m + t.power);
  }
  if (!head.exact) {
    const double diff = f.log_eval(r * eps) - head.eval_log(r * eps);
    v += diff * em;
    out.error = std::abs(diff) * em;
  }
  out.value = v;
  return out;
}

}  // namespace

double scaled_ln_mean(const RadialProfile& f, double r, double m,
                      const QuadratureSpec& spec, bool force_quadrature) {
  spec.validate();
  if (!(r > 0.0)) throw DomainError("scaled_ln_mean: r must be > 0");
  if (!(m > 0.0)) throw DomainError("scaled_ln_mean: m must be > 0");

  if (!force_quadrature) {
    if (auto closed = f.closed_scaled_ln_mean(r, m)) return *closed;
  }

  const LogExpansion head = f.head();
  for (const auto& t : head.terms) {
    if (t.sign != 0 && m + t.power <= 0.0) {
      throw DivergenceError(Endpoint::zero,
                            "ln f has a non-integrable singularity at 0 against s^{m-1}");
    }
  }

  // Graded geometric mesh toward t = 0 with ratio 1/4; the stub below
  // 4^{-depth} is closed analytically from the head model.
  int depth = static_cast<int>(
      std::ceil(std::log(std::max(r / spec.abs_tol, 4.0)) / std::log(4.0)));
  if (head.boundary < r) {
    const int needed = static_cast<int>(
        std::ceil(std::log(r / head.boundary) / std::log(4.0)));
    depth = std::max(depth, needed);
  }
  depth = std::min(depth, std::max(spec.max_subdivisions - 8, 8));
  const double eps = std::exp(-depth * std::log(4.0));

  std::vector<double> mesh;
  for (int j = depth; j >= 0; --j) mesh.push_back(std::exp(-j * std::log(4.0)));
  for (double b : f.breakpoints()) {
    const double t = b / r;
    if (t > eps && t < 1.0) mesh.push_back(t);
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());

  const auto integrand = [&](double t) {
    return m * std::exp((m - 1.0) * std::log(t)) * f.log_eval(r * t);
  };
  AdaptResult body =
      adapt(integrand, mesh, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
  LnMeanClosure stub = ln_mean_closure(f, head, r, m, eps);

  const double value = body.value + stub.value;
  if (!body.converged) {
    std::ostringstream msg;
    msg << "scaled_ln_mean did not reach tolerance (error " << body.abs_error << ")";
    throw ToleranceError(value, body.abs_error + stub.error, msg.str());
  }
  return value;
}

double log_mean_inner(const RadialProfile& f, double r, double m,
                      const QuadratureSpec& spec) {
  const double n = scaled_ln_mean(f, r, m, spec);
  return n * std::exp(m * std::log(r)) / m;
}

// ---------------------------------------------------------------------------
// outer_integral
// ---------------------------------------------------------------------------

namespace {

struct LogClosure {
  double log_value = kNegInf;
  double log_error = kNegInf;
  bool skip_value = false;  // truncate_with_bound: report as error only
};

// \int_0^delta exp(ln h(r)) r^{Q-1} dr from the head model, first order in
// the vanishing correction terms.
LogClosure head_closure(const RadialIntegrand& h, const LogExpansion& head, double Q,
                        double delta) {
  LogClosure out;
  if (head.log_coeff == kNegInf) return out;
  const double E = head.exponent + Q;
  // Superpolynomially decaying heads were pushed below the negligible point.
  for (const auto& t : head.terms) {
    if (t.sign < 0 && t.power < 0) return out;
  }
  double correction = 0.0;
  for (const auto& t : head.terms) {
    if (t.sign == 0) continue;
    correction += t.sign * std::exp(t.log_abs_coeff + t.power * std::log(delta)) * E /
                  (E + t.power);
  }
  double log_v = head.log_coeff + E * std::log(delta) - std::log(E) +
                 std::log1p(correction);
  double log_e = log_v + std::log(kCorrectionThreshold);
  if (!head.exact) {
    const double diff = h.log_eval(delta) - head.eval_log(delta);
    log_v += diff;
    log_e = log_add_exp(log_e, log_v + std::log(std::abs(diff) + 1e-300));
  }
  out.log_value = log_v;
  out.log_error = log_e;
  return out;
}

// \int_M^inf; requires E = exponent + Q < 0 (checked by the caller).
LogClosure tail_closure(const RadialIntegrand& h, const LogExpansion& tail, double Q,
                        double M, TailPolicy policy) {
  LogClosure out;
  if (tail.log_coeff == kNegInf) return out;
  const double E = tail.exponent + Q;
  for (const auto& t : tail.terms) {
    if (t.sign < 0 && t.power > 0) return out;  // pushed past the negligible point
  }
  double correction = 0.0;
  for (const auto& t : tail.terms) {
    if (t.sign == 0) continue;
    correction += t.sign * std::exp(t.log_abs_coeff + t.power * std::log(M)) * E /
                  (E + t.power);
  }
  double log_v =
      tail.log_coeff + E * std::log(M) - std::log(-E) + std::log1p(correction);
  double log_e = log_v + std::log(kCorrectionThreshold);
  if (!tail.exact) {
    const double diff = h.log_eval(M) - tail.eval_log(M);
    log_v += diff;
    log_e = log_add_exp(log_e, log_v + std::log(std::abs(diff) + 1e-300));
  }
  if (policy == TailPolicy::truncate_with_bound) {
    out.skip_value = true;
    out.log_error = log_add_exp(log_v, log_e);
    return out;
  }
  out.log_value = log_v;
  out.log_error = log_e;
  return out;
}

struct NumericLog {
  double log_value = kNegInf;
  double log_error = kNegInf;
  bool converged = true;
};

// Adaptive integration of exp(phi(u)) over the mesh in u = ln r, scaled by
// the sampled maximum of phi so the exponentials stay in range.
template <class Phi>
NumericLog integrate_log_domain(const Phi& phi, std::vector<double> mesh,
                                const QuadratureSpec& spec) {
  NumericLog out;
  if (mesh.size() < 2) return out;
  double scale = kNegInf;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    scale = std::max(scale, phi(mesh[i]));
    scale = std::max(scale, phi(0.5 * (mesh[i] + mesh[i + 1])));
  }
  scale = std::max(scale, phi(mesh.back()));
  if (scale == kNegInf) return out;  // integrand vanishes on the window

  for (int attempt = 0; attempt < 4; ++attempt) {
    double seen_max = kNegInf;
    const auto f = [&](double u) {
      const double v = phi(u);
      seen_max = std::max(seen_max, v);
      return std::exp(v - scale);
    };
    AdaptResult res = adapt(f, mesh, spec.abs_tol * std::exp(-scale), spec.rel_tol,
                            spec.max_subdivisions);
    if (seen_max > scale + 600.0) {
      scale = seen_max;  // rescale and retry
      continue;
    }
    out.log_value = res.value > 0.0 ? scale + std::log(res.value) : kNegInf;
    out.log_error = res.abs_error > 0.0 ? scale + std::log(res.abs_error) : kNegInf;
    out.converged = res.converged;
    return out;
  }
  out.converged = false;
  return out;
}

IntegralResult divergent_result(Endpoint where, const std::string& why) {
  IntegralResult r;
  r.value = LogValue::from_log(kPosInf);
  r.divergent = true;
  r.endpoint = where;
  r.diagnosis = why;
  return r;
}

}  // namespace

IntegralResult outer_integral(const RadialIntegrand& h, const HomogeneousGroup& g,
                              double lower, const QuadratureSpec& spec) {
  spec.validate();
  if (lower < 0.0) throw DomainError("outer_integral: lower must be >= 0");
  const double Q = g.Q;
  const LogExpansion tail = h.tail();
  const LogExpansion head = h.head();

  // Divergence classification at infinity.
  bool superdecay_inf = false;
  for (const auto& t : tail.terms) {
    if (t.sign > 0 && t.power > 0) {
      return divergent_result(Endpoint::infinity,
                              "integrand grows superpolynomially at infinity");
    }
    if (t.sign < 0 && t.power > 0) superdecay_inf = true;
  }
  const double net_inf = tail.exponent + Q;
  if (!superdecay_inf && tail.log_coeff != kNegInf && net_inf >= 0.0) {
    std::ostringstream msg;
    msg << "net tail exponent " << tail.exponent << " >= -Q = " << -Q;
    return divergent_result(Endpoint::infinity, msg.str());
  }

  // Divergence classification at zero.
  bool superdecay_zero = false;
  if (lower == 0.0) {
    for (const auto& t : head.terms) {
      if (t.sign > 0 && t.power < 0) {
        return divergent_result(Endpoint::zero, "integrand grows superpolynomially at 0");
      }
      if (t.sign < 0 && t.power < 0) superdecay_zero = true;
    }
    if (!superdecay_zero && head.log_coeff != kNegInf && head.exponent + Q <= 0.0) {
      std::ostringstream msg;
      msg << "net head exponent " << head.exponent << " <= -Q = " << -Q;
      return divergent_result(Endpoint::zero, msg.str());
    }
  }

  // Lower edge of the numeric window / head closure point.
  double lo = lower;
  bool use_head_closure = false;
  if (lower == 0.0) {
    use_head_closure = true;
    double delta = std::min(spec.r_min_hint, head.boundary);
    for (const auto& t : head.terms) {
      if (t.sign == 0 || t.power <= 0.0) continue;
      // vanishing-at-0 corrections must be small at the closure point
      const double rb =
          std::exp((std::log(kCorrectionThreshold) - t.log_abs_coeff) / t.power);
      delta = std::min(delta, rb);
    }
    for (const auto& t : head.terms) {
      if (t.sign < 0 && t.power < 0) {
        // superpolynomial decay: close where the factor is below e^-60
        const double rb = std::exp((std::log(60.0) - t.log_abs_coeff) / t.power);
        delta = std::min(delta, rb);
      }
    }
    lo = delta;
  }

  // Upper edge / tail closure point.
  double hi = std::max({spec.r_max_hint, tail.boundary, lo * 2.0});
  if (!h.breakpoints().empty()) hi = std::max(hi, h.breakpoints().back() * 2.0);
  for (const auto& t : tail.terms) {
    if (t.sign == 0 || t.power >= 0.0) continue;
    const double rb =
        std::exp((std::log(kCorrectionThreshold) - t.log_abs_coeff) / t.power);
    hi = std::max(hi, rb);
  }
  if (superdecay_inf) {
    // push the closure point to where the decaying exponential is ~e^-60
    for (const auto& t : tail.terms) {
      if (t.sign < 0 && t.power > 0) {
        const double rb = std::exp((std::log(60.0) - t.log_abs_coeff) / t.power);
        hi = std::max(hi, rb);
      }
    }
  }

  // Numeric body over [lo, hi] in u = ln r.
  NumericLog body;
  if (lo < hi) {
    std::vector<double> mesh;
    const double ulo = std::log(lo), uhi = std::log(hi);
    mesh.push_back(ulo);
    const double step = std::log(10.0);
    for (double u = std::ceil(ulo / step) * step; u < uhi; u += step) {
      if (u > ulo) mesh.push_back(u);
    }
    for (double b : h.breakpoints()) {
      const double ub = std::log(b);
      if (ub > ulo && ub < uhi) mesh.push_back(ub);
    }
    mesh.push_back(uhi);
    std::sort(mesh.begin(), mesh.end());
    mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
    const auto phi = [&](double u) { return h.log_eval(std::exp(u)) + Q * u; };
    body = integrate_log_domain(phi, std::move(mesh), spec);
  }

  LogClosure head_part;
  if (use_head_closure) {
    if (superdecay_zero) {
      // Dropped mass below the pushed-in edge, bounded by integrand * r^Q.
      head_part.log_error = h.log_eval(lo) + Q * std::log(lo);
    } else {
      head_part = head_closure(h, head, Q, lo);
    }
  }

  LogClosure tail_part;
  if (superdecay_inf) {
    // Remaining mass beyond the pushed-out edge is below e^-60 of the local
    // scale; fold a crude bound into the error instead of integrating.
    tail_part.log_error = h.log_eval(hi) + Q * std::log(hi);
  } else {
    tail_part = tail_closure(h, tail, Q, hi, spec.tail_policy);
  }

  double log_value = body.log_value;
  if (head_part.log_value != kNegInf) log_value = log_add_exp(log_value, head_part.log_value);
  if (!tail_part.skip_value && tail_part.log_value != kNegInf) {
    log_value = log_add_exp(log_value, tail_part.log_value);
  }
  double log_error = body.log_error;
  log_error = log_add_exp(log_error, head_part.log_error);
  log_error = log_add_exp(log_error, tail_part.log_error);

  IntegralResult out;
  out.value = LogValue::from_log(log_value);
  out.rel_error = log_value == kNegInf ? 0.0 : std::exp(log_error - log_value);
  if (!body.converged) {
    std::ostringstream msg;
    msg << "outer_integral did not reach tolerance (relative error " << out.rel_error
        << ")";
    throw ToleranceError(log_value, out.rel_error, msg.str());
  }
  return out;
}

IntegralResult outer_integral_segment(const RadialIntegrand& h, const HomogeneousGroup& g,
                                      double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a > 0.0) || !(b > a)) throw DomainError("outer_integral_segment: need 0 < a < b");
  const double Q = g.Q;

  // Closed fast path when the tail model is exact over the whole segment and
  // corrections are already negligible at the left edge.
  const LogExpansion tail = h.tail();
  if (tail.exact && tail.boundary <= a && tail.log_coeff != kNegInf) {
    const double E = tail.exponent + Q;
    // Corrections must already be negligible at the left edge; first order
    // at the mass-dominant edge then suffices.
    bool small = true;
    double corr = 0.0;
    for (const auto& t : tail.terms) {
      if (t.sign == 0) continue;
      const double xa = std::exp(t.log_abs_coeff + t.power * std::log(a));
      if (xa > kCorrectionThreshold) {
        small = false;
        break;
      }
      corr += t.sign * std::exp(t.log_abs_coeff + t.power * std::log(E > 0 ? b : a));
    }
    if (small) {
      double log_base;
      if (E > 0.0) {
        log_base = tail.log_coeff + E * std::log(b) +
                   std::log1p(-std::exp(E * (std::log(a) - std::log(b)))) - std::log(E);
      } else if (E < 0.0) {
        log_base = tail.log_coeff + E * std::log(a) +
                   std::log1p(-std::exp(E * (std::log(b) - std::log(a)))) -
                   std::log(-E);
      } else {
        log_base = tail.log_coeff + std::log(std::log(b) - std::log(a));
      }
      IntegralResult out;
      out.value = LogValue::from_log(log_base + std::log1p(corr));
      out.rel_error = std::abs(corr) + 1e-15;
      return out;
    }
  }

  std::vector<double> mesh;
  const double ulo = std::log(a), uhi = std::log(b);
  mesh.push_back(ulo);
  const double step = std::log(10.0);
  for (double u = std::ceil(ulo / step) * step; u < uhi; u += step) {
    if (u > ulo) mesh.push_back(u);
  }
  for (double bp : h.breakpoints()) {
    const double ub = std::log(bp);
    if (ub > ulo && ub < uhi) mesh.push_back(ub);
  }
  mesh.push_back(uhi);
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());

  const auto phi = [&](double u) { return h.log_eval(std::exp(u)) + Q * u; };
  NumericLog body = integrate_log_domain(phi, std::move(mesh), spec);
  IntegralResult out;
  out.value = LogValue::from_log(body.log_value);
  out.rel_error =
      body.log_value == kNegInf ? 0.0 : std::exp(body.log_error - body.log_value);
  if (!body.converged) {
    throw ToleranceError(body.log_value, out.rel_error,
                         "outer_integral_segment did not reach tolerance");
  }
  return out;
}

IntegralResult polar_integral(const HomogeneousGroup& g, const RadialProfile& profile,
                              const QuadratureSpec& spec) {
  RadialIntegrand h({{profile, 1.0}});
  IntegralResult res = outer_integral(h, g, 0.0, spec);
  if (!res.divergent) {
    res.value = LogValue::from_log(res.value.log() + std::log(g.sphere_measure));
  }
  return res;
}

}  // namespace lclab
