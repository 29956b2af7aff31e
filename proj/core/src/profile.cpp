#include "lclab/profile.hpp"

#include <algorithm>
#include <cmath>

#include "lclab/errors.hpp"

namespace lclab {

const std::vector<double> ProfileImpl::kNoBreakpoints{};

const std::vector<double>& ProfileImpl::breakpoints() const { return kNoBreakpoints; }
std::optional<double> ProfileImpl::closed_scaled_ln_mean(double, double) const {
  return std::nullopt;
}
std::optional<PowerPiece> ProfileImpl::as_monomial() const { return std::nullopt; }
std::optional<std::pair<double, double>> ProfileImpl::as_exp_power() const {
  return std::nullopt;
}

namespace {

void check_radius(double r) {
  if (!(r > 0.0)) throw DomainError("radial profile evaluated at r <= 0");
}

void merge_expansion_term(std::vector<ExpTerm>& terms, const ExpTerm& t) {
  if (t.sign == 0 || t.log_abs_coeff == kNegInf) return;
  for (auto& u : terms) {
    if (u.power == t.power) {
      if (u.sign == 0) {
        u = t;
      } else if (u.sign == t.sign) {
        u.log_abs_coeff = log_add_exp(u.log_abs_coeff, t.log_abs_coeff);
      } else {
        auto [lg, sgn] = log_sub_exp(u.log_abs_coeff, t.log_abs_coeff);
        // A residue ten orders below the operands is float noise from an
        // analytically exact cancellation, not a term.
        if (lg <= std::max(u.log_abs_coeff, t.log_abs_coeff) + std::log(1e-10)) {
          sgn = 0;
        }
        u.log_abs_coeff = lg;
        u.sign = sgn == 0 ? 0 : sgn * u.sign;
      }
      return;
    }
  }
  terms.push_back(t);
}

void compress_terms(LogExpansion& e) {
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

}  // namespace

namespace detail {

double scaled_piece_moment(double r, double m, double a, double b, double log_coeff,
                           double exponent) {
  // m r^{-m} \int_a^b s^{m-1} (logC + e ln s) ds, 0 <= a <= b.
  if (!(b > a)) return 0.0;
  if (log_coeff == kNegInf) return kNegInf;
  const double lr = std::log(r);
  const double B = std::exp(m * (std::log(b) - lr));
  double acc = log_coeff * B + exponent * B * (std::log(b) - 1.0 / m);
  if (a > 0.0) {
    const double A = std::exp(m * (std::log(a) - lr));
    acc -= log_coeff * A + exponent * A * (std::log(a) - 1.0 / m);
  }
  return acc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Piecewise power: pieces_i = C_i r^{e_i} on (knot_{i-1}, knot_i].
// Covers constants, monomials, the cutoff families, and the necessity proof's
// test functions; closed under products, inversion, and substitution.
// ---------------------------------------------------------------------------
class PiecewisePowerImpl final : public ProfileImpl {
 public:
  PiecewisePowerImpl(std::vector<double> knots, std::vector<PowerPiece> pieces)
      : knots_(std::move(knots)), pieces_(std::move(pieces)) {
    if (pieces_.size() != knots_.size() + 1) {
      throw DomainError("piecewise power: need one more piece than knots");
    }
    double prev = 0.0;
    for (double k : knots_) {
      if (!(k > prev)) throw DomainError("piecewise power: knots must be increasing and > 0");
      prev = k;
    }
  }

  double log_eval(double r) const override {
    check_radius(r);
    const auto& p = piece_at(r);
    return p.log_coeff == kNegInf ? kNegInf : p.log_coeff + p.exponent * std::log(r);
  }

  const std::vector<double>& breakpoints() const override { return knots_; }

  LogExpansion head() const override {
    LogExpansion e;
    e.log_coeff = pieces_.front().log_coeff;
    e.exponent = pieces_.front().exponent;
    e.boundary = knots_.empty() ? kPosInf : knots_.front();
    return e;
  }

  LogExpansion tail() const override {
    LogExpansion e;
    e.log_coeff = pieces_.back().log_coeff;
    e.exponent = pieces_.back().exponent;
    e.boundary = knots_.empty() ? 0.0 : knots_.back();
    return e;
  }

  std::optional<double> closed_scaled_ln_mean(double r, double m) const override {
    double acc = 0.0;
    double lo = 0.0;
    for (std::size_t i = 0; i < pieces_.size() && lo < r; ++i) {
      const double hi = std::min(i < knots_.size() ? knots_[i] : kPosInf, r);
      if (pieces_[i].log_coeff == kNegInf) return kNegInf;  // ln 0 inside (0, r)
      acc += detail::scaled_piece_moment(r, m, lo, hi, pieces_[i].log_coeff,
                                         pieces_[i].exponent);
      lo = hi;
    }
    return acc;
  }

  std::optional<PowerPiece> as_monomial() const override {
    if (knots_.empty()) return pieces_.front();
    return std::nullopt;
  }

  ProfilePtr invert() const override {
    std::vector<double> knots(knots_.rbegin(), knots_.rend());
    for (double& k : knots) k = 1.0 / k;
    std::vector<PowerPiece> pieces(pieces_.rbegin(), pieces_.rend());
    for (auto& p : pieces) p.exponent = -p.exponent;
    return std::make_shared<PiecewisePowerImpl>(std::move(knots), std::move(pieces));
  }

  ProfilePtr substitute(double s) const override {
    std::vector<double> knots = knots_;
    for (double& k : knots) k = std::pow(k, 1.0 / s);
    std::vector<PowerPiece> pieces = pieces_;
    for (auto& p : pieces) p.exponent *= s;
    return std::make_shared<PiecewisePowerImpl>(std::move(knots), std::move(pieces));
  }

  ProfilePtr power(double k) const override {
    std::vector<PowerPiece> pieces = pieces_;
    for (auto& p : pieces) {
      if (p.log_coeff == kNegInf) {
        if (k < 0.0) throw DomainError("cannot raise a vanishing piece to a negative power");
        if (k == 0.0) p.log_coeff = 0.0;
      } else {
        p.log_coeff *= k;
      }
      p.exponent *= k;
    }
    return std::make_shared<PiecewisePowerImpl>(knots_, std::move(pieces));
  }

  const std::vector<PowerPiece>& pieces() const { return pieces_; }
  const std::vector<double>& knots() const { return knots_; }

 private:
  const PowerPiece& piece_at(double r) const {
    const std::size_t i =
        std::lower_bound(knots_.begin(), knots_.end(), r) - knots_.begin();
    return pieces_[i];
  }

  std::vector<double> knots_;
  std::vector<PowerPiece> pieces_;
};

// ---------------------------------------------------------------------------
// exp(eta r^gamma)
// ---------------------------------------------------------------------------
class ExpPowerImpl final : public ProfileImpl {
 public:
  ExpPowerImpl(double eta, double gamma) : eta_(eta), gamma_(gamma) {}

  double log_eval(double r) const override {
    check_radius(r);
    return eta_ * std::pow(r, gamma_);
  }

  LogExpansion head() const override { return expansion(kPosInf); }
  LogExpansion tail() const override { return expansion(0.0); }

  std::optional<double> closed_scaled_ln_mean(double r, double m) const override {
    if (m + gamma_ <= 0.0) {
      throw DivergenceError(Endpoint::zero,
                            "ln f ~ eta r^gamma not integrable against s^{m-1} at 0");
    }
    return eta_ * std::pow(r, gamma_) * m / (m + gamma_);
  }

  std::optional<std::pair<double, double>> as_exp_power() const override {
    return std::make_pair(eta_, gamma_);
  }

  ProfilePtr invert() const override {
    return std::make_shared<ExpPowerImpl>(eta_, -gamma_);
  }
  ProfilePtr substitute(double s) const override {
    return std::make_shared<ExpPowerImpl>(eta_, gamma_ * s);
  }
  ProfilePtr power(double k) const override {
    return std::make_shared<ExpPowerImpl>(eta_ * k, gamma_);
  }

 private:
  LogExpansion expansion(double boundary) const {
    LogExpansion e;
    e.boundary = boundary;
    e.terms.push_back(ExpTerm::from_coeff(eta_, gamma_));
    return e;
  }

  double eta_;
  double gamma_;
};

// ---------------------------------------------------------------------------
// Product of profiles
// ---------------------------------------------------------------------------
class ProductImpl final : public ProfileImpl {
 public:
  explicit ProductImpl(std::vector<RadialProfile> factors) : factors_(std::move(factors)) {
    for (const auto& f : factors_) {
      const auto& bps = f.breakpoints();
      breakpoints_.insert(breakpoints_.end(), bps.begin(), bps.end());
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()),
                       breakpoints_.end());
  }

  double log_eval(double r) const override {
    double s = 0.0;
    for (const auto& f : factors_) s += f.log_eval(r);
    return s;
  }

  const std::vector<double>& breakpoints() const override { return breakpoints_; }

  LogExpansion head() const override {
    LogExpansion out;
    out.boundary = kPosInf;
    for (const auto& f : factors_) {
      LogExpansion e = f.head();
      out.log_coeff += e.log_coeff;
      out.exponent += e.exponent;
      for (const auto& t : e.terms) merge_expansion_term(out.terms, t);
      out.boundary = std::min(out.boundary, e.boundary);
      out.exact = out.exact && e.exact;
    }
    compress_terms(out);
    return out;
  }

  LogExpansion tail() const override {
    LogExpansion out;
    out.boundary = 0.0;
    for (const auto& f : factors_) {
      LogExpansion e = f.tail();
      out.log_coeff += e.log_coeff;
      out.exponent += e.exponent;
      for (const auto& t : e.terms) merge_expansion_term(out.terms, t);
      out.boundary = std::max(out.boundary, e.boundary);
      out.exact = out.exact && e.exact;
    }
    compress_terms(out);
    return out;
  }

  std::optional<double> closed_scaled_ln_mean(double r, double m) const override {
    // The log-integral is linear, so a closed form exists iff every factor
    // has one.
    double acc = 0.0;
    for (const auto& f : factors_) {
      auto c = f.closed_scaled_ln_mean(r, m);
      if (!c) return std::nullopt;
      if (*c == kNegInf) return kNegInf;
      acc += *c;
    }
    return acc;
  }

  ProfilePtr invert() const override {
    std::vector<RadialProfile> inv;
    inv.reserve(factors_.size());
    for (const auto& f : factors_) inv.push_back(f.inverted());
    return std::make_shared<ProductImpl>(std::move(inv));
  }

  ProfilePtr substitute(double s) const override {
    std::vector<RadialProfile> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.substituted(s));
    return std::make_shared<ProductImpl>(std::move(out));
  }

  ProfilePtr power(double k) const override {
    std::vector<RadialProfile> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.powered(k));
    return std::make_shared<ProductImpl>(std::move(out));
  }

  const std::vector<RadialProfile>& factors() const { return factors_; }

 private:
  std::vector<RadialProfile> factors_;
  std::vector<double> breakpoints_;
};

// ---------------------------------------------------------------------------
// (sum_i C_i r^{e_i})^k with C_i > 0
// ---------------------------------------------------------------------------
class PowerSumImpl final : public ProfileImpl {
 public:
  PowerSumImpl(std::vector<PowerPiece> terms, double k) : terms_(std::move(terms)), k_(k) {
    if (terms_.empty()) throw DomainError("power sum: empty term list");
    std::sort(terms_.begin(), terms_.end(),
              [](const PowerPiece& a, const PowerPiece& b) {
                return a.exponent < b.exponent;
              });
    std::vector<PowerPiece> merged;
    for (const auto& t : terms_) {
      if (t.log_coeff == kNegInf) throw DomainError("power sum: zero coefficient");
      if (!merged.empty() && merged.back().exponent == t.exponent) {
        merged.back().log_coeff = log_add_exp(merged.back().log_coeff, t.log_coeff);
      } else {
        merged.push_back(t);
      }
    }
    terms_ = std::move(merged);
  }

  double log_eval(double r) const override {
    check_radius(r);
    const double lr = std::log(r);
    double m = kNegInf;
    for (const auto& t : terms_) m = std::max(m, t.log_coeff + t.exponent * lr);
    double s = 0.0;
    for (const auto& t : terms_) s += std::exp(t.log_coeff + t.exponent * lr - m);
    return k_ * (m + std::log(s));
  }

  LogExpansion head() const override { return expansion(/*at_zero=*/true); }
  LogExpansion tail() const override { return expansion(/*at_zero=*/false); }

  ProfilePtr invert() const override {
    std::vector<PowerPiece> terms = terms_;
    for (auto& t : terms) t.exponent = -t.exponent;
    return std::make_shared<PowerSumImpl>(std::move(terms), k_);
  }
  ProfilePtr substitute(double s) const override {
    std::vector<PowerPiece> terms = terms_;
    for (auto& t : terms) t.exponent *= s;
    return std::make_shared<PowerSumImpl>(std::move(terms), k_);
  }
  ProfilePtr power(double k) const override {
    return std::make_shared<PowerSumImpl>(terms_, k_ * k);
  }

 private:
  // ln f = k [lc_dom + e_dom ln r + ln(1 + X)], X = sum of vanishing ratios.
  // First and second order in X; boundary where max ratio <= 1e-4 so the
  // dropped X^3 piece stays below ~1e-12.
  LogExpansion expansion(bool at_zero) const {
    const PowerPiece& dom = at_zero ? terms_.front() : terms_.back();
    LogExpansion e;
    e.log_coeff = k_ * dom.log_coeff;
    e.exponent = k_ * dom.exponent;
    e.boundary = at_zero ? kPosInf : 0.0;
    if (terms_.size() == 1) return e;

    e.exact = false;
    const double kThreshold = 1e-4;
    std::vector<std::pair<double, double>> ratios;  // (log coeff, power), power sign fixed
    for (const auto& t : terms_) {
      if (&t == &dom) continue;
      const double dlc = t.log_coeff - dom.log_coeff;
      const double dp = t.exponent - dom.exponent;
      ratios.emplace_back(dlc, dp);
      // max_j ratio_j(r) = threshold defines the validity boundary.
      const double rb = std::exp((std::log(kThreshold) - dlc) / dp);
      e.boundary = at_zero ? std::min(e.boundary, rb) : std::max(e.boundary, rb);
      ExpTerm first;
      first.sign = k_ > 0 ? 1 : (k_ < 0 ? -1 : 0);
      first.log_abs_coeff = dlc + std::log(std::abs(k_));
      first.power = dp;
      merge_expansion_term(e.terms, first);
    }
    // -(k/2) X^2 expanded pairwise.
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      for (std::size_t j = i; j < ratios.size(); ++j) {
        const double factor = (i == j ? 0.5 : 1.0) * std::abs(k_);
        ExpTerm second;
        second.sign = k_ > 0 ? -1 : 1;
        second.log_abs_coeff =
            ratios[i].first + ratios[j].first + std::log(factor);
        second.power = ratios[i].second + ratios[j].second;
        merge_expansion_term(e.terms, second);
      }
    }
    compress_terms(e);
    return e;
  }

  std::vector<PowerPiece> terms_;
  double k_;
};

// ---------------------------------------------------------------------------
// Sampled profile: log-log linear interpolation, endpoint-slope extrapolation
// ---------------------------------------------------------------------------
class SampledImpl final : public ProfileImpl {
 public:
  SampledImpl(std::vector<double> nodes, std::vector<double> values)
      : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2 || nodes_.size() != values.size()) {
      throw DomainError("sampled profile: need >= 2 nodes with matching values");
    }
    double prev = 0.0;
    for (double n : nodes_) {
      if (!(n > prev)) throw DomainError("sampled profile: nodes must be increasing and > 0");
      prev = n;
    }
    log_nodes_.reserve(nodes_.size());
    log_values_.reserve(values.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!(values[i] > 0.0)) throw DomainError("sampled profile: values must be > 0");
      log_nodes_.push_back(std::log(nodes_[i]));
      log_values_.push_back(std::log(values[i]));
    }
  }

  double log_eval(double r) const override {
    check_radius(r);
    const double lr = std::log(r);
    const std::size_t n = log_nodes_.size();
    std::size_t i =
        std::upper_bound(log_nodes_.begin(), log_nodes_.end(), lr) - log_nodes_.begin();
    if (i == 0) i = 1;
    if (i == n) i = n - 1;
    const double t = (lr - log_nodes_[i - 1]) / (log_nodes_[i] - log_nodes_[i - 1]);
    return log_values_[i - 1] + t * (log_values_[i] - log_values_[i - 1]);
  }

  const std::vector<double>& breakpoints() const override { return nodes_; }

  LogExpansion head() const override { return end_expansion(0, 1, nodes_.front()); }
  LogExpansion tail() const override {
    const std::size_t n = nodes_.size();
    return end_expansion(n - 2, n - 1, nodes_.back());
  }

  ProfilePtr invert() const override {
    std::vector<double> nodes(nodes_.rbegin(), nodes_.rend());
    for (double& x : nodes) x = 1.0 / x;
    std::vector<double> values;
    values.reserve(nodes_.size());
    for (auto it = log_values_.rbegin(); it != log_values_.rend(); ++it) {
      values.push_back(std::exp(*it));
    }
    return std::make_shared<SampledImpl>(std::move(nodes), std::move(values));
  }

  ProfilePtr substitute(double s) const override {
    std::vector<double> nodes = nodes_;
    for (double& x : nodes) x = std::pow(x, 1.0 / s);
    std::vector<double> values;
    values.reserve(nodes_.size());
    for (double lv : log_values_) values.push_back(std::exp(lv));
    if (s < 0.0) {
      std::reverse(nodes.begin(), nodes.end());
      std::reverse(values.begin(), values.end());
    }
    return std::make_shared<SampledImpl>(std::move(nodes), std::move(values));
  }

  ProfilePtr power(double k) const override {
    std::vector<double> values;
    values.reserve(nodes_.size());
    for (double lv : log_values_) values.push_back(std::exp(lv * k));
    return std::make_shared<SampledImpl>(nodes_, std::move(values));
  }

 private:
  LogExpansion end_expansion(std::size_t i, std::size_t j, double boundary) const {
    const double slope =
        (log_values_[j] - log_values_[i]) / (log_nodes_[j] - log_nodes_[i]);
    LogExpansion e;
    e.exponent = slope;
    e.log_coeff = log_values_[i] - slope * log_nodes_[i];
    e.boundary = boundary;
    return e;
  }

  std::vector<double> nodes_;
  std::vector<double> log_nodes_;
  std::vector<double> log_values_;
};

// ---------------------------------------------------------------------------
// Generic r -> f(1/r) wrapper for impls without a structural inverse
// ---------------------------------------------------------------------------
class InvertedImpl final : public ProfileImpl {
 public:
  explicit InvertedImpl(ProfilePtr base) : base_(std::move(base)) {
    for (double b : base_->breakpoints()) breakpoints_.push_back(1.0 / b);
    std::sort(breakpoints_.begin(), breakpoints_.end());
  }

  double log_eval(double r) const override {
    check_radius(r);
    return base_->log_eval(1.0 / r);
  }

  const std::vector<double>& breakpoints() const override { return breakpoints_; }

  LogExpansion head() const override { return swap_expansion(base_->tail()); }
  LogExpansion tail() const override { return swap_expansion(base_->head()); }

  ProfilePtr invert() const override { return base_; }
  ProfilePtr substitute(double s) const override {
    return std::make_shared<InvertedImpl>(base_->substitute(s));
  }
  ProfilePtr power(double k) const override {
    return std::make_shared<InvertedImpl>(base_->power(k));
  }

 private:
  static LogExpansion swap_expansion(LogExpansion e) {
    e.exponent = -e.exponent;
    for (auto& t : e.terms) t.power = -t.power;
    e.boundary = e.boundary == 0.0 ? kPosInf : 1.0 / e.boundary;
    return e;
  }

  ProfilePtr base_;
  std::vector<double> breakpoints_;
};

namespace detail {
ProfilePtr make_inverted(ProfilePtr base) {
  return std::make_shared<InvertedImpl>(std::move(base));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// RadialProfile
// ---------------------------------------------------------------------------

RadialProfile::RadialProfile(ProfilePtr impl) : impl_(std::move(impl)) {}
RadialProfile::RadialProfile() : RadialProfile(constant(1.0).impl_) {}

RadialProfile RadialProfile::from_impl(ProfilePtr impl) {
  return RadialProfile(std::move(impl));
}

RadialProfile RadialProfile::constant(double value) {
  if (!(value > 0.0)) throw DomainError("constant profile must be > 0");
  return monomial(std::log(value), 0.0);
}

RadialProfile RadialProfile::power_law(double exponent) { return monomial(0.0, exponent); }

RadialProfile RadialProfile::monomial(double log_coeff, double exponent) {
  return RadialProfile(std::make_shared<PiecewisePowerImpl>(
      std::vector<double>{}, std::vector<PowerPiece>{{log_coeff, exponent}}));
}

RadialProfile RadialProfile::ball_power(double a, const HomogeneousGroup& g) {
  return monomial(a * g.log_unit_ball_volume(), a * g.Q);
}

RadialProfile RadialProfile::exp_power(double eta, double gamma) {
  if (eta == 0.0 || gamma == 0.0) return constant(std::exp(eta * (gamma == 0.0 ? 1.0 : 0.0)));
  return RadialProfile(std::make_shared<ExpPowerImpl>(eta, gamma));
}

RadialProfile RadialProfile::cutoff_power_tail(double r0, double inner_value, double gamma,
                                               double tail_mult) {
  if (!(r0 > 0.0)) throw DomainError("cutoff profile: r0 must be > 0");
  if (!(inner_value > 0.0)) throw DomainError("cutoff profile: inner value must be > 0");
  if (tail_mult < 0.0) throw DomainError("cutoff profile: tail multiplier must be >= 0");
  const double tail_log = tail_mult == 0.0 ? kNegInf : std::log(tail_mult);
  return piecewise_power({r0}, {{std::log(inner_value), 0.0}, {tail_log, -gamma}});
}

RadialProfile RadialProfile::piecewise_power(std::vector<double> knots,
                                             std::vector<PowerPiece> pieces) {
  return RadialProfile(
      std::make_shared<PiecewisePowerImpl>(std::move(knots), std::move(pieces)));
}

RadialProfile RadialProfile::sum_power(const std::vector<double>& a,
                                       const HomogeneousGroup& g, int k) {
  if (a.empty()) throw DomainError("sum_power: empty exponent list");
  std::vector<PowerPiece> terms;
  terms.reserve(a.size());
  for (double ai : a) {
    terms.push_back({ai * g.log_unit_ball_volume(), ai * g.Q});
  }
  return power_sum(std::move(terms), static_cast<double>(k));
}

RadialProfile RadialProfile::power_sum(std::vector<PowerPiece> terms, double k) {
  if (terms.empty()) throw DomainError("power_sum: empty term list");
  if (k == 0.0) return constant(1.0);
  if (terms.size() == 1) return monomial(k * terms[0].log_coeff, k * terms[0].exponent);
  return RadialProfile(std::make_shared<PowerSumImpl>(std::move(terms), k));
}

RadialProfile RadialProfile::sampled(std::vector<double> nodes, std::vector<double> values) {
  return RadialProfile(std::make_shared<SampledImpl>(std::move(nodes), std::move(values)));
}

RadialProfile RadialProfile::product(std::vector<RadialProfile> factors) {
  // Fold piecewise-power factors together so symbolic closed forms survive
  // products (the proofs' test functions are all of this shape).
  std::vector<RadialProfile> rest;
  std::vector<double> knots;
  std::vector<PowerPiece> pieces{{0.0, 0.0}};
  bool have_pw = false;

  auto fold_pw = [&](const PiecewisePowerImpl& pw) {
    std::vector<double> merged_knots;
    std::merge(knots.begin(), knots.end(), pw.knots().begin(), pw.knots().end(),
               std::back_inserter(merged_knots));
    merged_knots.erase(std::unique(merged_knots.begin(), merged_knots.end()),
                       merged_knots.end());
    std::vector<PowerPiece> merged(merged_knots.size() + 1);
    for (std::size_t i = 0; i <= merged_knots.size(); ++i) {
      // Representative radius inside cell i.
      const double lo = i == 0 ? 0.0 : merged_knots[i - 1];
      const double hi = i == merged_knots.size() ? kPosInf : merged_knots[i];
      const double rep = std::isinf(hi) ? lo * 2.0 + 1.0 : 0.5 * (lo + hi);
      auto locate = [rep](const std::vector<double>& ks) {
        return static_cast<std::size_t>(
            std::lower_bound(ks.begin(), ks.end(), rep) - ks.begin());
      };
      const PowerPiece& a = pieces[locate(knots)];
      const PowerPiece& b = pw.pieces()[locate(pw.knots())];
      merged[i].log_coeff = a.log_coeff + b.log_coeff;
      merged[i].exponent = a.exponent + b.exponent;
    }
    knots = std::move(merged_knots);
    pieces = std::move(merged);
    have_pw = true;
  };

  std::vector<RadialProfile> queue = std::move(factors);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const RadialProfile& f = queue[qi];
    if (const auto* prod = dynamic_cast<const ProductImpl*>(f.impl().get())) {
      for (const auto& inner : prod->factors()) queue.push_back(inner);
      continue;
    }
    if (const auto* pw = dynamic_cast<const PiecewisePowerImpl*>(f.impl().get())) {
      fold_pw(*pw);
      continue;
    }
    rest.push_back(f);
  }

  const bool pw_trivial =
      knots.empty() && pieces[0].log_coeff == 0.0 && pieces[0].exponent == 0.0;
  if (rest.empty()) return piecewise_power(std::move(knots), std::move(pieces));
  if (have_pw && !pw_trivial) {
    rest.push_back(piecewise_power(std::move(knots), std::move(pieces)));
  }
  if (rest.size() == 1) return rest[0];
  return RadialProfile(std::make_shared<ProductImpl>(std::move(rest)));
}

double RadialProfile::log_eval(double r) const { return impl_->log_eval(r); }
const std::vector<double>& RadialProfile::breakpoints() const {
  return impl_->breakpoints();
}
LogExpansion RadialProfile::head() const { return impl_->head(); }
LogExpansion RadialProfile::tail() const { return impl_->tail(); }
std::optional<double> RadialProfile::closed_scaled_ln_mean(double r, double m) const {
  return impl_->closed_scaled_ln_mean(r, m);
}
std::optional<PowerPiece> RadialProfile::as_monomial() const { return impl_->as_monomial(); }
std::optional<std::pair<double, double>> RadialProfile::as_exp_power() const {
  return impl_->as_exp_power();
}

RadialProfile RadialProfile::inverted() const { return RadialProfile(impl_->invert()); }

RadialProfile RadialProfile::substituted(double s) const {
  if (s == 0.0) throw DomainError("substitution exponent must be nonzero");
  if (s == 1.0) return *this;
  return RadialProfile(impl_->substitute(s));
}

RadialProfile RadialProfile::powered(double k) const {
  if (k == 1.0) return *this;
  return RadialProfile(impl_->power(k));
}

RadialProfile RadialProfile::scaled(double factor) const {
  if (factor == 1.0) return *this;
  return product({constant(factor), *this});
}

RadialProfile operator*(const RadialProfile& a, const RadialProfile& b) {
  return RadialProfile::product({a, b});
}

ProfilePtr ProfileImpl::invert() const {
  return detail::make_inverted(shared_from_this());
}
ProfilePtr ProfileImpl::substitute(double) const {
  throw DomainError("profile does not support substitution");
}
ProfilePtr ProfileImpl::power(double) const {
  throw DomainError("profile does not support powers");
}

}  // namespace lclab
