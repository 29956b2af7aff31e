// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cli_run.hpp"
#include "lclab/verifier.hpp"

using namespace lclab;
using nlohmann::json;

namespace {

const QuadratureSpec kSpec;

struct Harness {
  int failures = 0;

  void report(int number, const std::string& title, bool ok, const std::string& detail) {
    std::printf("%s  [%2d] %s (%s)\n", ok ? "PASS" : "FAIL", number, title.c_str(),
                detail.c_str());
    if (!ok) ++failures;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

InequalityParams sharp_params(double beta) {
  InequalityParams par;
  par.beta = beta;
  return par;
}

const std::vector<std::tuple<double, double, double>> kSharpTriples = {
    {0.5, 2.0, 4.0}, {1.0, 1.0, 1.0}, {-0.5, 0.7, 3.0}};

// --- 1 ------------------------------------------------------------------
void criterion_normalization(Harness& h) {
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0, 5.0}) {
    for (double Q : {1.0, 2.0, 4.0, 7.3}) {
      auto g = make_custom_group(Q, 2.0);
      for (double alpha : {0.1, 1.0, Q, 10.0}) {
        const double mean =
            forward_mean(RadialProfile::power_law(alpha), 1.0, beta, g, kSpec).value();
        worst = std::max(worst, std::abs(std::exp(alpha / (beta * Q)) * mean - 1.0));
      }
    }
  }
  h.report(1, "normalization identity on the (beta, Q, alpha) grid", worst <= 1e-10,
           "max |deviation| = " + fmt(worst));
}

// --- 2 ------------------------------------------------------------------
void criterion_classical_constant(Harness& h) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lclab_acceptance_bounds";
  fs::remove_all(dir);
  const json config = {
      {"group", "euclidean:1"},
      {"params", {{"p", 1.0}, {"q", 1.0}, {"beta", 1.0}}},
      {"weights", {{"u", "ball_power:0"}, {"v", "ball_power:0"}}},
  };
  cli::RunOptions opts;
  opts.out_dir = dir.string();
  std::ostringstream log;
  const int code = cli::run_command(cli::Command::bounds, config, opts, log);
  double upper = 0.0, alpha_star = 0.0;
  bool ok = code == 0;
  if (ok) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      std::ifstream in(entry.path());
      json rep;
      in >> rep;
      upper = rep["upper"].get<double>();
      alpha_star = rep["alpha_star_upper"].get<double>();
    }
    ok = std::abs(upper - std::exp(1.0)) <= 1e-9 * std::exp(1.0) &&
         std::abs(alpha_star - 1.0) <= 1e-6;
  }
  fs::remove_all(dir);
  h.report(2, "classical exponential-mean constant e via the bounds command", ok,
           "upper = " + fmt(upper) + ", alpha* = " + fmt(alpha_star));
}

// --- 3 ------------------------------------------------------------------
void criterion_sharp_constant(Harness& h) {
  bool ok = true;
  std::string detail;
  for (auto [a, beta, Q] : kSharpTriples) {
    auto g = make_custom_group(Q, 2.0);
    auto bounds = constant_bounds(WeightSpec::ball_power(a), WeightSpec::ball_power(a),
                                  sharp_params(beta), g, kSpec);
    const double sharp = std::exp((a + 1.0) / beta);
    if (std::abs(bounds.upper - sharp) > 1e-9 * sharp) ok = false;

    auto seq =
        sharpness_probe_power(a, beta, g, default_probe_gammas(a, 11), kSpec);
    for (const auto& pt : seq.points) {
      if (std::abs(pt.ratio_numeric - pt.ratio_closed_form) >
          1e-6 * pt.ratio_closed_form) {
        ok = false;
      }
    }
    const double last = seq.points.back().ratio_numeric;
    if (!(last >= sharp * (1.0 - 5e-3))) ok = false;
    if (!seq.monotone) ok = false;
    detail += fmt(bounds.upper) + "/" + fmt(last) + " ";
  }
  h.report(3, "sharp constants e^{(a+1)/beta} with squeezing probe ratios", ok,
           "upper/last-probe per triple: " + detail);
}

// --- 4 ------------------------------------------------------------------
void criterion_dual_sharp_constant(Harness& h) {
  bool ok = true;
  std::string detail;
  for (auto [a, beta, Q] : kSharpTriples) {
    auto g = make_custom_group(Q, 2.0);
    auto bounds = dual_constant_bounds(WeightSpec::ball_power(a),
                                       WeightSpec::ball_power(a), sharp_params(beta), g,
                                       kSpec);
    const double sharp = std::exp(-(a + 1.0) / beta);
    if (std::abs(bounds.upper - sharp) > 1e-9 * sharp) ok = false;

    auto seq = sharpness_probe_dual(a, beta, g, default_probe_gammas(a, 11), kSpec);
    if (std::abs(seq.limit_constant - sharp) > 1e-12 * sharp) ok = false;
    const double last = seq.points.back().ratio_numeric;
    if (!(last >= sharp * (1.0 - 5e-3))) ok = false;
    detail += fmt(bounds.upper) + " ";
  }
  h.report(4, "dual sharp constants e^{-(a+1)/beta}", ok, "uppers: " + detail);
}

// --- 5 ------------------------------------------------------------------
void criterion_power_weights(Harness& h) {
  std::mt19937_64 rng(50505);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  bool ok = true;
  double worst = 0.0, worst_flat = 1.0;
  int infinite_misses = 0;
  for (int i = 0; i < 20; ++i) {
    const double p = 0.6 + 1.2 * dist(rng);
    const double q = p + 1.1 * dist(rng);
    const double beta = 0.55 + 1.9 * dist(rng);
    const double a = -0.6 + 2.2 * dist(rng);
    const double b = p * (1.0 + a) / q - 1.0;
    auto g = make_custom_group(i % 3 == 0 ? 1.0 : (i % 3 == 1 ? 2.5 : 4.0), 2.0);
    const double alphas[3] = {g.Q / 2.0, g.Q, 2.0 * g.Q};
    InequalityParams params;
    params.p = p;
    params.q = q;
    params.beta = beta;
    params.alpha = alphas[i % 3];

    const double closed = A_alpha_power_closed(a, b, params, g);
    auto numeric =
        A_alpha(WeightSpec::ball_power(a), WeightSpec::ball_power(b), params, g, kSpec);
    if (!numeric.finite) {
      ok = false;
      continue;
    }
    worst = std::max(worst, std::abs(numeric.A_value / closed - 1.0));
    worst_flat = std::max(worst_flat, numeric.grid_flatness);

    // unbalanced perturbation must be flagged infinite
    auto unbal = A_alpha(WeightSpec::ball_power(a),
                         WeightSpec::ball_power(b + 0.25 + 0.5 * dist(rng)), params, g,
                         kSpec);
    if (unbal.finite) ++infinite_misses;
  }
  if (worst > 1e-8 || worst_flat > 1.0 + 1e-7 || infinite_misses > 0) ok = false;
  h.report(5, "power-weight criterion: closed form, flat T(R), unbalanced flagged", ok,
           "max rel diff " + fmt(worst) + ", max flatness-1 " + fmt(worst_flat - 1.0) +
               ", misses " + std::to_string(infinite_misses));
}

// --- 6 ------------------------------------------------------------------
void criterion_infimum_identity(Harness& h) {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  bool ok = true;
  double worst = 0.0;
  int done = 0;
  while (done < 10) {
    const double p = 0.6 + dist(rng);
    const double q = p + 0.3 + 1.2 * dist(rng);
    const double beta = 0.5 + 2.0 * dist(rng);
    if (beta * (1.0 - p / q) >= 0.95) continue;  // interior minimum needed
    const double a = -0.4 + 1.5 * dist(rng);
    const double b = p * (1.0 + a) / q - 1.0;
    auto g = make_custom_group(done % 2 ? 1.0 : 2.2, 3.0);
    InequalityParams par = sharp_params(beta);
    par.p = p;
    par.q = q;
    auto bounds_pq = constant_bounds(WeightSpec::ball_power(a),
                                     WeightSpec::ball_power(b), par, g, kSpec);
    // strip the prefactor: bracket = upper / ((p/q)^{1/q} beta^{1/p-1/q} e^{b/(p beta)})
    const double prefactor = std::pow(p / q, 1.0 / q) *
                             std::pow(beta, 1.0 / p - 1.0 / q) *
                             std::exp(b / (p * beta));
    const double bracket_numeric = bounds_pq.upper / prefactor;
    const double bracket_closed =
        std::pow(q / p, 1.0 / q) *
        std::exp(1.0 / q + 1.0 / (p * beta) - 1.0 / p);
    worst = std::max(worst, std::abs(bracket_numeric / bracket_closed - 1.0));
    ++done;
  }
  if (worst > 1e-6) ok = false;
  h.report(6, "alpha-infimum closed form for p < q", ok, "max rel diff " + fmt(worst));
}

// --- 7 ------------------------------------------------------------------
void criterion_extremal_norms(Harness& h) {
  bool ok = true;
  double worst = 0.0;
  for (auto [a, beta, Q] : kSharpTriples) {
    auto g = make_custom_group(Q, 2.0);
    const double m = beta * Q;
    for (int j = 0; j <= 4; ++j) {
      const double gamma = Q * (a + 1.0) * (1.0 + std::exp2(-j));
      auto f = RadialProfile::cutoff_power_tail(std::exp(1.0 / m), 1.0, gamma);
      auto rep = evaluate_inequality(f, WeightSpec::ball_power(a),
                                     WeightSpec::ball_power(a), sharp_params(beta), g,
                                     kSpec, InequalitySide::forward, EvalPath::generic);
      if (!rep.ratio) {
        ok = false;
        continue;
      }
      const double base =
          std::pow(g.unit_ball_volume(), a + 1.0) * std::exp((a + 1.0) / beta);
      const double gQ = gamma / Q;
      const double rhs_closed =
          base * (1.0 / (a + 1.0) + std::exp(-gamma / (beta * Q)) / (gQ - (a + 1.0)));
      const double lhs_closed = base * (1.0 / (a + 1.0) + 1.0 / (gQ - (a + 1.0)));
      worst = std::max(worst, std::abs(rep.lhs / lhs_closed - 1.0));
      worst = std::max(worst, std::abs(rep.rhs / rhs_closed - 1.0));
    }
  }
  if (worst > 1e-7) ok = false;
  h.report(7, "extremal-family norms on the generic quadrature path", ok,
           "max rel diff " + fmt(worst));
}

// --- 8 ------------------------------------------------------------------
void criterion_equivalences(Harness& h) {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  bool ok = true;
  double worst_dual = 0.0, worst_beta = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto g = make_custom_group(0.8 + 2.2 * dist(rng), 1.0 + 2.0 * dist(rng));
    InequalityParams params;
    params.p = 0.7 + 0.8 * dist(rng);
    params.q = params.p + dist(rng);
    params.beta = 0.6 + 1.8 * dist(rng);
    const double a = -0.5 + 1.5 * dist(rng);
    const double b = -0.5 + 1.5 * dist(rng);
    const double gamma =
        g.Q * std::max((1.0 + a) / params.q, (1.0 + b) / params.p) * (1.3 + dist(rng));
    auto f = RadialProfile::cutoff_power_tail(0.5 + dist(rng), 0.5 + dist(rng), gamma);
    auto u = WeightSpec::ball_power(a);
    auto v = WeightSpec::ball_power(b);

    const double dual_ratio =
        inequality_ratio(f, u, v, params, g, kSpec, InequalitySide::dual);
    auto u_prof = u.to_profile(g, params.beta, kSpec);
    auto v_prof = v.to_profile(g, params.beta, kSpec);
    const double fwd_ratio = inequality_ratio(
        f.inverted(), WeightSpec::custom(dual_weight_transform(u_prof, g)),
        WeightSpec::custom(dual_weight_transform(v_prof, g)), params, g, kSpec);
    worst_dual = std::max(worst_dual, std::abs(dual_ratio / fwd_ratio - 1.0));
  }
  for (int i = 0; i < 50; ++i) {
    auto g = make_custom_group(0.7 + 2.5 * dist(rng), 1.5 + dist(rng));
    InequalityParams params;
    params.p = 0.8 + 0.6 * dist(rng);
    params.q = params.p + 0.8 * dist(rng);
    params.beta = 0.5 + 2.0 * dist(rng);
    const double a = -0.4 + 1.2 * dist(rng);
    const double b = -0.4 + 1.2 * dist(rng);
    const double gamma =
        g.Q * std::max((1.0 + a) / params.q, (1.0 + b) / params.p) * (1.4 + dist(rng));
    auto f = RadialProfile::cutoff_power_tail(0.6 + dist(rng), 1.0, gamma);
    auto chk = check_beta_reduction(WeightSpec::ball_power(a),
                                    WeightSpec::ball_power(b), f, params, g, kSpec);
    worst_beta =
        std::max(worst_beta, std::abs(chk.ratio_direct / chk.ratio_reduced - 1.0));
  }
  if (worst_dual > 1e-7 || worst_beta > 1e-7) ok = false;
  h.report(8, "duality and beta-reduction ratio equivalences (50 + 50 random)", ok,
           "max rel diff dual " + fmt(worst_dual) + ", beta " + fmt(worst_beta));
}

// --- 9 ------------------------------------------------------------------
void criterion_matched_weight(Harness& h) {
  auto g = make_custom_group(2.0, 2.5);
  const double beta = 1.4;
  const double m = beta * g.Q;
  const double eta = -0.4, gamma = 1.2;
  bool ok = true;

  auto matched = matched_weight(WeightSpec::exp_power(eta, gamma), beta, g, kSpec);
  double worst_pointwise = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = std::exp(-3.0 + 6.0 * i / 19.0);
    const double expect = std::exp(eta * std::pow(r, gamma) / (1.0 + gamma / m));
    worst_pointwise =
        std::max(worst_pointwise, std::abs(matched(r) / expect - 1.0));
  }
  if (worst_pointwise > 1e-10) ok = false;

  const double sharp = std::exp(1.0 / beta);
  double last_ratio = 0.0;
  for (int j = 0; j <= 8; ++j) {
    const double gj = g.Q * (1.0 + std::exp2(-j));
    auto fj = RadialProfile::cutoff_power_tail(std::exp(1.0 / m), 1.0, gj) *
              RadialProfile::exp_power(-eta, gamma);
    auto rep = verify_matched(WeightSpec::exp_power(eta, gamma), beta, g, fj, kSpec);
    if (!rep.ratio) {
      ok = false;
      continue;
    }
    if (*rep.ratio > sharp * (1.0 + 1e-6)) ok = false;
    last_ratio = *rep.ratio;
  }
  if (!(last_ratio >= sharp * (1.0 - 5e-3))) ok = false;
  h.report(9, "matched weights: closed form and sharp constant e^{1/beta}", ok,
           "pointwise " + fmt(worst_pointwise) + ", final ratio/sharp = " +
               fmt(last_ratio / sharp));
}

// --- 10 -----------------------------------------------------------------
void criterion_multinomial(Harness& h) {
  auto g = make_euclidean_group(1);
  const std::vector<double> a = {1.0, 2.0};
  const int k = 2;
  const double beta = 1.0;
  const double upper = std::exp(7.0);
  const double lower_target = std::exp(3.0) * (1.0 - 5e-3);
  bool ok = true;
  double best_ratio = 0.0;
  // probe family approaching the heaviest term's threshold gamma/Q = 5
  for (int j = 0; j <= 10; ++j) {
    const double gamma = 5.0 * (1.0 + std::exp2(-j));
    auto f = RadialProfile::cutoff_power_tail(std::exp(1.0 / beta), 1.0, gamma);
    auto rep = verify_multinomial(a, k, beta, g, f, kSpec);
    if (!rep.ratio) {
      ok = false;
      continue;
    }
    if (*rep.ratio > upper * (1.0 + 1e-6)) ok = false;
    best_ratio = std::max(best_ratio, *rep.ratio);
  }
  // one generic configuration away from the singular limit
  auto rep = verify_multinomial(a, k, beta, g,
                                RadialProfile::cutoff_power_tail(1.0, 2.0, 9.0), kSpec);
  if (!rep.ratio || *rep.ratio > upper * (1.0 + 1e-6)) ok = false;
  if (!(best_ratio >= lower_target)) ok = false;
  h.report(10, "multinomial weight bounds e^3 <= C <= e^7", ok,
           "best ratio / e^3 = " + fmt(best_ratio / std::exp(3.0)));
}

// --- 11 -----------------------------------------------------------------
void criterion_property_suite(Harness& h) {
  std::mt19937_64 rng(111111);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  int violations = 0;
  int divergent = 0;
  for (int i = 0; i < 200; ++i) {
    auto g = make_custom_group(0.8 + 2.4 * dist(rng), 1.0 + 2.5 * dist(rng));
    InequalityParams params;
    params.p = 0.7 + 0.9 * dist(rng);
    params.q = params.p + dist(rng);
    params.beta = 0.6 + 1.9 * dist(rng);
    const double a = -0.6 + 2.0 * dist(rng);
    const double b = params.p * (1.0 + a) / params.q - 1.0;  // balanced
    const double gamma =
        g.Q * std::max((1.0 + a) / params.q, (1.0 + b) / params.p) * (1.3 + dist(rng));
    RadialProfile f =
        RadialProfile::cutoff_power_tail(0.4 + 1.2 * dist(rng), 0.5 + dist(rng), gamma);
    if (i % 4 == 0) {
      f = f * RadialProfile::exp_power(-0.3 * dist(rng), 0.7 + dist(rng));
    }
    auto report = evaluate_inequality(f, WeightSpec::ball_power(a),
                                      WeightSpec::ball_power(b), params, g, kSpec);
    if (!report.ratio || !report.holds) {
      ++divergent;
      continue;
    }
    if (*report.ratio > report.bound_upper * (1.0 + 1e-6)) ++violations;
  }
  const bool ok = violations == 0 && divergent == 0;
  h.report(11, "property suite: 200 random admissible configurations", ok,
           std::to_string(violations) + " violations, " + std::to_string(divergent) +
               " unexpected divergences");
}

}  // namespace

int main() {
  Harness h;
  criterion_normalization(h);
  criterion_classical_constant(h);
  criterion_sharp_constant(h);
  criterion_dual_sharp_constant(h);
  criterion_power_weights(h);
  criterion_infimum_identity(h);
  criterion_extremal_norms(h);
  criterion_equivalences(h);
  criterion_matched_weight(h);
  criterion_multinomial(h);
  criterion_property_suite(h);
  if (h.failures > 0) {
    std::printf("%d criterion(s) failed\n", h.failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
