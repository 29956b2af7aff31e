#include "doctest.h"

#include <cmath>
#include <random>

#include "lclab/operators.hpp"
#include "oracle.hpp"

using namespace lclab;

namespace {
const QuadratureSpec kSpec;
}

TEST_CASE("forward mean of a constant is the constant") {
  auto g = make_custom_group(2.0, 3.0);
  auto f = RadialProfile::constant(4.2);
  for (double r : {0.1, 1.0, 25.0}) {
    for (double beta : {0.5, 1.0, 3.0}) {
      CHECK(forward_mean(f, r, beta, g, kSpec).value() ==
            doctest::Approx(4.2).epsilon(1e-12));
    }
  }
}

TEST_CASE("forward mean of a power law has the closed form") {
  // r^c e^{-c/(beta Q)}; at c = 2, beta Q = 1, r = 1 this is e^{-2}
  auto g = make_custom_group(1.0, 2.0);
  auto f = RadialProfile::power_law(2.0);
  CHECK(forward_mean(f, 1.0, 1.0, g, kSpec).value() ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(0.3, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double c = dist(rng) - 1.5, r = dist(rng), beta = dist(rng);
    auto gq = make_custom_group(dist(rng), 1.0);
    const double m = beta * gq.Q;
    const double expect = std::pow(r, c) * std::exp(-c / m);
    CHECK(forward_mean(RadialProfile::power_law(c), r, beta, gq, kSpec).value() ==
          doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("normalization identity exp(alpha/(beta Q)) mean(r^alpha)(1) = 1") {
  for (double beta : {0.5, 1.0, 2.0, 5.0}) {
    for (double Q : {1.0, 2.0, 4.0, 7.3}) {
      auto g = make_custom_group(Q, 1.7);
      for (double alpha : {0.1, 1.0, Q, 10.0}) {
        const double mean =
            forward_mean(RadialProfile::power_law(alpha), 1.0, beta, g, kSpec).value();
        CHECK(std::exp(alpha / (beta * Q)) * mean ==
              doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("mean of a product is the product of means") {
  auto g = make_custom_group(1.5, 2.0);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(0.3, 2.5);
  for (int i = 0; i < 20; ++i) {
    const double r = dist(rng), beta = dist(rng);
    auto f1 = RadialProfile::cutoff_power_tail(dist(rng), 1.2, dist(rng) + 1.0);
    auto f2 = RadialProfile::exp_power(-dist(rng) * 0.3, dist(rng));
    const double lhs = forward_mean(f1 * f2, r, beta, g, kSpec).log();
    const double rhs = forward_mean(f1, r, beta, g, kSpec).log() +
                       forward_mean(f2, r, beta, g, kSpec).log();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(std::abs(rhs) + 1.0));
  }
}

TEST_CASE("Jensen bound: exponential mean below the arithmetic mean") {
  auto g = make_custom_group(2.0, 2.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(0.4, 2.2);
  for (int i = 0; i < 20; ++i) {
    const double r = dist(rng), beta = dist(rng);
    const double m = beta * g.Q;
    auto f = RadialProfile::cutoff_power_tail(dist(rng), dist(rng), dist(rng) + 0.5);
    const double expmean = forward_mean(f, r, beta, g, kSpec).value();
    // m r^{-m} int_0^r s^{m-1} f(s) ds via the oracle
    const double arith =
        m * std::pow(r, -m) *
        oracle::integrate([&](double s) { return std::pow(s, m - 1.0) * f(s); }, 1e-10,
                          r);
    CHECK(expmean <= arith * (1.0 + 1e-8));
  }
}

TEST_CASE("dual mean closed form and inversion identity") {
  auto g = make_custom_group(1.4, 2.0);
  // f = r^{-c}: dual mean is r^{-c} e^{-c/(beta Q)}
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.3, 2.0);
  for (int i = 0; i < 15; ++i) {
    const double c = dist(rng), r = dist(rng), beta = dist(rng);
    const double m = beta * g.Q;
    CHECK(dual_mean(RadialProfile::power_law(-c), r, beta, g, kSpec).value() ==
          doctest::Approx(std::pow(r, -c) * std::exp(-c / m)).epsilon(1e-11));
  }
  // dual_mean(f, r) = forward_mean(f(1/.), 1/r) on nontrivial profiles
  std::vector<RadialProfile> fs = {
      RadialProfile::cutoff_power_tail(1.5, 2.0, 1.1),
      RadialProfile::power_law(-0.7),
      RadialProfile::product({RadialProfile::power_law(-0.4),
                              RadialProfile::exp_power(-0.3, -1.2)}),
  };
  for (const auto& f : fs) {
    for (double r : {0.3, 1.0, 6.0}) {
      const double beta = 0.8;
      CHECK(dual_mean(f, r, beta, g, kSpec).log() ==
            doctest::Approx(forward_mean(f.inverted(), 1.0 / r, beta, g, kSpec).log())
                .epsilon(1e-9)
                .scale(1.0));
    }
  }
  CHECK(dual_mean(RadialProfile::constant(1.0), 2.0, 1.0, g, kSpec).value() ==
        doctest::Approx(1.0));

  // ln f growing too fast at infinity: divergence named at the right endpoint
  try {
    dual_mean(RadialProfile::exp_power(1.0, 2.0), 1.0, 0.5, g, kSpec);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.where() == Endpoint::infinity);
  }
}

TEST_CASE("mean profile: lazy tail model matches direct evaluation") {
  auto g = make_custom_group(2.0, 3.0);
  const double m = 1.3 * g.Q;
  auto f = RadialProfile::cutoff_power_tail(2.0, 1.5, 2.4);
  auto mp = mean_profile(f, m, 1.0, kSpec);
  const LogExpansion tail = mp.tail();
  CHECK(tail.exact);
  for (double r : {5.0, 50.0, 5e3, 5e6}) {
    CHECK(tail.eval_log(r) == doctest::Approx(mp.log_eval(r)).epsilon(1e-11));
  }
}

TEST_CASE("transformed weight: v = 1 gives back u") {
  auto g = make_euclidean_group(1);
  InequalityParams params;
  params.p = 1.0;
  params.q = 2.0;
  params.beta = 0.7;
  auto w = transformed_weight(WeightSpec::ball_power(0.8), WeightSpec::one(), params, g,
                              kSpec);
  auto u = RadialProfile::ball_power(0.8, g);
  for (double r : {0.2, 1.0, 9.0}) {
    CHECK(w.log_eval(r) == doctest::Approx(u.log_eval(r)).epsilon(1e-12));
  }
}

TEST_CASE("transformed weight: power pair closed form") {
  // w = e^{bq/(beta p)} |B|^{a - b q/p}
  auto g = make_custom_group(2.0, 5.0);
  InequalityParams params;
  params.p = 1.2;
  params.q = 2.1;
  params.beta = 0.9;
  const double a = 1.1, b = 0.4;
  auto w = transformed_weight(WeightSpec::ball_power(a), WeightSpec::ball_power(b),
                              params, g, kSpec);
  auto expect =
      RadialProfile::ball_power(a - b * params.q / params.p, g)
          .scaled(std::exp(b * params.q / (params.beta * params.p)));
  for (double r : {0.05, 1.0, 40.0}) {
    CHECK(w.log_eval(r) == doctest::Approx(expect.log_eval(r)).epsilon(1e-11));
  }
  // a = b, p = q = 1: w is the constant e^{a/beta}
  InequalityParams unit;
  unit.beta = 0.9;
  auto w2 = transformed_weight(WeightSpec::ball_power(a), WeightSpec::ball_power(a),
                               unit, g, kSpec);
  for (double r : {0.1, 1.0, 10.0}) {
    CHECK(w2.log_eval(r) == doctest::Approx(a / unit.beta).epsilon(1e-12));
  }
}

TEST_CASE("dual weight transform") {
  auto g = make_custom_group(1.5, 4.0);
  // u = 1 -> r^{-2Q}
  auto w1 = dual_weight_transform(RadialProfile::constant(1.0), g);
  for (double r : {0.3, 2.0, 11.0}) {
    CHECK(w1.log_eval(r) == doctest::Approx(-2.0 * g.Q * std::log(r)).epsilon(1e-12));
  }
  // u = |B|^a -> kappa^a r^{-Q(a+2)}
  const double a = 0.7;
  auto w2 = dual_weight_transform(RadialProfile::ball_power(a, g), g);
  const double kappa = g.unit_ball_volume();
  for (double r : {0.3, 2.0, 11.0}) {
    const double expect = a * std::log(kappa) - g.Q * (a + 2.0) * std::log(r);
    CHECK(w2.log_eval(r) == doctest::Approx(expect).epsilon(1e-12));
  }
  // involution: applying the transform twice restores u
  auto u = RadialProfile::cutoff_power_tail(1.2, 2.0, 0.7);
  auto back = dual_weight_transform(dual_weight_transform(u, g), g);
  for (double r : {0.25, 1.0, 14.0}) {
    CHECK(back.log_eval(r) == doctest::Approx(u.log_eval(r)).epsilon(1e-12));
  }
}

TEST_CASE("matched weight closed forms") {
  auto g = make_custom_group(2.5, 3.0);
  const double beta = 1.3;
  const double m = beta * g.Q;

  auto u1 = matched_weight(WeightSpec::one(), beta, g, kSpec);
  CHECK(u1.log_eval(3.0) == doctest::Approx(0.0));

  // v = exp(eta r^gamma) -> u = exp(eta r^gamma / (1 + gamma/(beta Q)))
  const double eta = -0.6, gamma = 1.7;
  auto u2 = matched_weight(WeightSpec::exp_power(eta, gamma), beta, g, kSpec);
  for (double r : {0.2, 1.0, 4.0, 50.0}) {
    const double expect = eta * std::pow(r, gamma) / (1.0 + gamma / m);
    CHECK(u2.log_eval(r) == doctest::Approx(expect).epsilon(1e-12));
  }

  // v = |B|^b -> u = e^{-b/beta} |B|^b
  const double b = 0.9;
  auto u3 = matched_weight(WeightSpec::ball_power(b), beta, g, kSpec);
  for (double r : {0.2, 1.0, 4.0}) {
    const double expect = -b / beta + b * log_ball_volume(g, r);
    CHECK(u3.log_eval(r) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("beta reduction transforms") {
  auto g1 = make_euclidean_group(1);
  auto u = RadialProfile::ball_power(0.8, g1);
  auto v = RadialProfile::ball_power(0.3, g1);
  auto f = RadialProfile::power_law(1.2);

  // beta = 1 is the identity
  auto id = beta_reduce(u, v, f, 1.0, g1);
  for (double r : {0.4, 2.0}) {
    CHECK(id.u_reduced.log_eval(r) == doctest::Approx(u.log_eval(r)));
    CHECK(id.f_reduced.log_eval(r) == doctest::Approx(f.log_eval(r)));
  }

  // u = |B|^a on Q = 1, beta = 2: u_reduced = 2^{a-1} r^{(a-1)/2}
  const double a = 0.8;
  auto red = beta_reduce(u, v, f, 2.0, g1);
  for (double r : {0.3, 1.0, 5.0}) {
    const double expect = (a - 1.0) * std::log(2.0) + 0.5 * (a - 1.0) * std::log(r) +
                          std::log(2.0) * 0.0;
    // 2^{a-1} r^{(a-1)/2}: log = (a-1) ln 2 + (a-1)/2 ln r
    CHECK(red.u_reduced.log_eval(r) == doctest::Approx(expect).epsilon(1e-12));
  }

  // f = r^c, beta = 3 -> g = r^{c/3}
  auto red3 = beta_reduce(u, v, RadialProfile::power_law(1.5), 3.0, g1);
  for (double r : {0.3, 1.0, 5.0}) {
    CHECK(red3.f_reduced.log_eval(r) ==
          doctest::Approx(0.5 * std::log(r)).epsilon(1e-12));
  }
}

TEST_CASE("inequality params validation") {
  InequalityParams p;
  p.p = 2.0;
  p.q = 1.0;  // p > q
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = InequalityParams{};
  p.beta = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = InequalityParams{};
  p.alpha = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("multinomial weight spec validation") {
  CHECK_THROWS_AS(WeightSpec::multinomial({}, 1), DomainError);
  CHECK_THROWS_AS(WeightSpec::multinomial({1.0, -0.5}, 1), DomainError);
  CHECK_THROWS_AS(WeightSpec::multinomial({1.0}, -1), DomainError);
}
