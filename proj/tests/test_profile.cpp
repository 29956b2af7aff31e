#include "doctest.h"

#include <cmath>
#include <random>

#include "lclab/group.hpp"
#include "lclab/profile.hpp"

using namespace lclab;

namespace {

std::vector<RadialProfile> sample_profiles(const HomogeneousGroup& g) {
  return {
      RadialProfile::constant(2.5),
      RadialProfile::power_law(1.7),
      RadialProfile::power_law(-0.6),
      RadialProfile::ball_power(0.8, g),
      RadialProfile::exp_power(-0.4, 1.3),
      RadialProfile::exp_power(0.2, -0.7),
      RadialProfile::cutoff_power_tail(std::exp(0.5), 1.0, 3.0),
      RadialProfile::sum_power({0.5, 1.25}, g, 2),
      RadialProfile::sampled({0.5, 1.0, 2.0, 8.0}, {3.0, 1.0, 0.5, 0.1}),
      RadialProfile::product({RadialProfile::power_law(0.5),
                              RadialProfile::exp_power(-0.1, 2.0)}),
  };
}

}  // namespace

TEST_CASE("profiles are strictly positive and log_eval is the exact log") {
  auto g = make_euclidean_group(2);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> rdist(-7.0, 7.0);
  for (const auto& f : sample_profiles(g)) {
    for (int i = 0; i < 60; ++i) {
      const double r = std::exp(rdist(rng));
      const double lv = f.log_eval(r);
      // strictly positive: a finite log (the linear value may underflow)
      CHECK(std::isfinite(lv));
      CHECK(f(r) == doctest::Approx(std::exp(lv)).epsilon(1e-14));
    }
  }
}

TEST_CASE("ball power profile equals the ball volume power") {
  auto g = make_custom_group(3.0, 4.0);
  auto f = RadialProfile::ball_power(1.5, g);
  for (double r : {0.1, 1.0, 7.0}) {
    CHECK(f(r) == doctest::Approx(std::pow(ball_volume(g, r), 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("cutoff tail evaluates piecewise") {
  auto f = RadialProfile::cutoff_power_tail(2.0, 3.0, 1.5);
  CHECK(f(1.0) == doctest::Approx(3.0));
  CHECK(f(2.0) == doctest::Approx(3.0));
  CHECK(f(4.0) == doctest::Approx(std::pow(4.0, -1.5)));
  CHECK(f.breakpoints().size() == 1);

  auto chi = RadialProfile::cutoff_power_tail(2.0, 3.0, 1.5, 0.0);
  CHECK(chi(4.0) == 0.0);
  CHECK(chi.log_eval(4.0) == kNegInf);
}

TEST_CASE("inversion identity f_inv(r) = f(1/r)") {
  auto g = make_euclidean_group(1);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> rdist(-4.0, 4.0);
  for (const auto& f : sample_profiles(g)) {
    auto fi = f.inverted();
    for (int i = 0; i < 40; ++i) {
      const double r = std::exp(rdist(rng));
      CHECK(fi.log_eval(r) == doctest::Approx(f.log_eval(1.0 / r)).epsilon(1e-12));
    }
    // involution
    auto fii = fi.inverted();
    for (int i = 0; i < 10; ++i) {
      const double r = std::exp(rdist(rng));
      CHECK(fii.log_eval(r) == doctest::Approx(f.log_eval(r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("substitution identity f_sub(r) = f(r^s)") {
  auto g = make_euclidean_group(2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rdist(-2.0, 2.0);
  for (const auto& f : sample_profiles(g)) {
    for (double s : {0.5, 2.0, 1.0 / 3.0}) {
      auto fs = f.substituted(s);
      for (int i = 0; i < 20; ++i) {
        const double r = std::exp(rdist(rng));
        CHECK(fs.log_eval(r) ==
              doctest::Approx(f.log_eval(std::pow(r, s))).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("powers and products act on the log") {
  auto g = make_euclidean_group(1);
  auto f = RadialProfile::cutoff_power_tail(1.5, 2.0, 1.0);
  auto f2 = f.powered(2.5);
  auto p = f * RadialProfile::power_law(1.0);
  for (double r : {0.3, 1.5, 4.0}) {
    CHECK(f2.log_eval(r) == doctest::Approx(2.5 * f.log_eval(r)));
    CHECK(p.log_eval(r) == doctest::Approx(f.log_eval(r) + std::log(r)));
  }
}

TEST_CASE("products of piecewise powers stay symbolic") {
  auto f = RadialProfile::cutoff_power_tail(1.0, 1.0, 2.0) *
           RadialProfile::cutoff_power_tail(3.0, 2.0, 1.0);
  // still piecewise: closed scaled log-mean exists
  CHECK(f.closed_scaled_ln_mean(5.0, 1.5).has_value());
  CHECK(f(0.5) == doctest::Approx(2.0));
  CHECK(f(2.0) == doctest::Approx(std::pow(2.0, -2.0) * 2.0));
  CHECK(f(4.0) == doctest::Approx(std::pow(4.0, -3.0)));
}

TEST_CASE("sampled profiles interpolate log-log linearly") {
  auto f = RadialProfile::sampled({1.0, 4.0}, {2.0, 8.0});
  // midpoint in log space -> geometric mean of the values
  CHECK(f(2.0) == doctest::Approx(4.0).epsilon(1e-12));
  // extrapolation follows the end slope (here exponent 1)
  CHECK(f(8.0) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(f(0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampled profile validation") {
  CHECK_THROWS_AS(RadialProfile::sampled({1.0, 0.5}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(RadialProfile::sampled({1.0, 2.0}, {1.0, -2.0}), DomainError);
  CHECK_THROWS_AS(RadialProfile::sampled({1.0}, {1.0}), DomainError);
}

TEST_CASE("endpoint models match the profile where exact") {
  auto g = make_euclidean_group(2);
  for (const auto& f : sample_profiles(g)) {
    const LogExpansion head = f.head();
    const LogExpansion tail = f.tail();
    if (head.exact && head.boundary > 0.0) {
      const double r = std::min(head.boundary, 1e-3) * 0.5;
      CHECK(head.eval_log(r) == doctest::Approx(f.log_eval(r)).epsilon(1e-9));
    }
    if (tail.exact && std::isfinite(tail.boundary)) {
      const double r = std::max(tail.boundary, 1e3) * 2.0;
      if (f.log_eval(r) != kNegInf) {
        CHECK(tail.eval_log(r) == doctest::Approx(f.log_eval(r)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("power sum endpoint model approaches the true log") {
  auto g = make_euclidean_group(1);
  auto f = RadialProfile::sum_power({1.0, 2.0}, g, 2);
  const LogExpansion tail = f.tail();
  const double r = std::max(tail.boundary * 4.0, 1e4);
  CHECK(tail.eval_log(r) == doctest::Approx(f.log_eval(r)).epsilon(1e-8));
  const LogExpansion head = f.head();
  const double r0 = std::min(head.boundary / 4.0, 1e-4);
  CHECK(head.eval_log(r0) == doctest::Approx(f.log_eval(r0)).epsilon(1e-8));
}

TEST_CASE("piecewise power validation") {
  CHECK_THROWS_AS(RadialProfile::piecewise_power({2.0, 1.0}, {{0, 0}, {0, 0}, {0, 0}}),
                  DomainError);
  CHECK_THROWS_AS(RadialProfile::piecewise_power({1.0}, {{0, 0}}), DomainError);
  CHECK_THROWS_AS(RadialProfile::constant(0.0), DomainError);
  CHECK_THROWS_AS(RadialProfile::constant(-1.0), DomainError);
}
