#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "haptofv/model.hpp"
#include "haptofv/numerics.hpp"

using namespace haptofv;

TEST_SUITE("model") {

TEST_CASE("f_eps basic values") {
  CHECK(f_eps(0.5, 0.0) == 0.0);
  CHECK(f_eps(0.5, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  // saturation approaches but never reaches 1/eps
  const double big = f_eps(0.1, 1.0e6);
  CHECK(big < 10.0);
  CHECK(big == doctest::Approx(1.0e6 / (1.0 + 1.0e5)).epsilon(1e-15));
  CHECK(std::abs(big - 10.0) < 1e-3);
}

TEST_CASE("f_eps domain") {
  CHECK_THROWS_AS(f_eps(0.5, -1.0), std::domain_error);
  CHECK_THROWS_AS(f_eps(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(f_eps(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(f_eps(-0.2, 1.0), std::domain_error);
  CHECK_THROWS_AS(f_eps(0.5, std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("f_eps laws on random samples") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> ue(1e-6, 1.0 - 1e-6);
  std::exponential_distribution<double> us(0.1);
  for (int i = 0; i < 2000; ++i) {
    const double eps = ue(rng);
    const double s = us(rng);
    const double f = f_eps(eps, s);
    CHECK(f >= 0.0);
    CHECK(f <= s);
    CHECK(f < 1.0 / eps);
    const double s2 = s + us(rng) + 1e-12;
    CHECK(f_eps(eps, s2) >= f); // monotone in s
  }
}

TEST_CASE("alpha_eval forms") {
  CHECK(alpha_eval(TransitionFn::constant(0.3), 7.2) == 0.3);
  CHECK(alpha_eval(TransitionFn::saturating(0.2, 0.4), 0.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(alpha_eval(TransitionFn::saturating(0.2, 0.4), 1.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(TransitionFn::saturating(0.5, 1.0).cap() == doctest::Approx(1.5));
  CHECK(alpha_eval(TransitionFn::saturating(0.5, 1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha_eval(TransitionFn::constant(0.3), -0.1), std::domain_error);
}

TEST_CASE("alpha_eval bounded by cap on dense sample") {
  const auto fn = TransitionFn::saturating(0.35, 0.8);
  for (int i = 0; i <= 1000; ++i) {
    const double z = 0.02 * i;
    const double a = alpha_eval(fn, z);
    CHECK(a > 0.0);
    CHECK(a <= fn.cap());
  }
}

TEST_CASE("reaction_rhs at the origin") {
  ModelParams p;
  Regularization reg{0.5, 4};
  const auto r = reaction_rhs(p, reg, 0.0, 0.0, 0.0, 0.0);
  CHECK(r.c1 == 0.0);
  CHECK(r.c2 == 0.0);
  CHECK(r.h == 0.0);
  CHECK(r.tau == 0.0);
}

TEST_CASE("reaction_rhs hand-evaluated point") {
  // c1=0, c2=1, h=0, tau=0, constant alpha2=M, eps=1/2:
  // F_eps(1) = 1/(1+1/2) = 2/3, saturated source 1/(1+1) = 1/2.
  const double M = 0.7;
  ModelParams p;
  p.alpha2 = TransitionFn::constant(M);
  Regularization reg{0.5, 4};
  const auto r = reaction_rhs(p, reg, 0.0, 1.0, 0.0, 0.0);
  CHECK(r.c1 == doctest::Approx(M * (2.0 / 3.0)).epsilon(1e-15));
  CHECK(r.c2 == doctest::Approx(-M * (2.0 / 3.0)).epsilon(1e-15));
  CHECK(r.h == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.tau == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("exchange terms cancel in the mass ledger") {
  ModelParams p;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_real_distribution<double> ue(1e-3, 0.999);
  for (int i = 0; i < 500; ++i) {
    Regularization reg{ue(rng), 4};
    const double c1 = u(rng), c2 = u(rng), h = u(rng), tau = u(rng);
    const auto r = reaction_rhs(p, reg, c1, c2, h, tau);
    const double logistic = p.beta * c1 * (1.0 - c1 - c2 - tau);
    const double damping = reg.eps * ipow(c1, reg.theta);
    const double expect = logistic - damping;
    const double scale = std::abs(logistic) + damping + p.alpha1.cap() * c1 +
                         p.alpha2.cap() * c2 + 1.0;
    CHECK(std::abs(r.c1 + r.c2 - expect) <= 8.0 * std::numeric_limits<double>::epsilon() * scale);
  }
}

TEST_CASE("reaction_rhs rejects invalid input") {
  ModelParams p;
  Regularization reg{0.1, 4};
  CHECK_THROWS_AS(reaction_rhs(p, reg, -0.1, 0, 0, 0), std::domain_error);
  CHECK_THROWS_AS(reaction_rhs(p, reg, 0, 0, std::numeric_limits<double>::quiet_NaN(), 0),
                  std::domain_error);
}

TEST_CASE("ipow matches std::pow on integer exponents") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int k = 0; k <= 12; ++k) {
    for (int i = 0; i < 50; ++i) {
      const double s = u(rng);
      CHECK(ipow(s, k) == doctest::Approx(std::pow(s, k)).epsilon(1e-13));
    }
  }
}

TEST_CASE("validate rejects nonpositive rates") {
  ModelParams p;
  p.mu = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.alpha1 = TransitionFn::constant(0.0);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("regularization bounds") {
  CHECK_NOTHROW((Regularization{0.0, 4}).validate(1)); // limit system allowed
  CHECK_NOTHROW((Regularization{0.5, 3}).validate(1));
  CHECK_NOTHROW((Regularization{0.5, 3}).validate(2)); // theta > max(2,dim) holds
  CHECK_THROWS_AS((Regularization{1.0, 4}).validate(1), std::invalid_argument);
  CHECK_THROWS_AS((Regularization{-0.1, 4}).validate(1), std::invalid_argument);
  CHECK_THROWS_AS((Regularization{0.1, 2}).validate(1), std::invalid_argument);
  CHECK_THROWS_AS((Regularization{0.1, 2}).validate(2), std::invalid_argument);
}

} // TEST_SUITE
