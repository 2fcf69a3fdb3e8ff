#include "haptofv/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "haptofv/numerics.hpp"

namespace haptofv {

double alpha_eval(const TransitionFn& fn, double z) {
  if (!(z >= 0.0)) throw std::domain_error("alpha: ECM density must be nonnegative");
  if (fn.form == TransitionFn::Form::constant) return fn.a;
  return fn.a + fn.b * (z / (1.0 + z));
}

double f_eps(double eps, double s) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::domain_error("f_eps: eps must lie in (0,1)");
  }
  if (!(s >= 0.0)) throw std::domain_error("f_eps: argument must be nonnegative");
  return s / (1.0 + eps * s);
}

void ModelParams::validate() const {
  struct Named {
    const char* name;
    double value;
  };
  const Named rates[] = {
      {"a1", a1},       {"a2", a2},     {"b_h", b_h},       {"b_tau", b_tau},
      {"beta", beta},   {"gamma1", gamma1}, {"gamma2", gamma2}, {"delta", delta},
      {"mu", mu},       {"sigma", sigma},
  };
  for (const auto& r : rates) {
    if (!(r.value > 0.0) || !std::isfinite(r.value)) {
      throw std::invalid_argument(std::string("model.") + r.name +
                                  ": rate constants must be strictly positive");
    }
  }
  const TransitionFn* fns[] = {&alpha1, &alpha2};
  const char* names[] = {"alpha1", "alpha2"};
  for (int i = 0; i < 2; ++i) {
    const TransitionFn& fn = *fns[i];
    if (!(fn.a > 0.0) || !std::isfinite(fn.a)) {
      throw std::invalid_argument(std::string("model.") + names[i] +
                                  ": base rate must be strictly positive");
    }
    if (!(fn.b >= 0.0) || !std::isfinite(fn.b)) {
      throw std::invalid_argument(std::string("model.") + names[i] +
                                  ": saturating gain must be nonnegative");
    }
  }
}

void Regularization::validate(int dim) const {
  if (!(eps >= 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("reg.eps: must lie in [0,1) (0 runs the limit system)");
  }
  const int min_theta = dim > 2 ? dim : 2;
  if (theta <= min_theta) {
    throw std::invalid_argument("reg.theta: must be an integer exceeding max(2, dim)");
  }
}

ReactionRates reaction_rhs(const ModelParams& p, const Regularization& reg,
                           double c1, double c2, double h, double tau) {
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !(h >= 0.0) || !(tau >= 0.0)) {
    throw std::domain_error("reaction_rhs: state values must be nonnegative and finite");
  }
  const double al1 = alpha_eval(p.alpha1, tau);
  const double al2 = alpha_eval(p.alpha2, tau);
  const double exchange = al1 * c1 - al2 * (c2 / (1.0 + reg.eps * c2));
  const double logistic = p.beta * c1 * (1.0 - c1 - c2 - tau);
  const double damping = reg.eps * ipow(c1, reg.theta);
  const double sat = c2 / (1.0 + c2);
  ReactionRates r;
  r.c1 = logistic - damping - exchange;
  r.c2 = exchange;
  r.h = -p.gamma1 * h * c1 - p.gamma2 * h * c2 - p.mu * h + sat;
  r.tau = -p.delta * tau * c1 - p.sigma * tau + sat;
  return r;
}

} // namespace haptofv
