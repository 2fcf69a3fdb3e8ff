#pragma once

namespace haptofv {

// Differentiation/dedifferentiation rate as a function of the ECM density:
// either a positive constant a, or the saturating form a + b*z/(1+z).
// Bounded above by cap() for all z >= 0.
struct TransitionFn {
  enum class Form { constant, saturating };
  Form form = Form::constant;
  double a = 1.0;
  double b = 0.0;

  static TransitionFn constant(double a) { return {Form::constant, a, 0.0}; }
  static TransitionFn saturating(double a, double b) { return {Form::saturating, a, b}; }

  double cap() const { return form == Form::constant ? a : a + b; }
};

double alpha_eval(const TransitionFn& fn, double z);

// Rate constants of the four-species system: stem cells c1 (diffusivity a1,
// haptotactic sensitivities b_h, b_tau, logistic rate beta), chondrocytes c2
// (diffusivity a2), hyaluron h (uptake gamma1/gamma2, decay mu) and ECM tau
// (degradation delta, decay sigma). alpha1/alpha2 exchange c1 <-> c2.
struct ModelParams {
  double a1 = 0.02;
  double a2 = 0.02;
  double b_h = 0.25;
  double b_tau = 0.2;
  double beta = 0.5;
  double gamma1 = 0.3;
  double gamma2 = 0.3;
  double delta = 0.25;
  double mu = 0.6;
  double sigma = 0.5;
  TransitionFn alpha1 = TransitionFn::saturating(0.2, 0.3);
  TransitionFn alpha2 = TransitionFn::saturating(0.15, 0.25);

  // Strict positivity of every rate constant; throws std::invalid_argument.
  // Gates the config path. Verification harnesses that zero selected
  // couplings construct their parameter sets directly.
  void validate() const;
};

// Saturation F_eps(s) = s/(1+eps*s) with 0 <= F_eps(s) <= s and F_eps < 1/eps,
// plus the damping exponent theta (integer > max(2, dim)).
struct Regularization {
  double eps = 0.05;
  int theta = 4;

  void validate(int dim) const;
};

double f_eps(double eps, double s);

struct ReactionRates {
  double c1 = 0.0;
  double c2 = 0.0;
  double h = 0.0;
  double tau = 0.0;
};

// Pointwise reaction right-hand sides:
//   r_c1 = -alpha1(tau) c1 + alpha2(tau) F_eps(c2) + beta c1 (1-c1-c2-tau) - eps c1^theta
//   r_c2 =  alpha1(tau) c1 - alpha2(tau) F_eps(c2)
//   r_h  = -gamma1 h c1 - gamma2 h c2 - mu h + c2/(1+c2)
//   r_tau= -delta tau c1 - sigma tau + c2/(1+c2)
// The alpha terms cancel in r_c1 + r_c2 (mass ledger identity).
ReactionRates reaction_rhs(const ModelParams& p, const Regularization& reg,
                           double c1, double c2, double h, double tau);

} // namespace haptofv
