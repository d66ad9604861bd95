#pragma once

#include "besselcall/model.hpp"
#include "besselcall/quadrature.hpp"

// Deterministic pricing of r_K(t) = E[(R_t^-(delta-2) - K)^+] for the Bessel
// strict local martingale started at 1: the delta=3 closed form, the
// general-delta integral representation, the last-passage route, the K=0
// identity, asymptotic constants, Laplace transforms, and the explicit
// majorant. All routes agree; the cross checks live in verify/ and tests/.

namespace besselcall::pricing {

// delta=3, K>0 closed form built from N~ and phi with their odd extensions:
//   r(t) = N~(1/sqrt t) + (1-k)/(2k) phi((1-k)/sqrt t) - (1+k)/(2k) phi((1+k)/sqrt t).
// Every call also evaluates the split form (see below) and requires the two
// to agree to 1e-10; the direct value is returned.
double price_bes3_closed(const ModelParams& p, double t);

// The same delta=3 price split into an N~ part and an exponential part.
// Selects which exponential part goes into the sum; `cosh_print` reproduces
// a defective variant kept for regression tests (it fails the cross-method
// checks), `sinh` is the corrected one.
enum class Bes3ExpForm { sinh, cosh_print };
double price_bes3_split(const ModelParams& p, double t,
                        Bes3ExpForm form = Bes3ExpForm::sinh);

// Raw pieces of the split, in the normalization where their sum must be
// scaled by k to give the price.
double bes3_ntilde_part(double k, double t);
double bes3_exp_part(double k, double t, Bes3ExpForm form = Bes3ExpForm::sinh);

// General delta > 2, K > 0: r = r1 - r2 on [0, k/t], with r1 the elementary
// integrand and r2 the I~ piece; integrands assembled in log space with
// scaled Bessel values. Throws ToleranceError if quadrature fails.
double price_general_integral(const ModelParams& p, double t,
                              const quad::QuadratureSpec& q = {});

// BES(delta) transition density w.r.t. Lebesgue dy; x=0 uses the power-law
// branch, x>0 the I_nu branch with scaled Bessel for large xy/t.
double transition_density(double delta, double t, double x, double y);

// P_x(g_1 > t), the survival of the last passage time at level 1.
// x=0 reduces to reg_lower_gamma(nu, 1/(2t)); x>0 integrates the
// last-passage density nu * p_s(x,1) over (t, inf).
double last_passage_survival(double delta, double x, double t,
                             const quad::QuadratureSpec& q = {});

// r(t) = P_0(g_1 > t) - P_k(g_1 > t).
double price_via_last_passage(const ModelParams& p, double t,
                              const quad::QuadratureSpec& q = {});

// K = 0: r_0(t) = E[R_t^-2nu] = reg_lower_gamma(nu, 1/(2t)); strictly
// decreasing, < 1 for t > 0 (the strict-local-martingale gap).
double price_k0(double delta, double t);

// C_K with r(t) ~ C_K / t^(nu+1) as t -> inf.
double tail_constant(const ModelParams& p);

// K = 1 small-t slope: r(t) ~ slope * sqrt(t), slope = 2 nu / sqrt(2 pi).
double small_t_slope(const ModelParams& p);

// delta * K^(2/(delta-2)) = delta / k^2. For K >= 1 this normalizes the
// price curve to a probability density; for K < 1 the normalized mass is
// subunit (see lambda_mass).
double normalization_constant(const ModelParams& p);

// Total mass of normalization_constant * r(t) dt: exactly 1 for K >= 1,
// and the closed subunit value for K < 1.
double lambda_mass(const ModelParams& p);

// E_0[exp(-lam T_k)] for the first hitting of k from 0.
double laplace_hitting(const ModelParams& p, double lam);

// E_0[exp(-lam g_1)] for the last passage at 1 from 0.
double laplace_last_passage(double delta, double lam);

// Laplace transform of normalization_constant * r(t): the Bessel-bracket
// closed form for k <= 1, and its continuation with swapped I/K arguments
// plus the never-returning atom for k > 1.
double laplace_lambda_closed(const ModelParams& p, double lam);

// The two printed closed forms (general Bessel bracket, and the elementary
// delta=3 expression). Both are exact transforms for k <= 1 only; they are
// kept separately so their algebraic agreement can be tested on its own.
double laplace_lambda_bessel_form(const ModelParams& p, double lam);
double laplace_lambda_bes3_form(const ModelParams& p, double lam);

// Explicit majorant c_delta * t^-nu * (1 - exp(-k^2/(2t))) dominating every
// pricing route; c_delta = 1/(2^nu Gamma(nu+1)).
double upper_bound(const ModelParams& p, double t);

} // namespace besselcall::pricing
