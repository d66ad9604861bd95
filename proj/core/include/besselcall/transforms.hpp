#pragma once

#include "besselcall/model.hpp"
#include "besselcall/quadrature.hpp"

// Integral functionals of the price curve: total mass of the normalized
// curve and its numerical Laplace transform (the oracle the closed forms
// are checked against). Finite part on [0, T*] plus an analytic power tail
// whose second-order coefficient is fitted at the truncation point; the
// tail is never sampled.

namespace besselcall::quad {

// normalization_constant * int_0^inf r(t) dt. Equals 1 for K >= 1 and the
// subunit closed mass for K < 1, both to ~1e-7.
double density_normalization(const ModelParams& p, const QuadratureSpec& q = {});

// normalization_constant * int_0^inf exp(-lam t) r(t) dt.
double laplace_numeric(const ModelParams& p, double lam, const QuadratureSpec& q = {});

} // namespace besselcall::quad
