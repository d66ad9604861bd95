#pragma once

// Scalar special functions: gamma family, modified Bessel I/K, the tail
// series of I, the scaled normal integral N~ and its once-integrated
// companion phi. Everything here is real-valued, double precision, and
// restricted to positive order nu.

namespace besselcall::specfun {

// Truncation controls for the power-series / asymptotic evaluations.
struct SeriesSpec {
    double term_rel_tol = 1e-16;   // stop once a term falls below this, relative to the sum
    int max_terms = 400;
    double large_arg_switch = 30.0; // effective switch is max(large_arg_switch, 2*nu^2)

    void validate() const;
};

// log Gamma(x), x > 0.
double log_gamma(double x);

// Regularized lower incomplete gamma P(nu, x) = gamma(nu,x)/Gamma(nu).
// Series for x < nu+1, continued fraction otherwise.
double reg_lower_gamma(double nu, double x);

// N~(A) = sqrt(2/pi) * int_0^A exp(-y^2/2) dy, extended to an odd function.
// Evaluated through reg_lower_gamma(1/2, A^2/2); limits are +-1 at +-inf.
double n_tilde(double a);

// phi(A) = sqrt(2/pi) * int_0^A (1 - exp(-y^2/2))/y^2 dy, odd in A.
// Uses the N~ identity away from zero and a Maclaurin series below |A|=1e-4,
// where the identity loses ~8 digits to cancellation.
double phi(double a);

// Modified Bessel I_nu(y), nu > 0, y >= 0. Power series below the switch,
// large-argument asymptotic expansion above. With scaled=true returns
// exp(-y) * I_nu(y); unscaled evaluation refuses y > 600 (overflow).
double bessel_i(double nu, double y, bool scaled = false,
                const SeriesSpec& spec = SeriesSpec{});

// Tail I~_nu(y) = I_nu(y) - (y/2)^nu / Gamma(1+nu), computed without
// subtracting nearly equal quantities: the j>=1 series for small/moderate y,
// asymptotic I minus the (there negligible) power term for large y.
double bessel_i_tail(double nu, double y, bool scaled = false,
                     const SeriesSpec& spec = SeriesSpec{});

// Modified Bessel K_nu(y), nu > 0, y > 0. Half-integer orders use the exact
// closed forms; general orders use Temme's series (y <= 2) or Steed's
// continued fraction (y > 2), then upward recurrence in the order.
double bessel_k(double nu, double y);

} // namespace besselcall::specfun
