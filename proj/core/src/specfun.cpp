#include "besselcall/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace besselcall::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() * 1e3;
constexpr double kSqrt2OverPi = 0.7978845608028654;

} // namespace

void SeriesSpec::validate() const {
    if (!(term_rel_tol > 0.0 && term_rel_tol < 1e-6))
        throw std::domain_error("SeriesSpec: term_rel_tol must lie in (0, 1e-6)");
    if (max_terms < 50)
        throw std::domain_error("SeriesSpec: max_terms must be >= 50");
    if (!(large_arg_switch > 0.0))
        throw std::domain_error("SeriesSpec: large_arg_switch must be positive");
}

double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_gamma: argument must be positive");
    return std::lgamma(x);
}

namespace {

// Lower series, x < nu+1.
double gamma_p_series(double nu, double x) {
    double ap = nu;
    double sum = 1.0 / nu;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + nu * std::log(x) - std::lgamma(nu));
}

// Continued fraction for Q(nu,x), x >= nu+1 (modified Lentz).
double gamma_q_cf(double nu, double x) {
    double b = x + 1.0 - nu;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - nu);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + nu * std::log(x) - std::lgamma(nu)) * h;
}

} // namespace

double reg_lower_gamma(double nu, double x) {
    if (!(nu > 0.0))
        throw std::domain_error("reg_lower_gamma: nu must be positive");
    if (x < 0.0)
        throw std::domain_error("reg_lower_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < nu + 1.0) return gamma_p_series(nu, x);
    return 1.0 - gamma_q_cf(nu, x);
}

double n_tilde(double a) {
    if (a == 0.0) return 0.0;
    const double p = reg_lower_gamma(0.5, 0.5 * a * a);
    return a > 0.0 ? p : -p;
}

double phi(double a) {
    const double mag = std::fabs(a);
    if (mag == 0.0) return 0.0;
    double v;
    if (mag < 1e-4) {
        const double a2 = mag * mag;
        // sqrt(2/pi) * (A/2 - A^3/24 + A^5/240 - A^7/2688)
        v = kSqrt2OverPi * mag * (0.5 + a2 * (-1.0 / 24.0 + a2 * (1.0 / 240.0 - a2 / 2688.0)));
    } else if (std::isinf(mag)) {
        v = 1.0;
    } else {
        v = n_tilde(mag) + kSqrt2OverPi * std::expm1(-0.5 * mag * mag) / mag;
    }
    return a > 0.0 ? v : -v;
}

namespace {

// Large-argument asymptotic expansion of exp(-y) I_nu(y). Terms are summed
// until they fall below tol or start growing (truncation at smallest term).
double bessel_i_asym_scaled(double nu, double y, const SeriesSpec& spec) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int m = 1; m <= 60; ++m) {
        const double num = mu - (2.0 * m - 1.0) * (2.0 * m - 1.0);
        term *= -num / (8.0 * m * y);
        if (std::fabs(term) >= prev) break;
        sum += term;
        prev = std::fabs(term);
        if (std::fabs(term) < spec.term_rel_tol * std::fabs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * y);
}

// Power series for I_nu with the (y/2)^nu / Gamma(1+nu) prefactor pulled
// into log space. first_term = 0 gives I, first_term = 1 gives the tail I~.
double bessel_i_series(double nu, double y, bool scaled, int first_term,
                       const SeriesSpec& spec) {
    const double q = 0.25 * y * y;
    double lp = nu * std::log(0.5 * y) - std::lgamma(nu + 1.0);
    if (scaled) lp -= y;
    double term = 1.0;
    double sum = 0.0;
    if (first_term == 0) sum = 1.0;
    for (int j = 1; j <= spec.max_terms; ++j) {
        term *= q / (j * (nu + j));
        if (j >= first_term) {
            sum += term;
            if (term < spec.term_rel_tol * sum && j > first_term) break;
        }
        if (sum > 1e250) { // renormalize to avoid overflow before exp()
            sum *= 0x1p-512;
            term *= 0x1p-512;
            lp += 512.0 * M_LN2;
        }
    }
    return sum * std::exp(lp);
}

bool arg_below_switch(double nu, double y, const SeriesSpec& spec) {
    return y < std::max(spec.large_arg_switch, 2.0 * nu * nu);
}

} // namespace

double bessel_i(double nu, double y, bool scaled, const SeriesSpec& spec) {
    spec.validate();
    if (!(nu > 0.0))
        throw std::domain_error("bessel_i: nu must be positive");
    if (y < 0.0)
        throw std::domain_error("bessel_i: y must be nonnegative");
    if (!scaled && y > 600.0)
        throw std::overflow_error("bessel_i: unscaled evaluation overflows for y > 600; request scaled");
    if (y == 0.0) return 0.0;
    if (arg_below_switch(nu, y, spec))
        return bessel_i_series(nu, y, scaled, 0, spec);
    const double v = bessel_i_asym_scaled(nu, y, spec);
    return scaled ? v : v * std::exp(y);
}

double bessel_i_tail(double nu, double y, bool scaled, const SeriesSpec& spec) {
    spec.validate();
    if (!(nu > 0.0))
        throw std::domain_error("bessel_i_tail: nu must be positive");
    if (y < 0.0)
        throw std::domain_error("bessel_i_tail: y must be nonnegative");
    if (!scaled && y > 600.0)
        throw std::overflow_error("bessel_i_tail: unscaled evaluation overflows for y > 600; request scaled");
    if (y == 0.0) return 0.0;
    if (arg_below_switch(nu, y, spec))
        return bessel_i_series(nu, y, scaled, 1, spec);
    // Past the switch the power term is exponentially small next to I_nu, so
    // the subtraction costs no digits.
    const double i_scaled = bessel_i_asym_scaled(nu, y, spec);
    const double power_scaled = std::exp(nu * std::log(0.5 * y) - std::lgamma(nu + 1.0) - y);
    const double v = i_scaled - power_scaled;
    return scaled ? v : v * std::exp(y);
}

namespace {

// Odd/even Taylor data for 1/Gamma(1+mu) = 1 + g1 mu + g2 mu^2 + ...
// used only to stabilize (1/Gamma(1-mu) - 1/Gamma(1+mu))/(2 mu) as mu -> 0.
double gamma_one_diff(double mu) { // (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
    if (std::fabs(mu) > 1e-3) {
        return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
    }
    const double mu2 = mu * mu;
    // -(c1 + c3 mu^2 + c5 mu^4), odd coefficients of 1/Gamma(1+x)
    return -(0.5772156649015329 + mu2 * (-0.0420026350340952 + mu2 * 0.0421977345555443));
}

// Temme's series for K_mu, K_{mu+1}, |mu| <= 1/2, x <= 2.
void bessel_k_temme(double mu, double x, double* kmu, double* kmu1) {
    const double x1 = 0.5 * x;
    const double pimu = M_PI * mu;
    const double fact = (std::fabs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x1);
    double e = mu * d;
    const double fact2 = (std::fabs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    const double gam1 = gamma_one_diff(mu);
    const double gampl = 1.0 / std::tgamma(1.0 + mu);
    const double gammi = 1.0 / std::tgamma(1.0 - mu);
    const double gam2 = 0.5 * (gammi + gampl);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x1 * x1;
    double sum1 = p;
    for (int i = 1; i <= 300; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    *kmu = sum;
    *kmu1 = sum1 * (2.0 / x);
}

// Steed's continued fraction CF2 for K_mu, K_{mu+1}, x > 2.
void bessel_k_cf2(double mu, double x, double* kmu, double* kmu1) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 600; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kEps) break;
    }
    h = a1 * h;
    *kmu = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    *kmu1 = *kmu * (mu + x + 0.5 - h) / x;
}

bool is_half_integer(double nu) {
    const double two_nu = 2.0 * nu;
    const double r = std::round(two_nu);
    return std::fabs(two_nu - r) < 1e-13 && (static_cast<long long>(r) % 2 != 0);
}

double bessel_k_half_integer(double nu, double y) {
    // K_{1/2+m} by exact upward recurrence from the elementary forms.
    const double k_half = std::sqrt(M_PI / (2.0 * y)) * std::exp(-y);
    int m = static_cast<int>(std::round(nu - 0.5));
    if (m == 0) return k_half;
    double k0 = k_half;
    double k1 = k_half * (1.0 + 1.0 / y);
    for (int j = 1; j < m; ++j) {
        const double knew = k0 + (2.0 * (j + 0.5) / y) * k1;
        k0 = k1;
        k1 = knew;
    }
    return k1;
}

} // namespace

double bessel_k(double nu, double y) {
    if (!(nu > 0.0))
        throw std::domain_error("bessel_k: nu must be positive");
    if (!(y > 0.0))
        throw std::domain_error("bessel_k: y must be positive");
    if (is_half_integer(nu)) return bessel_k_half_integer(nu, y);

    const int n = static_cast<int>(std::floor(nu + 0.5));
    const double mu = nu - n; // |mu| <= 1/2
    double kmu, kmu1;
    if (y <= 2.0)
        bessel_k_temme(mu, y, &kmu, &kmu1);
    else
        bessel_k_cf2(mu, y, &kmu, &kmu1);
    if (n == 0) return kmu;
    double k0 = kmu, k1 = kmu1;
    for (int j = 1; j < n; ++j) {
        const double knew = k0 + (2.0 * (mu + j) / y) * k1;
        k0 = k1;
        k1 = knew;
    }
    return k1;
}

} // namespace besselcall::specfun
