#include "besselcall/pricing.hpp"
#include "besselcall/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace besselcall {

ModelParams make_params(double delta, double strike) {
    if (!(delta > 2.0))
        throw std::domain_error("delta must exceed 2");
    if (!(strike >= 0.0))
        throw std::domain_error("strike must be nonnegative");
    ModelParams p;
    p.delta = delta;
    p.nu = 0.5 * delta - 1.0;
    p.strike = strike;
    p.dual_level = strike == 0.0 ? std::numeric_limits<double>::infinity()
                                 : std::pow(strike, -1.0 / (delta - 2.0));
    return p;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::closed3: return "closed3";
        case Method::integral: return "integral";
        case Method::last_passage: return "last_passage";
        case Method::k0: return "k0";
        case Method::mc: return "mc";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "closed3") return Method::closed3;
    if (name == "integral") return Method::integral;
    if (name == "last_passage") return Method::last_passage;
    if (name == "k0") return Method::k0;
    if (name == "mc") return Method::mc;
    throw std::domain_error("unknown method: " + name);
}

} // namespace besselcall

namespace besselcall::pricing {

using specfun::bessel_i;
using specfun::bessel_i_tail;
using specfun::bessel_k;
using specfun::n_tilde;
using specfun::phi;
using specfun::reg_lower_gamma;

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

void require_positive_time(double t) {
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
}

void require_strike(const ModelParams& p) {
    if (!(p.strike > 0.0)) throw std::domain_error("operation requires K > 0");
}

} // namespace

double bes3_ntilde_part(double k, double t) {
    const double x = 1.0 / std::sqrt(t);
    return (1.0 / k) * (n_tilde(x) -
                        0.5 * (n_tilde((1.0 - k) * x) + n_tilde((1.0 + k) * x))) +
           (0.5 / (k * k)) * (n_tilde((1.0 - k) * x) - n_tilde((1.0 + k) * x));
}

double bes3_exp_part(double k, double t, Bes3ExpForm form) {
    // Difference/sum of the two Gaussians; the sinh/cosh displays are
    // algebraically these but overflow at small t.
    const double em = std::exp(-(1.0 - k) * (1.0 - k) / (2.0 * t));
    const double ep = std::exp(-(1.0 + k) * (1.0 + k) / (2.0 * t));
    if (form == Bes3ExpForm::sinh)
        return std::sqrt(t / (2.0 * M_PI)) * (em - ep) / (k * k); // sqrt(2t/pi) sinh(k/t) e^-(1+k^2)/2t / k^2
    return std::sqrt(t / (2.0 * M_PI)) * (em + ep) / k;           // cosh variant with 1/k prefactor
}

double price_bes3_split(const ModelParams& p, double t, Bes3ExpForm form) {
    if (p.delta != 3.0) throw std::domain_error("price_bes3_split: requires delta = 3");
    require_strike(p);
    require_positive_time(t);
    const double k = p.dual_level;
    return k * (bes3_ntilde_part(k, t) + bes3_exp_part(k, t, form));
}

double price_bes3_closed(const ModelParams& p, double t) {
    if (p.delta != 3.0) throw std::domain_error("price_bes3_closed: requires delta = 3");
    require_strike(p);
    require_positive_time(t);
    const double k = p.dual_level;
    const double x = 1.0 / std::sqrt(t);
    const double direct = n_tilde(x) + (1.0 - k) / (2.0 * k) * phi((1.0 - k) * x) -
                          (1.0 + k) / (2.0 * k) * phi((1.0 + k) * x);
    const double split = price_bes3_split(p, t);
    if (std::fabs(direct - split) > 1e-10 * std::max(1.0, std::fabs(direct)))
        throw std::runtime_error("price_bes3_closed: erf-form and split evaluation disagree");
    return direct;
}

namespace {

// One adaptive pass over [lo, hi] split into decade segments, so the heap
// never has to discover the integrand's scale by itself.
double integrate_segmented(const std::function<double(double)>& f, double lo,
                           double hi, const quad::QuadratureSpec& q,
                           double* err_acc) {
    std::vector<double> cuts;
    cuts.push_back(lo);
    double c = std::max(lo, 1e-6);
    while (c < hi) {
        if (c > lo) cuts.push_back(c);
        c *= 10.0;
    }
    cuts.push_back(hi);
    double total = 0.0;
    quad::QuadratureSpec qs = q;
    qs.abs_tol = q.abs_tol / cuts.size();
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto res = quad::integrate_adaptive(f, cuts[i], cuts[i + 1], qs);
        if (!res.converged)
            throw quad::ToleranceError("price integral: tolerance not met",
                                       res.value, res.err_est);
        total += res.value;
        *err_acc += res.err_est;
    }
    return total;
}

} // namespace

double price_general_integral(const ModelParams& p, double t,
                              const quad::QuadratureSpec& q) {
    require_strike(p);
    require_positive_time(t);
    q.validate();
    const double nu = p.nu;
    const double k = p.dual_level;
    const double lg_nu1 = std::lgamma(nu + 1.0);
    const double upper = k / t;

    // r1: elementary piece, decay rate 1/(2k); truncation 45+ nats below peak.
    const double u1 = std::min(upper, 2.0 * k * (4.0 * nu + 60.0));
    auto f1 = [nu, k, lg_nu1](double y) {
        if (y <= 0.0) return 0.0;
        const double z = y / (2.0 * k);
        return nu / y * std::exp(nu * std::log(z) - lg_nu1 - z) *
               (-std::expm1(-k * y / 2.0));
    };

    // r2: I~ piece, decay rate rho = (sqrt k - 1/sqrt k)^2 / 2; for k = 1 the
    // decay is only algebraic (~y^-3/2) and the k/t endpoint is kept exactly.
    const double rho = 0.5 * (k + 1.0 / k) - 1.0;
    double u2 = upper;
    if (rho > 1e-8) u2 = std::min(upper, std::max((50.0 + 2.0 * nu) / rho, 4.0 * nu * nu + 50.0));
    const double lnk = std::log(k);
    auto f2 = [nu, lnk, rho](double y) {
        if (y <= 0.0) return 0.0;
        const double it = bessel_i_tail(nu, y, /*scaled=*/true);
        if (it == 0.0) return 0.0;
        return nu / y * std::exp(-nu * lnk - rho * y) * it;
    };

    double err = 0.0;
    const double r1 = integrate_segmented(f1, 0.0, u1, q, &err);
    const double r2 = integrate_segmented(f2, 0.0, u2, q, &err);
    double tail_err = 0.0;
    if (u2 < upper && rho > 1e-8) tail_err = f2(u2) / rho;
    if (err + tail_err > 10.0 * std::max(q.abs_tol, q.rel_tol))
        throw quad::ToleranceError("price_general_integral: tolerance not met",
                                   r1 - r2, err + tail_err);
    return r1 - r2;
}

double transition_density(double delta, double t, double x, double y) {
    if (!(delta > 2.0)) throw std::domain_error("delta must exceed 2");
    require_positive_time(t);
    if (!(y > 0.0)) throw std::domain_error("transition_density: y must be positive");
    if (x < 0.0) throw std::domain_error("transition_density: x must be nonnegative");
    const double nu = 0.5 * delta - 1.0;
    if (x == 0.0) {
        return std::exp((2.0 * nu + 1.0) * std::log(y) - y * y / (2.0 * t) -
                        nu * M_LN2 - (nu + 1.0) * std::log(t) - std::lgamma(nu + 1.0));
    }
    const double arg = x * y / t;
    const double iscaled = bessel_i(nu, arg, /*scaled=*/true);
    if (iscaled == 0.0) return 0.0;
    return std::exp(std::log(y / t) + nu * std::log(y / x) -
                    (x - y) * (x - y) / (2.0 * t) + std::log(iscaled));
}

double last_passage_survival(double delta, double x, double t,
                             const quad::QuadratureSpec& q) {
    if (!(delta > 2.0)) throw std::domain_error("delta must exceed 2");
    require_positive_time(t);
    if (x < 0.0) throw std::domain_error("x must be nonnegative");
    const double nu = 0.5 * delta - 1.0;
    if (x == 0.0) return reg_lower_gamma(nu, 1.0 / (2.0 * t));
    auto dens = [delta, x](double s) { return transition_density(delta, s, x, 1.0); };
    // The density lives on s ≳ (x-1)^2; a bare tail map from a much smaller t
    // would put its nodes entirely left of the mass. Cover [t, T_split] in
    // decade segments first, then map the genuine algebraic tail.
    const double t_split = std::max({100.0, 20.0 * (x * x + 1.0), 10.0 * t});
    double value = 0.0;
    double err = 0.0;
    if (t < t_split) {
        double lo = t;
        quad::QuadratureSpec qs = q;
        qs.abs_tol = q.abs_tol * 0.1;
        while (lo < t_split) {
            const double hi = std::min(lo * 10.0, t_split);
            auto res = quad::integrate_adaptive(dens, lo, hi, qs);
            if (!res.converged)
                throw quad::ToleranceError("last_passage_survival: tolerance not met",
                                           res.value, res.err_est);
            value += res.value;
            err += res.err_est;
            lo = hi;
        }
    }
    quad::QuadratureSpec qt = q;
    qt.tail_policy = quad::TailPolicy::algebraic(nu + 1.0);
    auto res = quad::integrate_tail(dens, std::max(t, t_split), qt);
    if (!res.converged)
        throw quad::ToleranceError("last_passage_survival: tolerance not met",
                                   res.value, res.err_est);
    value += res.value;
    return std::clamp(nu * value, 0.0, 1.0);
}

double price_via_last_passage(const ModelParams& p, double t,
                              const quad::QuadratureSpec& q) {
    require_strike(p);
    require_positive_time(t);
    return last_passage_survival(p.delta, 0.0, t, q) -
           last_passage_survival(p.delta, p.dual_level, t, q);
}

double price_k0(double delta, double t) {
    if (!(delta > 2.0)) throw std::domain_error("delta must exceed 2");
    require_positive_time(t);
    return reg_lower_gamma(0.5 * delta - 1.0, 1.0 / (2.0 * t));
}

double tail_constant(const ModelParams& p) {
    require_strike(p);
    const double nu = p.nu;
    // k^2 / (2^(nu+1) (nu+1) Gamma(nu)); k^2 = K^(-1/nu)
    return std::exp(2.0 * std::log(p.dual_level) - (nu + 1.0) * M_LN2 -
                    std::log(nu + 1.0) - std::lgamma(nu));
}

double small_t_slope(const ModelParams& p) {
    if (p.strike != 1.0) throw std::domain_error("small_t_slope: requires K = 1");
    return 2.0 * p.nu / kSqrt2Pi;
}

double normalization_constant(const ModelParams& p) {
    require_strike(p);
    return p.delta / (p.dual_level * p.dual_level);
}

double lambda_mass(const ModelParams& p) {
    require_strike(p);
    const double k = p.dual_level;
    if (k <= 1.0) return 1.0;
    const double nu = p.nu;
    // (delta/k^2) E[T_k ^ g_1], the small-lam limit of the k > 1 transform.
    if (p.delta == 3.0)
        return 3.0 * (k - 1.0) / (k * k) + 1.0 / (k * k * k);
    if (nu > 1.0) {
        const double bracket = 0.5 / (nu - 1.0) -
                               0.5 * (std::pow(k, 2.0 - 2.0 * nu) / (nu - 1.0) -
                                      std::pow(k, -2.0 * nu) / (nu + 1.0));
        return p.delta / (k * k) * bracket;
    }
    // nu <= 1: no elementary closed form; Richardson-extrapolate the
    // transform in lam^nu (the leading heavy-tail correction order).
    const double l1 = 1e-6, l2 = 4e-6;
    const double m1 = laplace_lambda_closed(p, l1);
    const double m2 = laplace_lambda_closed(p, l2);
    const double w1 = std::pow(l1, nu), w2 = std::pow(l2, nu);
    return (m1 * w2 - m2 * w1) / (w2 - w1);
}

double laplace_hitting(const ModelParams& p, double lam) {
    require_strike(p);
    if (!(lam > 0.0)) throw std::domain_error("lam must be positive");
    const double nu = p.nu;
    const double arg = p.dual_level * std::sqrt(2.0 * lam);
    const double iscaled = bessel_i(nu, arg, /*scaled=*/true);
    return std::exp(nu * std::log(0.5 * arg) - std::lgamma(nu + 1.0) - arg -
                    std::log(iscaled));
}

double laplace_last_passage(double delta, double lam) {
    if (!(delta > 2.0)) throw std::domain_error("delta must exceed 2");
    if (!(lam > 0.0)) throw std::domain_error("lam must be positive");
    const double nu = 0.5 * delta - 1.0;
    const double z = std::sqrt(2.0 * lam);
    return std::exp(M_LN2 - std::lgamma(nu) + nu * std::log(0.5 * z) +
                    std::log(bessel_k(nu, z)));
}

double laplace_lambda_bessel_form(const ModelParams& p, double lam) {
    require_strike(p);
    if (!(lam > 0.0)) throw std::domain_error("lam must be positive");
    const double nu = p.nu;
    const double k = p.dual_level;
    const double z = std::sqrt(2.0 * lam);
    // The bracket nu I_nu(kz)/k^nu - (z/2)^nu/Gamma(nu) collapses to
    // nu I~_nu(kz)/k^nu exactly; evaluating it through the tail series keeps
    // full precision down to lam -> 0.
    const double kz = k * z;
    double bracket;
    if (kz > 300.0) {
        bracket = nu * std::exp(std::log(bessel_i_tail(nu, kz, true)) + kz - nu * std::log(k));
    } else {
        bracket = nu * bessel_i_tail(nu, kz, false) / std::pow(k, nu);
    }
    return 2.0 * p.delta / (lam * k * k) * bessel_k(nu, z) * bracket;
}

double laplace_lambda_bes3_form(const ModelParams& p, double lam) {
    if (p.delta != 3.0) throw std::domain_error("laplace_lambda_bes3_form: requires delta = 3");
    require_strike(p);
    if (!(lam > 0.0)) throw std::domain_error("lam must be positive");
    const double k = p.dual_level;
    const double z = std::sqrt(2.0 * lam);
    const double x = k * z;
    // sinh(x)/x - 1 via series for small x (direct form loses all digits).
    double dev;
    if (x < 1e-3) {
        const double x2 = x * x;
        dev = x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
    } else {
        dev = std::sinh(x) / x - 1.0;
    }
    return 3.0 / (lam * k * k) * std::exp(-z) * dev;
}

double laplace_lambda_closed(const ModelParams& p, double lam) {
    require_strike(p);
    if (!(lam > 0.0)) throw std::domain_error("lam must be positive");
    const double nu = p.nu;
    const double k = p.dual_level;
    if (k <= 1.0) return laplace_lambda_bessel_form(p, lam);
    // k > 1: transform of the survival difference directly,
    //   (delta/(k^2 lam)) (E_k[e^-lam g1] - E_0[e^-lam g1]),
    // with E_k carrying the never-returning atom 1 - k^-2nu.
    const double z = std::sqrt(2.0 * lam);
    const double e0 = laplace_last_passage(p.delta, lam);
    const double ek = -std::expm1(-2.0 * nu * std::log(k)) +
                      2.0 * nu * std::pow(k, -nu) * bessel_i(nu, z) * bessel_k(nu, k * z);
    return p.delta / (k * k * lam) * (ek - e0);
}

double upper_bound(const ModelParams& p, double t) {
    require_strike(p);
    require_positive_time(t);
    const double nu = p.nu;
    const double k = p.dual_level;
    const double cdelta = std::exp(-nu * M_LN2 - std::lgamma(nu + 1.0));
    return cdelta * std::pow(t, -nu) * (-std::expm1(-k * k / (2.0 * t)));
}

} // namespace besselcall::pricing
