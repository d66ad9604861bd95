#include "besselcall/transforms.hpp"
#include "besselcall/pricing.hpp"

#include <cmath>
#include <vector>

namespace besselcall::quad {

namespace {

double price(const ModelParams& p, double t, const QuadratureSpec& q) {
    return p.delta == 3.0 ? pricing::price_bes3_closed(p, t)
                          : pricing::price_general_integral(p, t, q);
}

// Finite part up to T*, then C_K t^-(nu+1) (1 - eta/t) with eta fitted from
// the measured ratio at T*.
double weighted_total(const ModelParams& p, double lam, const QuadratureSpec& q) {
    const double nu = p.nu;
    const double k = p.dual_level;
    const double tstar = 1e4 * std::max(1.0, k * k);
    QuadratureSpec inner = q;
    inner.abs_tol = std::min(q.abs_tol * 1e-2, 1e-11);
    inner.rel_tol = std::min(q.rel_tol, 1e-9);

    auto f = [&](double t) {
        const double w = lam > 0.0 ? std::exp(-lam * t) : 1.0;
        return w == 0.0 ? 0.0 : w * price(p, t, inner);
    };
    // stop early once the exponential weight kills everything
    double t_fin = tstar;
    if (lam > 0.0) t_fin = std::min(tstar, std::max(60.0 / lam, 1.0));

    double total = 0.0;
    double lo = 0.0;
    QuadratureSpec outer = q;
    outer.abs_tol = q.abs_tol * 0.05;
    for (double hi : std::vector<double>{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
        if (hi >= t_fin) {
            total += integrate_adaptive(f, lo, t_fin, outer).value;
            lo = t_fin;
            break;
        }
        total += integrate_adaptive(f, lo, hi, outer).value;
        lo = hi;
    }

    if (t_fin >= tstar) {
        const double ck = pricing::tail_constant(p);
        const double ratio = price(p, tstar, inner) * std::pow(tstar, nu + 1.0) / ck;
        const double eta = tstar * (1.0 - ratio);
        if (lam <= 0.0) {
            total += ck * (std::pow(tstar, -nu) / nu -
                           eta * std::pow(tstar, -nu - 1.0) / (nu + 1.0));
        } else {
            QuadratureSpec qt = q;
            qt.tail_policy = TailPolicy::algebraic(nu + 1.0);
            auto tail = integrate_tail(
                [&](double t) {
                    return std::exp(-lam * t) * ck * std::pow(t, -nu - 1.0) *
                           (1.0 - eta / t);
                },
                tstar, qt);
            total += tail.value;
        }
    }
    return pricing::normalization_constant(p) * total;
}

} // namespace

double density_normalization(const ModelParams& p, const QuadratureSpec& q) {
    if (!(p.strike > 0.0)) throw std::domain_error("density_normalization: requires K > 0");
    q.validate();
    return weighted_total(p, 0.0, q);
}

double laplace_numeric(const ModelParams& p, double lam, const QuadratureSpec& q) {
    if (!(p.strike > 0.0)) throw std::domain_error("laplace_numeric: requires K > 0");
    if (!(lam > 0.0)) throw std::domain_error("laplace_numeric: lam must be positive");
    q.validate();
    return weighted_total(p, lam, q);
}

} // namespace besselcall::quad
