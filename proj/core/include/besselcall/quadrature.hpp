#pragma once

#include <functional>
#include <stdexcept>

namespace besselcall::quad {

// How integrate_tail flattens [a, inf) onto a finite interval.
struct TailPolicy {
    enum class Kind { exp_decay, algebraic };
    Kind kind = Kind::exp_decay;
    double param = 1.0; // decay rate for exp_decay, tail exponent p (>1) for algebraic

    static TailPolicy exponential(double rate = 1.0) { return {Kind::exp_decay, rate}; }
    static TailPolicy algebraic(double exponent) { return {Kind::algebraic, exponent}; }
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    TailPolicy tail_policy{};

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Raised by callers that require a converged result.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double value, double err_est)
        : std::runtime_error(what), value_(value), err_est_(err_est) {}
    double value() const { return value_; }
    double err_est() const { return err_est_; }

private:
    double value_;
    double err_est_;
};

// Globally adaptive Gauss-Kronrod 15(7) bisection on a finite interval.
// Endpoint-integrable singularities are fine (nodes are interior). On
// tolerance failure the best estimate is returned with converged=false.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b, const QuadratureSpec& q);

// Semi-infinite integral over [a, inf): maps the tail to (0, 1] per the
// spec's tail policy, then runs integrate_adaptive on the transform.
QuadResult integrate_tail(const std::function<double(double)>& f,
                          double a, const QuadratureSpec& q);

} // namespace besselcall::quad
