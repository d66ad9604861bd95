#pragma once

#include <string>

namespace besselcall {

// Single parameter record threaded through all pricing: dimension delta > 2,
// Bessel index nu = delta/2 - 1, strike K >= 0, and the dual level
// k = K^(-1/(delta-2)) in state space (+inf sentinel when K = 0).
struct ModelParams {
    double delta = 3.0;
    double nu = 0.5;
    double strike = 1.0;
    double dual_level = 1.0;
};

ModelParams make_params(double delta, double strike);

enum class Method { closed3, integral, last_passage, k0, mc };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct PricePoint {
    double t = 0.0;
    double value = 0.0;
    Method method = Method::integral;
};

} // namespace besselcall
