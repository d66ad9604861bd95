#pragma once

#include "besselcall/model.hpp"
#include "besselcall/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

// Monte Carlo oracles: exact Bessel endpoint sampling, path-based hitting
// times, the Getoor last-passage sampler, and the weighted construction of
// the Lambda_K law. Estimates are reduced over a fixed number of streams in
// stream order with compensated accumulation, so results are bit-identical
// across runs and thread counts.

namespace besselcall::mc {

struct MCConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    std::uint32_t n_streams = 50;
    double path_step = 1e-4; // hitting-time grid step, in units of k^2
    bool bridge_correction = true;

    void validate() const; // n_samples >= 1e4, n_streams | n_samples, path_step > 0
};

struct MCEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::uint64_t n = 0;
};

struct WeightedHistogram {
    std::vector<double> bin_edges;  // increasing; bin i = [e_i, e_{i+1}), last bin = [e_last, inf)
    std::vector<double> masses;     // size = bin_edges.size()
    double total_weight = 0.0;

    std::vector<double> normalized() const;
};

// Exact draw of R_t for BES(delta) from x0: squared radius is t * G with
// G noncentral chi-square (delta dof, noncentrality x0^2/t), realized as a
// Poisson(x0^2/(2t)) mixture of gamma((delta+2N)/2, scale 2) variables.
double sample_bessel_endpoint(double delta, double x0, double t, Philox& rng);

// Sample mean / stderr of (R_t^-(delta-2) - K)^+ from exact endpoint draws.
// For K = 0 the payoff is unbounded (integrable, heavy tail): the stderr is
// still reported but underestimates tail risk.
MCEstimate estimate_price_mc(const ModelParams& p, double t, const MCConfig& cfg);

// Getoor: g_1 = 1/(2 gamma_nu).
double sample_g1(double nu, Philox& rng);

// First passage of BES(delta) from 0 to level k on a grid of step
// path_step * k^2. delta = 3 uses exact Gaussian increments of the
// 3-component Brownian norm; other delta full-truncation Euler on the
// squared process. Discretization bias is O(sqrt step) without the bridge
// correction, much smaller with it. Paths exceeding 1e4 k^2/delta time units
// are resampled (counted in *resamples when given).
double sample_hitting_time(double delta, double k, const MCConfig& cfg, Philox& rng,
                           std::uint64_t* resamples = nullptr);

// Weighted samples of Lambda_K: value (g_1 - W) + W U with W = T_k ^ g_1 and
// importance weight W * delta/k^2, which reproduces the size-biased
// construction exactly (weight T_k delta/k^2 whenever k <= 1).
WeightedHistogram estimate_lambda_density(const ModelParams& p, const MCConfig& cfg,
                                          const std::vector<double>& edges);

// Mean importance weight of the Lambda_K construction (equals lambda_mass).
MCEstimate estimate_lambda_mass(const ModelParams& p, const MCConfig& cfg);

// sup over bin edges of |empirical CDF - cdf|.
double ks_distance(const WeightedHistogram& hist,
                   const std::function<double(double)>& cdf);

// P(BES(3) bridge from 0 to 1 over [0,s] stays below b), b > 1. Image series
// for small s, Dirichlet eigenseries for large s. Used by the k > 1 branch
// of the Lambda_K construction and exposed for its own tests.
double bes3_bridge_below(double s, double b);

} // namespace besselcall::mc
