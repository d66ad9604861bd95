#include <doctest.h>

#include "besselcall/mc.hpp"
#include "besselcall/pricing.hpp"
#include "besselcall/quadrature.hpp"
#include "besselcall/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

using namespace besselcall;
namespace pr = besselcall::pricing;

namespace {

struct RunningMoments {
    std::uint64_t n = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double se() const { return std::sqrt(m2 / (n - 1.0) / n); }
};

} // namespace

TEST_CASE("MCConfig validation") {
    mc::MCConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n_samples = 1000;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = {};
    cfg.n_samples = 100'000;
    cfg.n_streams = 7; // does not divide
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = {};
    cfg.path_step = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("endpoint sampler: moment identities") {
    mc::Philox rng(11, 0);
    RunningMoments sq;
    const std::uint64_t n = 200'000;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double r = mc::sample_bessel_endpoint(3.0, 1.0, 2.0, rng);
        sq.add(r * r);
    }
    CHECK(std::fabs(sq.mean - 7.0) <= 3.0 * sq.se()); // x0^2 + delta t

    RunningMoments central;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double r = mc::sample_bessel_endpoint(3.0, 0.0, 1.0, rng);
        central.add(r * r);
    }
    CHECK(std::fabs(central.mean - 3.0) <= 3.0 * central.se()); // chi^2_3 mean
}

TEST_CASE("endpoint sampler matches the transition density (KS)") {
    mc::Philox rng(13, 0);
    const std::uint64_t n = 50'000;
    std::vector<double> s(n);
    for (auto& v : s) v = mc::sample_bessel_endpoint(5.0, 0.0, 1.0, rng);
    std::sort(s.begin(), s.end());
    quad::QuadratureSpec q;
    double ks = 0.0;
    for (int i = 1; i <= 24; ++i) {
        const double p = i / 25.0;
        const double x = s[static_cast<std::size_t>(p * (n - 1))];
        auto cdf = quad::integrate_adaptive(
            [](double y) { return pr::transition_density(5.0, 1.0, 0.0, y); }, 1e-12, x, q);
        ks = std::max(ks, std::fabs(p - cdf.value));
    }
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("price estimates agree with the closed forms") {
    mc::MCConfig cfg;
    cfg.n_samples = 200'000;
    cfg.n_streams = 20;
    cfg.seed = 5;
    auto est = mc::estimate_price_mc(make_params(3, 1), 1.0, cfg);
    CHECK(std::fabs(est.mean - pr::price_bes3_closed(make_params(3, 1), 1.0)) <=
          3.0 * est.std_err);
    est = mc::estimate_price_mc(make_params(5, 0.5), 2.0, cfg);
    CHECK(std::fabs(est.mean - pr::price_general_integral(make_params(5, 0.5), 2.0)) <=
          3.0 * est.std_err);
    // payoff identically zero at astronomical strikes
    cfg.n_samples = 10'000;
    cfg.n_streams = 10;
    est = mc::estimate_price_mc(make_params(3, 1e6), 1.0, cfg);
    CHECK(est.mean == 0.0);
    CHECK(est.std_err == 0.0);
}

TEST_CASE("estimates are bit-identical for a fixed seed") {
    mc::MCConfig cfg;
    cfg.n_samples = 20'000;
    cfg.n_streams = 8;
    cfg.seed = 17;
    const auto a = mc::estimate_price_mc(make_params(3, 1), 1.0, cfg);
    const auto b = mc::estimate_price_mc(make_params(3, 1), 1.0, cfg);
    CHECK(std::memcmp(&a.mean, &b.mean, sizeof a.mean) == 0);
    CHECK(a.std_err == b.std_err);
    cfg.seed = 18;
    const auto c = mc::estimate_price_mc(make_params(3, 1), 1.0, cfg);
    CHECK(c.mean != a.mean);
}

TEST_CASE("Getoor sampler") {
    mc::Philox rng(19, 0);
    // empirical survival matches reg_lower_gamma(nu, 1/(2t))
    for (double nu : {0.5, 1.5}) {
        const std::uint64_t n = 100'000;
        std::vector<double> s(n);
        for (auto& v : s) v = mc::sample_g1(nu, rng);
        std::sort(s.begin(), s.end());
        double worst = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double p = i / 21.0;
            const double t = s[static_cast<std::size_t>(p * (n - 1))];
            worst = std::max(worst, std::fabs((1.0 - p) -
                                              specfun::reg_lower_gamma(nu, 0.5 / t)));
        }
        CHECK(worst < std::sqrt(std::log(2.0 / 1e-3) / (2.0 * n)));
    }
    // nu=2: E[g1] = 1/(2(nu-1)) = 1/2
    RunningMoments m;
    for (int i = 0; i < 200'000; ++i) m.add(mc::sample_g1(2.0, rng));
    CHECK(std::fabs(m.mean - 0.5) <= 3.0 * m.se());
    // nu=1/2: infinite mean, truncated means grow with the cap
    double prev = 0.0;
    for (double cap : {1e2, 1e4, 1e6}) {
        mc::Philox r2(23, 0);
        double acc = 0.0;
        const int n = 200'000;
        for (int i = 0; i < n; ++i) acc += std::min(mc::sample_g1(0.5, r2), cap);
        const double tm = acc / n;
        CHECK(tm > prev);
        prev = tm;
    }
}

TEST_CASE("hitting-time sampler: mean within bias budget") {
    mc::MCConfig cfg;
    cfg.seed = 3;
    mc::Philox rng(3, 100);
    RunningMoments m;
    std::uint64_t resamples = 0;
    for (int i = 0; i < 4000; ++i)
        m.add(mc::sample_hitting_time(3.0, 1.0, cfg, rng, &resamples));
    const double tol = std::max(3.0 * m.se(), 0.02 / 3.0);
    CHECK(std::fabs(m.mean - 1.0 / 3.0) <= tol);
    CHECK(resamples == 0); // cap is ~30000 mean passage times away

    // general-dimension Euler route
    mc::Philox rng5(3, 101);
    RunningMoments m5;
    for (int i = 0; i < 4000; ++i) m5.add(mc::sample_hitting_time(5.0, 1.0, cfg, rng5));
    CHECK(std::fabs(m5.mean - 0.2) <= std::max(3.0 * m5.se(), 0.02 * 0.2));
}

TEST_CASE("ks_distance on exact and degenerate histograms") {
    mc::WeightedHistogram h;
    h.bin_edges = {0.0, 1.0, 2.0, 3.0};
    auto cdf = [](double t) { return std::min(t / 3.0, 1.0); };
    h.masses = {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0};
    h.total_weight = 1.0;
    CHECK(mc::ks_distance(h, cdf) == doctest::Approx(0.0).epsilon(1e-15));
    mc::WeightedHistogram point;
    point.bin_edges = {0.0, 1.0};
    point.masses = {1.0, 0.0};
    point.total_weight = 1.0;
    CHECK(mc::ks_distance(point, [](double t) { return t >= 1.0 ? 0.5 : 0.0; }) ==
          doctest::Approx(0.5));
}

TEST_CASE("bridge ceiling probability: series consistency and sanity") {
    // the image and eigenfunction series must agree where both converge well
    for (double b : {1.5, 2.0, 4.0}) {
        const double s = 0.69 * b * b; // just inside the image branch
        const double qi = mc::bes3_bridge_below(s, b);
        const double s2 = 0.71 * b * b; // just inside the eigen branch
        const double qe = mc::bes3_bridge_below(s2, b);
        CHECK(qi >= qe); // longer bridges escape more
        CHECK(mc::bes3_bridge_below(0.01, b) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mc::bes3_bridge_below(50.0 * b * b, b) < 1e-8);
    }
    // frozen references on each branch (b=2: s=2 image side, s=4 eigen side)
    CHECK(mc::bes3_bridge_below(2.0, 2.0) == doctest::Approx(0.606344920236).epsilon(1e-10));
    CHECK(mc::bes3_bridge_below(1.0, 2.0) == doctest::Approx(0.945083804131).epsilon(1e-10));
    CHECK(mc::bes3_bridge_below(4.0, 2.0) == doctest::Approx(0.128350997378).epsilon(1e-10));
    // no jump at the branch switch beyond the function's own slope
    const double b = 2.0;
    const double ql = mc::bes3_bridge_below(0.699 * b * b, b);
    const double qr = mc::bes3_bridge_below(0.701 * b * b, b);
    CHECK(ql > qr);
    CHECK(ql - qr < 0.01);
}

TEST_CASE("lambda construction: mean weight matches the closed mass") {
    mc::MCConfig cfg;
    cfg.n_samples = 10'000;
    cfg.n_streams = 10;
    cfg.seed = 29;
    cfg.path_step = 5e-4;
    // k = 1: weight T_k delta/k^2, mean 1
    auto est = mc::estimate_lambda_mass(make_params(3, 1), cfg);
    CHECK(std::fabs(est.mean - 1.0) <= std::max(3.0 * est.std_err, 0.02));
    // k > 1 at delta = 3: analytic bridge branch, subunit mass
    est = mc::estimate_lambda_mass(make_params(3, 0.5), cfg);
    CHECK(std::fabs(est.mean - 0.875) <= std::max(3.0 * est.std_err, 0.02 * 0.875));
    // k > 1 away from delta = 3: simulated bridge branch (coarser, smoke)
    est = mc::estimate_lambda_mass(make_params(3.5, 0.8), cfg);
    const double mass = pr::lambda_mass(make_params(3.5, 0.8));
    CHECK(std::fabs(est.mean - mass) <= std::max(3.0 * est.std_err, 0.05 * mass));
}

TEST_CASE("lambda histogram matches the analytic bins (small n)") {
    const auto p = make_params(3.0, 1.0);
    mc::MCConfig cfg;
    cfg.n_samples = 20'000;
    cfg.n_streams = 10;
    cfg.seed = 31;
    cfg.path_step = 5e-4;
    std::vector<double> edges{0.0};
    for (int i = 0; i <= 20; ++i)
        edges.push_back(std::exp(std::log(1e-2) + (std::log(50.0) - std::log(1e-2)) * i / 20.0));
    const auto hist = mc::estimate_lambda_density(p, cfg, edges);
    CHECK(hist.masses.size() == edges.size());
    double total = 0.0;
    for (double m : hist.masses) total += m;
    CHECK(total == doctest::Approx(hist.total_weight).epsilon(1e-12));

    quad::QuadratureSpec q;
    std::vector<double> exact(edges.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto cell = quad::integrate_adaptive(
            [&](double t) { return pr::price_bes3_closed(p, t); }, edges[i], edges[i + 1], q);
        exact[i] = 3.0 * cell.value;
        acc += exact[i];
    }
    exact.back() = 1.0 - acc;
    const auto emp = hist.normalized();
    double sup = 0.0;
    for (std::size_t i = 0; i < emp.size(); ++i)
        sup = std::max(sup, std::fabs(emp[i] - exact[i]));
    CHECK(sup < 4.0 / std::sqrt(static_cast<double>(cfg.n_samples)));
}

TEST_CASE("lambda histogram is deterministic and validates edges") {
    const auto p = make_params(3.0, 1.0);
    mc::MCConfig cfg;
    cfg.n_samples = 10'000;
    cfg.n_streams = 10;
    cfg.seed = 37;
    cfg.path_step = 1e-3;
    std::vector<double> edges = {0.0, 0.5, 1.0, 2.0, 5.0};
    const auto a = mc::estimate_lambda_density(p, cfg, edges);
    const auto b = mc::estimate_lambda_density(p, cfg, edges);
    CHECK(a.total_weight == b.total_weight);
    CHECK(a.masses == b.masses);
    CHECK_THROWS_AS(mc::estimate_lambda_density(p, cfg, {1.0}), std::domain_error);
}
