#include "besselcall/mc.hpp"
#include "besselcall/pricing.hpp"
#include "besselcall/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace besselcall::mc {

void MCConfig::validate() const {
    if (n_samples < 10'000)
        throw std::domain_error("MCConfig: n_samples must be >= 1e4");
    if (n_streams == 0 || n_samples % n_streams != 0)
        throw std::domain_error("MCConfig: n_streams must divide n_samples");
    if (!(path_step > 0.0))
        throw std::domain_error("MCConfig: path_step must be positive");
}

namespace {

// Welford accumulator with deterministic pairwise merge.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double d = o.mean - mean;
        const double nt = static_cast<double>(n + o.n);
        mean += d * static_cast<double>(o.n) / nt;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / nt;
        n += o.n;
    }
    MCEstimate estimate() const {
        MCEstimate e;
        e.n = n;
        e.mean = mean;
        e.std_err = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) /
                                      static_cast<double>(n))
                          : 0.0;
        return e;
    }
};

// Runs fn(stream_index, rng) over all streams on a small thread pool;
// results land in a vector indexed by stream, merged by the caller in
// stream order regardless of scheduling.
template <typename State, typename Fn>
std::vector<State> run_streams(const MCConfig& cfg, Fn&& fn) {
    cfg.validate();
    const std::uint32_t ns = cfg.n_streams;
    std::vector<State> states(ns);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, ns);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::uint32_t s = w; s < ns; s += workers) {
                Philox rng(cfg.seed, s);
                fn(s, rng, states[s]);
            }
        });
    }
    for (auto& th : pool) th.join();
    return states;
}

// Fresh distribution per call: no cached spare, so a stream's output is a
// pure function of its own draw sequence.
double standard_normal(Philox& rng) {
    return std::normal_distribution<double>()(rng);
}

double standard_gamma(double shape, Philox& rng) {
    return std::gamma_distribution<double>(shape, 1.0)(rng);
}

} // namespace

double sample_bessel_endpoint(double delta, double x0, double t, Philox& rng) {
    if (!(delta > 2.0)) throw std::domain_error("delta must exceed 2");
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (x0 < 0.0) throw std::domain_error("x0 must be nonnegative");
    double shape = 0.5 * delta;
    if (x0 > 0.0) {
        const double mean = x0 * x0 / (2.0 * t);
        shape += std::poisson_distribution<long>(mean)(rng);
    }
    const double g = 2.0 * standard_gamma(shape, rng);
    return std::sqrt(t * g);
}

MCEstimate estimate_price_mc(const ModelParams& p, double t, const MCConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    const double two_nu = 2.0 * p.nu;
    const double K = p.strike;
    const std::uint64_t per = cfg.n_samples / cfg.n_streams;
    auto states = run_streams<Moments>(
        cfg, [&](std::uint32_t, Philox& rng, Moments& m) {
            for (std::uint64_t i = 0; i < per; ++i) {
                const double r = sample_bessel_endpoint(p.delta, 1.0, t, rng);
                const double payoff = std::pow(r, -two_nu) - K;
                m.add(payoff > 0.0 ? payoff : 0.0);
            }
        });
    Moments total;
    for (const auto& s : states) total.merge(s);
    return total.estimate();
}

double sample_g1(double nu, Philox& rng) {
    if (!(nu > 0.0)) throw std::domain_error("nu must be positive");
    double g = standard_gamma(nu, rng);
    if (g < 1e-300) g = 1e-300;
    return 0.5 / g;
}

namespace {

struct HitResult {
    double time;
    bool capped;
};

// One first-passage path from 0 to k. delta = 3 steps the norm of a
// 3-component Brownian motion exactly; other dimensions use full-truncation
// Euler on the squared process. The optional correction draws an intra-step
// crossing of the radial path from the Brownian-bridge probability.
HitResult hit_path(double delta, double k, double h, bool bridge, Philox& rng) {
    const double cap = 1e4 * k * k / delta;
    const double sh = std::sqrt(h);
    double t = 0.0;
    if (delta == 3.0) {
        double r = 0.0;
        while (t < cap) {
            const double z1 = standard_normal(rng);
            const double z2 = standard_normal(rng);
            const double z3 = standard_normal(rng);
            const double rn = std::sqrt((r + sh * z1) * (r + sh * z1) +
                                        h * (z2 * z2 + z3 * z3));
            t += h;
            if (rn >= k) return {t, false};
            if (bridge) {
                const double pc = std::exp(-2.0 * (k - r) * (k - rn) / h);
                if (rng.uniform() < pc) return {t, false};
            }
            r = rn;
        }
    } else {
        double x = 0.0; // squared radius
        while (t < cap) {
            const double xp = x > 0.0 ? x : 0.0;
            const double r0 = std::sqrt(xp);
            x = x + delta * h + 2.0 * std::sqrt(xp * h) * standard_normal(rng);
            t += h;
            const double rn = std::sqrt(x > 0.0 ? x : 0.0);
            if (rn >= k) return {t, false};
            if (bridge) {
                const double pc = std::exp(-2.0 * (k - r0) * (k - rn) / h);
                if (rng.uniform() < pc) return {t, false};
            }
        }
    }
    return {cap, true};
}

} // namespace

double sample_hitting_time(double delta, double k, const MCConfig& cfg, Philox& rng,
                           std::uint64_t* resamples) {
    if (!(delta > 2.0)) throw std::domain_error("delta must exceed 2");
    if (!(k > 0.0)) throw std::domain_error("k must be positive");
    const double h = cfg.path_step * k * k;
    for (;;) {
        const HitResult res = hit_path(delta, k, h, cfg.bridge_correction, rng);
        if (!res.capped) return res.time;
        if (resamples) ++*resamples;
    }
}

std::vector<double> WeightedHistogram::normalized() const {
    std::vector<double> out(masses.size());
    if (total_weight > 0.0)
        for (std::size_t i = 0; i < masses.size(); ++i)
            out[i] = masses[i] / total_weight;
    return out;
}

double bes3_bridge_below(double s, double b) {
    if (!(b > 1.0)) throw std::domain_error("bes3_bridge_below: requires b > 1");
    if (!(s > 0.0)) throw std::domain_error("bes3_bridge_below: requires s > 0");
    if (s < 0.7 * b * b) {
        // method of images in the strip (0, b)
        double q = 1.0;
        for (int j = 1; j <= 80; ++j) {
            const double ap = 1.0 + 2.0 * j * b;
            const double am = 1.0 - 2.0 * j * b;
            const double tp = ap * std::exp(-(ap * ap - 1.0) / (2.0 * s));
            const double tm = am * std::exp(-(am * am - 1.0) / (2.0 * s));
            q += tp + tm;
            if (std::fabs(tp) + std::fabs(tm) < 1e-18) break;
        }
        return std::clamp(q, 0.0, 1.0);
    }
    // Dirichlet eigenseries of the strip
    double sum = 0.0;
    for (int n = 1; n <= 400; ++n) {
        const double term = n * std::sin(n * M_PI / b) *
                            std::exp(-n * n * M_PI * M_PI * s / (2.0 * b * b));
        sum += term;
        if (n > 4 && std::fabs(term) < 1e-20 * std::max(std::fabs(sum), 1e-300)) break;
    }
    const double q = M_PI * std::sqrt(2.0 * M_PI) * std::pow(s, 1.5) / (b * b) *
                     std::exp(1.0 / (2.0 * s)) * sum;
    return std::clamp(q, 0.0, 1.0);
}

namespace {

// Inverse-CDF table of the last-passage law at level 1 from x, i.e. the
// density nu * p_t(x, 1) (total mass x^-2nu for x > 1, else 1).
struct LastPassageTable {
    std::vector<double> logt;
    std::vector<double> cdf; // unnormalized, cdf[i] = mass on (0, t_i]
    double total = 0.0;
    double nu = 0.5;
    double t_hi = 0.0;
    double tail_coeff = 0.0; // survival ~ tail_coeff * t^-nu beyond t_hi

    double sample(double u) const {
        const double target = u * total;
        if (target >= cdf.back()) {
            const double surv = std::max(total - target, 1e-300);
            return std::pow(surv / tail_coeff, -1.0 / nu);
        }
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        if (i == 0) return std::exp(logt.front());
        const double f0 = cdf[i - 1], f1 = cdf[i];
        const double w = (target - f0) / std::max(f1 - f0, 1e-300);
        return std::exp(logt[i - 1] + w * (logt[i] - logt[i - 1]));
    }
};

LastPassageTable build_last_passage_table(double delta, double x) {
    const double nu = 0.5 * delta - 1.0;
    LastPassageTable tab;
    tab.nu = nu;
    const bool on_level = std::fabs(x - 1.0) < 1e-12;
    double t_lo = on_level ? 1e-12 : std::max((1.0 - x) * (1.0 - x) / 90.0, 1e-12);
    tab.t_hi = 1e8 * std::max(1.0, x * x);
    const int m = 2048;
    tab.logt.resize(m);
    tab.cdf.resize(m);
    const double l0 = std::log(t_lo), l1 = std::log(tab.t_hi);
    for (int i = 0; i < m; ++i)
        tab.logt[i] = l0 + (l1 - l0) * i / (m - 1);
    auto dens = [&](double t) { return nu * pricing::transition_density(delta, t, x, 1.0); };
    // mass below t_lo: ~ nu sqrt(2/pi) 2 sqrt(t) on the level, else suppressed
    double acc = on_level ? nu * std::sqrt(2.0 / M_PI) * 2.0 * std::sqrt(t_lo) : 0.0;
    tab.cdf[0] = acc;
    // per-cell 15-point Gauss-Kronrod, cells are log-fine
    static const double xg[8] = {0.991455371120813, 0.949107912342759,
                                 0.864864423359769, 0.741531185599394,
                                 0.586087235467691, 0.405845151377397,
                                 0.207784955007898, 0.0};
    static const double wg[8] = {0.022935322010529, 0.063092092629979,
                                 0.104790010322250, 0.140653259715525,
                                 0.169004726639267, 0.190350578064785,
                                 0.204432940075298, 0.209482141084728};
    for (int i = 1; i < m; ++i) {
        const double a = std::exp(tab.logt[i - 1]);
        const double b = std::exp(tab.logt[i]);
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double cell = wg[7] * dens(c);
        for (int j = 0; j < 7; ++j)
            cell += wg[j] * (dens(c - hw * xg[j]) + dens(c + hw * xg[j]));
        acc += cell * hw;
        tab.cdf[i] = acc;
    }
    tab.tail_coeff = std::exp(-nu * M_LN2 - std::lgamma(nu + 1.0));
    tab.total = acc + tab.tail_coeff * std::pow(tab.t_hi, -nu);
    const double expected = x > 1.0 ? std::pow(x, -2.0 * nu) : 1.0;
    if (std::fabs(tab.total - expected) > 1e-5 * expected)
        throw std::runtime_error("last-passage table mass check failed");
    return tab;
}

// Bridge of BES(delta) from 0 to 1 over [0, s]: does it stay below b?
// Integer dimensions step the coordinates of the Gaussian bridge exactly;
// fractional dimensions use Euler on the radial bridge SDE whose drift
// carries the I_{nu+1}/I_nu ratio.
bool bridge_stays_below(double delta, double s, double b, double step, Philox& rng) {
    const int d = static_cast<int>(std::lround(delta));
    const bool integer_dim = std::fabs(delta - d) < 1e-12;
    const int nsteps = std::max(32, static_cast<int>(std::ceil(s / step)));
    const double h = s / nsteps;
    if (integer_dim) {
        std::vector<double> x(d, 0.0);
        double t = 0.0;
        double rprev = 0.0;
        for (int i = 0; i < nsteps - 1; ++i) {
            const double rem = s - t;
            const double var = h * (rem - h) / rem;
            const double sd = std::sqrt(std::max(var, 0.0));
            double r2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double target = c == 0 ? 1.0 : 0.0;
                x[c] += (h / rem) * (target - x[c]) + sd * standard_normal(rng);
                r2 += x[c] * x[c];
            }
            t += h;
            const double r = std::sqrt(r2);
            if (r >= b) return false;
            const double pc = std::exp(-2.0 * (b - rprev) * (b - r) / h);
            if (rng.uniform() < pc) return false;
            rprev = r;
        }
        return true;
    }
    const double nu = 0.5 * delta - 1.0;
    double r = std::sqrt(h * 2.0 * standard_gamma(0.5 * delta, rng)); // free start over the first cell
    double t = h;
    if (r >= b) return false;
    double rprev = r;
    for (int i = 1; i < nsteps - 1; ++i) {
        const double rem = s - t;
        const double arg = r / rem;
        double ratio;
        if (arg < 1e-6) {
            ratio = arg / (2.0 * (nu + 1.0));
        } else {
            const double i0 = specfun::bessel_i(nu, arg, true);
            const double i1 = specfun::bessel_i(nu + 1.0, arg, true);
            ratio = i1 / i0;
        }
        const double drift = (delta - 1.0) / (2.0 * std::max(r, 1e-9)) - r / rem + ratio / rem;
        r = r + drift * h + std::sqrt(h) * standard_normal(rng);
        if (r < 1e-9) r = 1e-9;
        t += h;
        if (r >= b) return false;
        const double pc = std::exp(-2.0 * (b - rprev) * (b - r) / h);
        if (rng.uniform() < pc) return false;
        rprev = r;
    }
    return true;
}

struct LambdaState {
    Moments weight;
    std::vector<double> hist;
};

void bin_add(std::vector<double>& hist, const std::vector<double>& edges,
             double x, double w) {
    if (hist.empty()) return;
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t i = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    if (i >= hist.size()) i = hist.size() - 1;
    hist[i] += w;
}

std::vector<LambdaState> run_lambda(const ModelParams& p, const MCConfig& cfg,
                                    const std::vector<double>& edges) {
    if (!(p.strike > 0.0)) throw std::domain_error("estimate_lambda_density: requires K > 0");
    const double k = p.dual_level;
    const double nu = p.nu;
    const double delta = p.delta;
    const double norm = delta / (k * k);
    const bool above_one = k > 1.0;
    const LastPassageTable table = build_last_passage_table(delta, k);
    const double s_cap = 9.0 * k * k; // bridge survival beyond this is < 1e-14
    const std::uint64_t per = cfg.n_samples / cfg.n_streams;
    return run_streams<LambdaState>(cfg, [&](std::uint32_t, Philox& rng, LambdaState& st) {
        st.hist.assign(edges.empty() ? 0 : edges.size(), 0.0);
        const double atom = above_one ? std::pow(k, -2.0 * nu) : 1.0;
        for (std::uint64_t i = 0; i < per; ++i) {
            // branch a: T_k happens before g_1 (always, for k <= 1)
            const double tk = sample_hitting_time(delta, k, cfg, rng);
            const double a = table.sample(rng.uniform());
            const double u = rng.uniform();
            const double wa = norm * atom * tk;
            const double va = a + tk * u;
            double w = wa;
            bin_add(st.hist, edges, va, wa);
            if (above_one) {
                // branch b: the path never reaches k before g_1
                const double g1 = sample_g1(nu, rng);
                const double ub = rng.uniform();
                double qv = 0.0;
                if (g1 < s_cap) {
                    if (delta == 3.0)
                        qv = bes3_bridge_below(g1, k);
                    else
                        qv = bridge_stays_below(delta, g1, k,
                                                cfg.path_step * k * k * 10.0, rng)
                                 ? 1.0
                                 : 0.0;
                }
                if (qv > 0.0) {
                    const double wb = norm * g1 * qv;
                    bin_add(st.hist, edges, g1 * ub, wb);
                    w += wb;
                }
            }
            st.weight.add(w);
        }
    });
}

} // namespace

WeightedHistogram estimate_lambda_density(const ModelParams& p, const MCConfig& cfg,
                                          const std::vector<double>& edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
        throw std::domain_error("estimate_lambda_density: edges must be an increasing grid");
    auto states = run_lambda(p, cfg, edges);
    WeightedHistogram hist;
    hist.bin_edges = edges;
    hist.masses.assign(edges.size(), 0.0);
    double total = 0.0, comp = 0.0; // Kahan over streams in index order
    for (const auto& st : states) {
        for (std::size_t i = 0; i < hist.masses.size(); ++i) hist.masses[i] += st.hist[i];
        const double x = st.weight.mean * static_cast<double>(st.weight.n);
        const double y = x - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    hist.total_weight = total;
    return hist;
}

MCEstimate estimate_lambda_mass(const ModelParams& p, const MCConfig& cfg) {
    auto states = run_lambda(p, cfg, {});
    Moments m;
    for (const auto& st : states) m.merge(st.weight);
    return m.estimate();
}

double ks_distance(const WeightedHistogram& hist,
                   const std::function<double(double)>& cdf) {
    if (hist.total_weight <= 0.0)
        throw std::domain_error("ks_distance: histogram has no mass");
    double acc = 0.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < hist.bin_edges.size(); ++i) {
        sup = std::max(sup, std::fabs(acc / hist.total_weight - cdf(hist.bin_edges[i])));
        if (i < hist.masses.size()) acc += hist.masses[i];
    }
    return sup;
}

} // namespace besselcall::mc
