// Command-line front end: single prices, curve CSV/SVG generation, Laplace
// queries, Monte Carlo runs, and the verification suite.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include "besselcall/curve.hpp"
#include "besselcall/mc.hpp"
#include "besselcall/pricing.hpp"
#include "besselcall/quadrature.hpp"
#include "besselcall/svg.hpp"
#include "besselcall/transforms.hpp"
#include "besselcall/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace {

using namespace besselcall;

struct Defaults {
    double tol = 1e-10;
    std::uint64_t seed = 42;
};

// Precedence: flags > config file > BESSELCALL_TOL environment > built-in.
Defaults load_defaults(const std::string& config_path) {
    Defaults d;
    if (const char* env = std::getenv("BESSELCALL_TOL")) {
        try {
            d.tol = std::stod(env);
        } catch (...) {
            throw std::domain_error("BESSELCALL_TOL is not a number");
        }
    }
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw std::domain_error("cannot read config file " + config_path);
        std::string line;
        while (std::getline(f, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos || line.empty() || line[0] == '#') continue;
            const std::string key = line.substr(0, eq);
            const std::string val = line.substr(eq + 1);
            if (key == "tol")
                d.tol = std::stod(val);
            else if (key == "seed")
                d.seed = std::stoull(val);
        }
    }
    return d;
}

quad::QuadratureSpec make_spec(double tol) {
    quad::QuadratureSpec q;
    q.abs_tol = tol;
    q.rel_tol = tol;
    return q;
}

double resolve_strike(double delta, std::optional<double> strike, std::optional<double> k) {
    if (strike.has_value() == k.has_value())
        throw std::domain_error("give exactly one of --strike and --k");
    if (strike) return *strike;
    if (!(*k > 0.0)) throw std::domain_error("k must be positive");
    return std::pow(*k, -(delta - 2.0));
}

double price_with(Method m, const ModelParams& p, double t, const quad::QuadratureSpec& q) {
    switch (m) {
        case Method::closed3: return pricing::price_bes3_closed(p, t);
        case Method::integral: return pricing::price_general_integral(p, t, q);
        case Method::last_passage: return pricing::price_via_last_passage(p, t, q);
        case Method::k0: return pricing::price_k0(p.delta, t);
        default: throw std::domain_error("method must be closed3|integral|last_passage|k0");
    }
}

int cmd_price(double delta, std::optional<double> strike, std::optional<double> k,
              double t, std::string method, double tol) {
    const double K = resolve_strike(delta, strike, k);
    const quad::QuadratureSpec q = make_spec(tol);
    if (K == 0.0) {
        const double v = pricing::price_k0(delta, t);
        curve::CsvRow row{delta, 0.0, std::numeric_limits<double>::infinity(), t, Method::k0, v};
        std::fputs(curve::to_csv_row(row).c_str(), stdout);
        return 0;
    }
    const ModelParams p = make_params(delta, K);
    if (method.empty()) method = delta == 3.0 ? "closed3" : "integral";
    const Method m = method_from_name(method);
    const double v = price_with(m, p, t, q);
    curve::CsvRow row{delta, K, p.dual_level, t, m, v};
    std::fputs(curve::to_csv_row(row).c_str(), stdout);
    return 0;
}

int cmd_curve(std::vector<double> deltas, std::vector<double> ks,
              std::vector<double> strikes, double tmin, double tmax, int points,
              bool linear, std::vector<std::string> methods, std::string preset,
              const std::string& out, bool svg_flag, double tol) {
    curve::CurveRequest req;
    if (preset == "fig1") {
        req = curve::figure1_request(deltas.size() == 1 ? deltas[0] : 3.0);
    } else if (preset == "fig2") {
        req = curve::figure2_request(ks.size() == 1 ? ks[0] : 1.0);
    } else if (preset.empty()) {
        if (deltas.empty()) throw std::domain_error("curve: --delta required");
        req.delta_list = deltas;
        if (!ks.empty() && !strikes.empty())
            throw std::domain_error("curve: --k and --strike are mutually exclusive");
        if (!ks.empty()) {
            req.k_list = ks;
        } else if (!strikes.empty()) {
            if (deltas.size() != 1)
                throw std::domain_error("curve: --strike lists need a single --delta");
            for (double K : strikes) {
                if (!(K > 0.0)) throw std::domain_error("curve strikes must be positive");
                req.k_list.push_back(std::pow(K, -1.0 / (deltas[0] - 2.0)));
            }
        } else {
            throw std::domain_error("curve: give --k or --strike");
        }
        req.t_grid = {!linear, tmin, tmax, points};
        if (methods.empty()) {
            const bool all3 = std::all_of(deltas.begin(), deltas.end(),
                                          [](double d) { return d == 3.0; });
            req.methods = {all3 ? Method::closed3 : Method::integral};
        } else {
            for (const auto& m : methods) req.methods.push_back(method_from_name(m));
        }
    } else {
        throw std::domain_error("unknown preset: " + preset);
    }

    const auto rows = curve::generate_curve(req, make_spec(tol));
    // write through a temp file so failures leave nothing behind
    const std::string tmp = out + ".tmp";
    try {
        curve::write_csv(rows, tmp);
        std::filesystem::rename(tmp, out);
        if (svg_flag) {
            std::string svg_path = out;
            const auto dot = svg_path.find_last_of('.');
            svg_path = (dot == std::string::npos ? svg_path : svg_path.substr(0, dot)) + ".svg";
            svg::write(rows, svg_path);
        }
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        std::filesystem::remove(out, ec);
        throw;
    }
    std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
    return 0;
}

int cmd_laplace(double delta, std::optional<double> strike, std::optional<double> k,
                double lambda, bool numeric, double tol) {
    const double K = resolve_strike(delta, strike, k);
    if (!(K > 0.0)) throw std::domain_error("laplace requires K > 0");
    const ModelParams p = make_params(delta, K);
    const double closed = pricing::laplace_lambda_closed(p, lambda);
    if (!numeric) {
        std::printf("%.12e\n", closed);
        return 0;
    }
    const double num = quad::laplace_numeric(p, lambda, make_spec(tol));
    const double diff = num - closed;
    std::printf("closed  %.12e\nnumeric %.12e\ndiff    %.3e\n", closed, num, diff);
    return std::fabs(diff) > 1e-5 ? 2 : 0;
}

int cmd_mc(double delta, std::optional<double> strike, std::optional<double> k,
           double t, std::uint64_t n, std::uint64_t seed, std::uint32_t streams,
           double step, double tol) {
    const double K = resolve_strike(delta, strike, k);
    mc::MCConfig cfg;
    cfg.n_samples = n;
    cfg.seed = seed;
    cfg.path_step = step;
    if (streams == 0) { // largest divisor of n not exceeding 50
        for (std::uint32_t s = 50; s >= 1; --s)
            if (n % s == 0) {
                streams = s;
                break;
            }
    }
    cfg.n_streams = streams;
    cfg.validate();
    const ModelParams p = make_params(delta, K);
    const auto est = mc::estimate_price_mc(p, t, cfg);
    const double ref = K == 0.0 ? pricing::price_k0(delta, t)
                       : delta == 3.0 ? pricing::price_bes3_closed(p, t)
                                      : pricing::price_general_integral(p, t, make_spec(tol));
    const double z = est.std_err > 0.0 ? (est.mean - ref) / est.std_err : 0.0;
    std::printf("mean     %.12e\nstd_err  %.12e\nanalytic %.12e\nz        %.3f\n",
                est.mean, est.std_err, ref, z);
    if (K == 0.0)
        std::printf("note: K=0 payoff is heavy-tailed; std_err understates tail risk\n");
    return std::fabs(z) > 4.0 ? 2 : 0;
}

int cmd_verify(const std::string& level_name, std::uint64_t seed) {
    verify::Level level;
    if (level_name == "fast")
        level = verify::Level::fast;
    else if (level_name == "full")
        level = verify::Level::full;
    else
        throw std::domain_error("verify: --level must be fast or full");
    const auto t0 = std::chrono::steady_clock::now();
    bool all = true;
    auto results = verify::run_checks(level, seed, [&](const verify::CheckResult& r) {
        const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        std::printf("[%s] %-45s %s\n", tag, r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) all = false;
    });
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%zu checks, %s in %.1f s\n", results.size(),
                all ? "all passed" : "FAILURES PRESENT", secs);
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"call prices on Bessel strict local martingales"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (tol, seed)");

    // price
    auto* price = app.add_subcommand("price", "single price at (delta, K, t)");
    double delta = 3.0, t = 1.0, lambda = 1.0;
    std::optional<double> strike, klevel;
    std::string method;
    std::optional<double> tol_flag;
    price->add_option("--delta", delta, "dimension delta > 2")->required();
    price->add_option("--strike", strike, "strike K >= 0");
    price->add_option("--k", klevel, "dual level k > 0 (alternative to --strike)");
    price->add_option("--t", t, "maturity t > 0")->required();
    price->add_option("--method", method, "closed3|integral|last_passage|k0");
    price->add_option("--tol", tol_flag, "quadrature tolerance");

    // curve
    auto* curve_cmd = app.add_subcommand("curve", "price curves over a t grid, CSV out");
    std::vector<double> deltas, ks, strikes;
    std::vector<std::string> methods;
    std::string preset, out_path;
    double tmin = 1e-3, tmax = 1e3;
    int points = 200;
    bool linear = false, svg_flag = false;
    curve_cmd->add_option("--delta", deltas, "dimension list");
    curve_cmd->add_option("--k", ks, "dual level list");
    curve_cmd->add_option("--strike", strikes, "strike list (single delta)");
    curve_cmd->add_option("--t-min", tmin, "grid start");
    curve_cmd->add_option("--t-max", tmax, "grid end");
    curve_cmd->add_option("--points", points, "grid points");
    curve_cmd->add_flag("--linear", linear, "linear instead of log spacing");
    curve_cmd->add_option("--method", methods, "curve methods");
    curve_cmd->add_option("--preset", preset, "fig1|fig2");
    curve_cmd->add_option("--out", out_path, "output CSV path")->required();
    curve_cmd->add_flag("--svg", svg_flag, "also write an SVG chart next to the CSV");
    curve_cmd->add_option("--tol", tol_flag, "quadrature tolerance");

    // laplace
    auto* laplace = app.add_subcommand("laplace", "transform of the normalized price curve");
    bool numeric = false;
    laplace->add_option("--delta", delta, "dimension delta > 2")->required();
    laplace->add_option("--strike", strike, "strike K > 0");
    laplace->add_option("--k", klevel, "dual level k > 0");
    laplace->add_option("--lambda", lambda, "transform argument > 0")->required();
    laplace->add_flag("--numeric", numeric, "also run the quadrature oracle");
    laplace->add_option("--tol", tol_flag, "quadrature tolerance");

    // mc
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo price with analytic reference");
    std::uint64_t n = 1'000'000, seed_flag = 0;
    bool seed_given = false;
    std::uint32_t streams = 0;
    double step = 1e-4;
    mc_cmd->add_option("--delta", delta, "dimension delta > 2")->required();
    mc_cmd->add_option("--strike", strike, "strike K >= 0");
    mc_cmd->add_option("--k", klevel, "dual level k > 0");
    mc_cmd->add_option("--t", t, "maturity t > 0")->required();
    mc_cmd->add_option("--n", n, "sample count (>= 1e4)");
    mc_cmd->add_option("--seed", seed_flag, "RNG seed")->each([&](const std::string&) {
        seed_given = true;
    });
    mc_cmd->add_option("--streams", streams, "stream count (must divide n; 0 = auto)");
    mc_cmd->add_option("--step", step, "hitting-path step in units of k^2");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
    std::string level = "fast";
    verify_cmd->add_option("--level", level, "fast|full");
    verify_cmd->add_option("--seed", seed_flag, "RNG seed")->each([&](const std::string&) {
        seed_given = true;
    });

    try {
        app.parse(argc, argv);
        const Defaults d = load_defaults(config_path);
        const double tol = tol_flag.value_or(d.tol);
        const std::uint64_t seed = seed_given ? seed_flag : d.seed;
        if (price->parsed()) return cmd_price(delta, strike, klevel, t, method, tol);
        if (curve_cmd->parsed())
            return cmd_curve(deltas, ks, strikes, tmin, tmax, points, linear, methods,
                             preset, out_path, svg_flag, tol);
        if (laplace->parsed()) return cmd_laplace(delta, strike, klevel, lambda, numeric, tol);
        if (mc_cmd->parsed())
            return cmd_mc(delta, strike, klevel, t, n, seed, streams, step, tol);
        if (verify_cmd->parsed()) return cmd_verify(level, seed);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const quad::ToleranceError& e) {
        std::fprintf(stderr, "numerical failure: %s (value %.6e, err %.2e)\n", e.what(),
                     e.value(), e.err_est());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
}
