#include "besselcall/curve.hpp"
#include "besselcall/pricing.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace besselcall::curve {

void CurveRequest::validate() const {
    if (delta_list.empty() || k_list.empty() || methods.empty())
        throw std::domain_error("CurveRequest: delta_list, k_list, methods must be nonempty");
    for (double d : delta_list)
        if (!(d > 2.0)) throw std::domain_error("delta must exceed 2");
    for (double k : k_list)
        if (!(k > 0.0)) throw std::domain_error("CurveRequest: k must be positive");
    if (!(t_grid.min > 0.0) || !(t_grid.max > t_grid.min) || t_grid.points < 2)
        throw std::domain_error("CurveRequest: grid needs min>0, max>min, points>=2");
    for (Method m : methods) {
        if (m == Method::k0 || m == Method::mc)
            throw std::domain_error("CurveRequest: curve methods are closed3|integral|last_passage");
        if (m == Method::closed3)
            for (double d : delta_list)
                if (d != 3.0)
                    throw std::domain_error("closed3 only applies to delta = 3 entries");
    }
}

std::vector<double> make_time_grid(const TimeGrid& g) {
    std::vector<double> t(g.points);
    if (g.log_spaced) {
        const double l0 = std::log(g.min), l1 = std::log(g.max);
        for (int i = 0; i < g.points; ++i)
            t[i] = std::exp(l0 + (l1 - l0) * i / (g.points - 1));
    } else {
        for (int i = 0; i < g.points; ++i)
            t[i] = g.min + (g.max - g.min) * i / (g.points - 1);
    }
    return t;
}

std::vector<CsvRow> generate_curve(const CurveRequest& req,
                                   const quad::QuadratureSpec& q) {
    req.validate();
    const std::vector<double> times = make_time_grid(req.t_grid);
    std::vector<CsvRow> rows;
    rows.reserve(req.delta_list.size() * req.k_list.size() * times.size() *
                 req.methods.size());
    for (double delta : req.delta_list) {
        for (double k : req.k_list) {
            const double strike = std::pow(k, -(delta - 2.0));
            const ModelParams p = make_params(delta, strike);
            for (double t : times) {
                for (Method m : req.methods) {
                    double v = 0.0;
                    switch (m) {
                        case Method::closed3: v = pricing::price_bes3_closed(p, t); break;
                        case Method::integral: v = pricing::price_general_integral(p, t, q); break;
                        case Method::last_passage: v = pricing::price_via_last_passage(p, t, q); break;
                        default: break;
                    }
                    rows.push_back({delta, strike, k, t, m, v});
                }
            }
        }
    }
    return rows;
}

namespace {

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v); // 12 significant digits
    return buf;
}

} // namespace

std::string to_csv_row(const CsvRow& r) {
    std::string out = format_sci(r.delta);
    out += ',';
    out += format_sci(r.strike);
    out += ',';
    out += format_sci(r.k);
    out += ',';
    out += format_sci(r.t);
    out += ',';
    out += method_name(r.method);
    out += ',';
    out += format_sci(r.value);
    out += '\n';
    return out;
}

std::string to_csv(const std::vector<CsvRow>& rows) {
    std::string out = "delta,K,k,t,method,value\n";
    for (const auto& r : rows) out += to_csv_row(r);
    return out;
}

void write_csv(const std::vector<CsvRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << to_csv(rows);
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "delta,K,k,t,method,value")
        throw std::runtime_error("bad CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        CsvRow r{};
        std::getline(ls, field, ',');
        r.delta = std::stod(field);
        std::getline(ls, field, ',');
        r.strike = std::stod(field);
        std::getline(ls, field, ',');
        r.k = std::stod(field);
        std::getline(ls, field, ',');
        r.t = std::stod(field);
        std::getline(ls, field, ',');
        r.method = method_from_name(field);
        std::getline(ls, field, ',');
        r.value = std::stod(field);
        rows.push_back(r);
    }
    return rows;
}

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

CurveRequest figure1_request(double delta) {
    CurveRequest req;
    req.delta_list = {delta};
    for (int i = 1; i <= 10; ++i) req.k_list.push_back(1.0 / i);
    req.t_grid = {true, 1e-3, 1e3, 200};
    req.methods = {delta == 3.0 ? Method::closed3 : Method::integral};
    return req;
}

CurveRequest figure2_request(double k) {
    CurveRequest req;
    req.delta_list = {3, 5, 7, 9, 11, 13};
    req.k_list = {k};
    req.t_grid = {true, 1e-3, 1e3, 200};
    req.methods = {Method::integral};
    return req;
}

} // namespace besselcall::curve
