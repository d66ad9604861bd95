#pragma once

#include "besselcall/model.hpp"
#include "besselcall/quadrature.hpp"

#include <string>
#include <vector>

namespace besselcall::curve {

struct TimeGrid {
    bool log_spaced = true;
    double min = 1e-3;
    double max = 1e3;
    int points = 200;
};

// A batch of curves: one per (delta, level, method, t). Levels are carried
// as dual levels k (the figure parameterization); strikes convert on entry.
struct CurveRequest {
    std::vector<double> delta_list;
    std::vector<double> k_list;
    TimeGrid t_grid;
    std::vector<Method> methods;

    void validate() const;
};

struct CsvRow {
    double delta;
    double strike;
    double k;
    double t;
    Method method;
    double value;
};

std::vector<double> make_time_grid(const TimeGrid& g);

// Evaluates the request in deterministic (delta, k, t, method) order.
std::vector<CsvRow> generate_curve(const CurveRequest& req,
                                   const quad::QuadratureSpec& q = {});

// Header "delta,K,k,t,method,value"; values in scientific notation with
// 12 significant digits; newline-terminated rows.
std::string to_csv_row(const CsvRow& row);
std::string to_csv(const std::vector<CsvRow>& rows);
void write_csv(const std::vector<CsvRow>& rows, const std::string& path);
std::vector<CsvRow> parse_csv(const std::string& text);
std::vector<CsvRow> read_csv(const std::string& path);

// Presets matching the two figure layouts: all k = 1, 1/2, ..., 1/10 at one
// dimension, and one k across dimensions 3,5,7,9,11,13.
CurveRequest figure1_request(double delta = 3.0);
CurveRequest figure2_request(double k = 1.0);

} // namespace besselcall::curve
