#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aqpe/config.hpp"

namespace aqpe {

struct ResultRow {
    std::string scenario;
    std::string optimizer;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double ln_vh = 0.0;
    double sharpness = 0.0;
    std::size_t generations = 0;
    double terminal_l = 0.0;
    double wall_time_s = 0.0;
};

struct GridRow {
    double param_a = 0.0;
    double param_b = 0.0;
    double terminal_l = 0.0;
    double ln_vh = 0.0;
    bool converged = false;
};

struct HistogramRow {
    std::string scenario;
    double delta = 0.0;
    std::size_t n_zero = 0;
    std::size_t count = 0;
    double expected = 0.0;
};

// Floats are rendered with 10 significant digits everywhere so that repeated
// runs diff cleanly.
inline std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void sort_rows(std::vector<ResultRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.scenario != b.scenario) return a.scenario < b.scenario;
        if (a.optimizer != b.optimizer) return a.optimizer < b.optimizer;
        if (a.n != b.n) return a.n < b.n;
        return a.seed < b.seed;
    });
}

inline std::string render_results_csv(std::vector<ResultRow> rows) {
    sort_rows(rows);
    std::string out = "scenario,optimizer,n,seed,ln_vh,sharpness,generations,terminal_l,wall_time_s\n";
    for (const auto& r : rows) {
        out += r.scenario;
        out += ',';
        out += r.optimizer;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += format_float(r.ln_vh);
        out += ',';
        out += format_float(r.sharpness);
        out += ',';
        out += std::to_string(r.generations);
        out += ',';
        out += format_float(r.terminal_l);
        out += ',';
        out += format_float(r.wall_time_s);
        out += '\n';
    }
    return out;
}

// JSON mirror: an array of objects with the same field names and ordering.
// Non-finite numbers have no JSON literal and surface as null.
inline std::string render_results_json(std::vector<ResultRow> rows) {
    sort_rows(rows);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["scenario"] = r.scenario;
        o["optimizer"] = r.optimizer;
        o["n"] = r.n;
        o["seed"] = r.seed;
        o["ln_vh"] = r.ln_vh;
        o["sharpness"] = r.sharpness;
        o["generations"] = r.generations;
        o["terminal_l"] = r.terminal_l;
        o["wall_time_s"] = r.wall_time_s;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

inline std::string render_grid_csv(const std::vector<GridRow>& rows) {
    std::string out = "param_a,param_b,terminal_l,ln_vh,converged\n";
    for (const auto& r : rows) {
        out += format_float(r.param_a);
        out += ',';
        out += format_float(r.param_b);
        out += ',';
        out += format_float(r.terminal_l);
        out += ',';
        out += format_float(r.ln_vh);
        out += ',';
        out += r.converged ? "1" : "0";
        out += '\n';
    }
    return out;
}

inline std::string render_grid_json(const std::vector<GridRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["param_a"] = r.param_a;
        o["param_b"] = r.param_b;
        o["terminal_l"] = r.terminal_l;
        o["ln_vh"] = r.ln_vh;
        o["converged"] = r.converged;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

inline std::string render_histogram_csv(const std::vector<HistogramRow>& rows) {
    std::string out = "scenario,delta,n_zero,count,expected\n";
    for (const auto& r : rows) {
        out += r.scenario;
        out += ',';
        out += format_float(r.delta);
        out += ',';
        out += std::to_string(r.n_zero);
        out += ',';
        out += std::to_string(r.count);
        out += ',';
        out += format_float(r.expected);
        out += '\n';
    }
    return out;
}

inline std::string render_histogram_json(const std::vector<HistogramRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["scenario"] = r.scenario;
        o["delta"] = r.delta;
        o["n_zero"] = r.n_zero;
        o["count"] = r.count;
        o["expected"] = r.expected;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

// Writes to the named file, or to stdout when the path is empty.
inline void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
    if (!f) throw std::runtime_error("failed writing output file: " + path);
}

inline std::string emit_results(std::vector<ResultRow> rows, OutputSpec::Format format) {
    return format == OutputSpec::Format::Csv ? render_results_csv(std::move(rows))
                                             : render_results_json(std::move(rows));
}

} // namespace aqpe
