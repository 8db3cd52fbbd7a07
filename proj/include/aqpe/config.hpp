#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aqpe/baseline.hpp"
#include "aqpe/de.hpp"
#include "aqpe/policy_eval.hpp"
#include "aqpe/pso.hpp"
#include "aqpe/sensor.hpp"

namespace aqpe {

// Raised on any malformed configuration; the message names the offending
// field by its full path so typos are locatable.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// One fully concrete noise scenario produced by expanding a swept parameter.
struct ScenarioVariant {
    std::string tag; // e.g. "ideal", "gaussian(0.4)", "rtn(0.2,0.4)"
    NoiseChannel channel;
    DecoherenceModel deco;
};

struct OptimizerSpec {
    enum class Kind : std::uint8_t { De, Pso, Baseline, SqlLine };
    Kind kind = Kind::De;
    std::string tag; // "de", "pso", "baseline", "sql-line"
    DeParams de;
    PsoParams pso;
    // baseline-only settings
    double control_theta = 0.0;
    QubitPrep prep = QubitPrep::Plus;
    PhaseSampling sampling = PhaseSampling::FoldedHalf;
    ActuationNoise actuation = ActuationNoise::PerDraw;
};

struct EvalOverrides {
    std::optional<std::size_t> k_instances; // absolute K, overrides the rule
    double k_per_n2 = 10.0;                 // K = round(k_per_n2 * N^2)
    std::size_t m_repeats = 5;
    EvalMode mode = EvalMode::Fresh;
    std::uint64_t eval_seed = 0;
    std::size_t heldout_k = 20000; // scoring budget for reported policies
    std::size_t heldout_m = 3;

    std::size_t k_for(std::size_t n) const {
        if (k_instances) return *k_instances;
        double k = k_per_n2 * static_cast<double>(n) * static_cast<double>(n);
        auto r = static_cast<std::size_t>(k + 0.5);
        return r < 1 ? 1 : r;
    }
};

struct OutputSpec {
    enum class Format : std::uint8_t { Csv, Json };
    std::string path; // empty means stdout
    Format format = Format::Csv;
};

struct GridSpec {
    bool present = false;
    enum class Alg : std::uint8_t { De, Pso };
    Alg algorithm = Alg::De;
    std::vector<std::pair<double, double>> pairs; // (F, C) or (alpha, beta)
    std::size_t n = 10;
    std::size_t g = 50;
    std::size_t k = 1000;
    std::size_t p = 20;
    std::size_t m = 5;
};

struct HistogramSpec {
    bool present = false;
    std::size_t n = 50;
    std::vector<double> deltas;
    std::size_t repeats = 25000;
};

struct ExperimentConfig {
    std::vector<ScenarioVariant> scenarios;
    std::vector<std::size_t> n_range;
    std::vector<OptimizerSpec> optimizers;
    EvalOverrides eval;
    std::vector<std::uint64_t> seeds;
    OutputSpec output;
    GridSpec grid;
    HistogramSpec histogram;
};

namespace cfgdetail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at '" + path + "': " + what);
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

inline const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

inline std::uint64_t as_u64(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        long long x = v.get<long long>();
        if (x < 0) fail(path, "expected a nonnegative integer");
        return static_cast<std::uint64_t>(x);
    }
    fail(path, "expected a nonnegative integer");
}

inline std::size_t as_count(const json& v, const std::string& path) {
    auto u = as_u64(v, path);
    return static_cast<std::size_t>(u);
}

inline std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

inline std::string format_param(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// A scenario parameter that may be one value or a swept list.
inline std::vector<double> as_number_list(const json& v, const std::string& path) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
        return out;
    }
    if (!v.is_array() || v.empty()) fail(path, "expected a number or a nonempty array");
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::vector<ScenarioVariant> parse_scenario(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    std::string kind = as_string(v.contains("kind") ? v["kind"] : json(), path + ".kind");
    std::vector<ScenarioVariant> out;
    if (kind == "ideal") {
        reject_unknown_keys(v, path, {"kind"});
        out.push_back({"ideal", NoiseChannel::none(), DecoherenceModel{1.0}});
    } else if (kind == "gaussian") {
        reject_unknown_keys(v, path, {"kind", "sigma"});
        if (!v.contains("sigma")) fail(path + ".sigma", "required for gaussian");
        for (double s : as_number_list(v["sigma"], path + ".sigma")) {
            if (s < 0.0) fail(path + ".sigma", "must be >= 0");
            out.push_back({"gaussian(" + format_param(s) + ")", NoiseChannel::gaussian(s),
                           DecoherenceModel{1.0}});
        }
    } else if (kind == "rtn") {
        reject_unknown_keys(v, path, {"kind", "lambda", "eta"});
        if (!v.contains("lambda")) fail(path + ".lambda", "required for rtn");
        if (!v.contains("eta")) fail(path + ".eta", "required for rtn");
        auto lambdas = as_number_list(v["lambda"], path + ".lambda");
        auto etas = as_number_list(v["eta"], path + ".eta");
        if (lambdas.size() > 1 && etas.size() > 1)
            fail(path, "only one of lambda/eta may be a sweep list");
        for (double l : lambdas)
            for (double e : etas) {
                if (e < 0.0 || e > 1.0) fail(path + ".eta", "must be in [0,1]");
                out.push_back({"rtn(" + format_param(l) + "," + format_param(e) + ")",
                               NoiseChannel::rtn(l, e), DecoherenceModel{1.0}});
            }
    } else if (kind == "visibility") {
        reject_unknown_keys(v, path, {"kind", "nu"});
        if (!v.contains("nu")) fail(path + ".nu", "required for visibility");
        for (double nu : as_number_list(v["nu"], path + ".nu")) {
            if (nu < 0.0 || nu > 1.0) fail(path + ".nu", "must be in [0,1]");
            out.push_back({"visibility(" + format_param(nu) + ")", NoiseChannel::none(),
                           DecoherenceModel{nu}});
        }
    } else {
        fail(path + ".kind", "must be one of ideal|gaussian|rtn|visibility");
    }
    return out;
}

inline OptimizerSpec parse_optimizer(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    std::string kind = as_string(v.contains("kind") ? v["kind"] : json(), path + ".kind");
    OptimizerSpec spec;
    if (kind == "de") {
        reject_unknown_keys(v, path,
                            {"kind", "amplification", "crossover", "population",
                             "max_generations", "convergence_threshold", "mutation_base",
                             "bounds"});
        spec.kind = OptimizerSpec::Kind::De;
        spec.tag = "de";
        if (auto* p = find(v, "amplification"))
            spec.de.amplification = as_number(*p, path + ".amplification");
        if (auto* p = find(v, "crossover")) spec.de.crossover = as_number(*p, path + ".crossover");
        if (auto* p = find(v, "population")) spec.de.population = as_count(*p, path + ".population");
        if (auto* p = find(v, "max_generations"))
            spec.de.max_generations = as_count(*p, path + ".max_generations");
        if (auto* p = find(v, "convergence_threshold"))
            spec.de.convergence_threshold = as_number(*p, path + ".convergence_threshold");
        if (auto* p = find(v, "mutation_base")) {
            std::string s = as_string(*p, path + ".mutation_base");
            if (s == "rand") spec.de.mutation_base = MutationBase::Rand;
            else if (s == "best") spec.de.mutation_base = MutationBase::Best;
            else fail(path + ".mutation_base", "must be rand|best");
        }
        if (auto* p = find(v, "bounds")) {
            std::string s = as_string(*p, path + ".bounds");
            if (s == "wrap") spec.de.bounds = BoundMode::Wrap;
            else if (s == "clip") spec.de.bounds = BoundMode::Clip;
            else fail(path + ".bounds", "must be wrap|clip");
        }
        if (spec.de.amplification < 0.0 || spec.de.amplification > 1.0)
            fail(path + ".amplification", "must be in [0,1]");
        if (spec.de.crossover < 0.0 || spec.de.crossover > 1.0)
            fail(path + ".crossover", "must be in [0,1]");
    } else if (kind == "pso") {
        reject_unknown_keys(v, path,
                            {"kind", "alpha", "beta", "w", "v_max0", "v_max_floor_frac",
                             "population", "max_generations", "convergence_threshold"});
        spec.kind = OptimizerSpec::Kind::Pso;
        spec.tag = "pso";
        if (auto* p = find(v, "alpha")) spec.pso.alpha = as_number(*p, path + ".alpha");
        if (auto* p = find(v, "beta")) spec.pso.beta = as_number(*p, path + ".beta");
        if (auto* p = find(v, "w")) spec.pso.w = as_number(*p, path + ".w");
        if (auto* p = find(v, "v_max0")) spec.pso.v_max0 = as_number(*p, path + ".v_max0");
        if (auto* p = find(v, "v_max_floor_frac"))
            spec.pso.v_max_floor_frac = as_number(*p, path + ".v_max_floor_frac");
        if (auto* p = find(v, "population"))
            spec.pso.population = as_count(*p, path + ".population");
        if (auto* p = find(v, "max_generations"))
            spec.pso.max_generations = as_count(*p, path + ".max_generations");
        if (auto* p = find(v, "convergence_threshold"))
            spec.pso.convergence_threshold = as_number(*p, path + ".convergence_threshold");
        if (spec.pso.alpha < 0.0 || spec.pso.beta < 0.0 || spec.pso.w < 0.0)
            fail(path, "alpha, beta, w must be >= 0");
        if (spec.pso.v_max0 <= 0.0) fail(path + ".v_max0", "must be > 0");
    } else if (kind == "baseline") {
        reject_unknown_keys(v, path, {"kind", "control_theta", "prep", "sampling", "actuation"});
        spec.kind = OptimizerSpec::Kind::Baseline;
        spec.tag = "baseline";
        if (auto* p = find(v, "control_theta"))
            spec.control_theta = as_number(*p, path + ".control_theta");
        if (auto* p = find(v, "prep")) {
            std::string s = as_string(*p, path + ".prep");
            if (s == "plus") spec.prep = QubitPrep::Plus;
            else if (s == "minus") spec.prep = QubitPrep::Minus;
            else fail(path + ".prep", "must be plus|minus");
        }
        if (auto* p = find(v, "sampling")) {
            std::string s = as_string(*p, path + ".sampling");
            if (s == "folded_half") spec.sampling = PhaseSampling::FoldedHalf;
            else if (s == "full_circle") spec.sampling = PhaseSampling::FullCircle;
            else fail(path + ".sampling", "must be folded_half|full_circle");
        }
        if (auto* p = find(v, "actuation")) {
            std::string s = as_string(*p, path + ".actuation");
            if (s == "per_draw") spec.actuation = ActuationNoise::PerDraw;
            else if (s == "per_instance") spec.actuation = ActuationNoise::PerInstance;
            else fail(path + ".actuation", "must be per_draw|per_instance");
        }
    } else if (kind == "sql-line") {
        reject_unknown_keys(v, path, {"kind"});
        spec.kind = OptimizerSpec::Kind::SqlLine;
        spec.tag = "sql-line";
    } else {
        fail(path + ".kind", "must be one of de|pso|baseline|sql-line");
    }
    return spec;
}

inline EvalOverrides parse_eval(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    reject_unknown_keys(v, path,
                        {"k_instances", "k_per_n2", "m_repeats", "mode", "eval_seed",
                         "heldout_k", "heldout_m"});
    EvalOverrides e;
    if (v.contains("k_instances") && v.contains("k_per_n2"))
        fail(path, "give either k_instances or k_per_n2, not both");
    if (auto* p = find(v, "k_instances")) e.k_instances = as_count(*p, path + ".k_instances");
    if (auto* p = find(v, "k_per_n2")) e.k_per_n2 = as_number(*p, path + ".k_per_n2");
    if (auto* p = find(v, "m_repeats")) e.m_repeats = as_count(*p, path + ".m_repeats");
    if (auto* p = find(v, "mode")) {
        std::string s = as_string(*p, path + ".mode");
        if (s == "fresh") e.mode = EvalMode::Fresh;
        else if (s == "frozen") e.mode = EvalMode::Frozen;
        else fail(path + ".mode", "must be fresh|frozen");
    }
    if (auto* p = find(v, "eval_seed")) e.eval_seed = as_u64(*p, path + ".eval_seed");
    if (auto* p = find(v, "heldout_k")) e.heldout_k = as_count(*p, path + ".heldout_k");
    if (auto* p = find(v, "heldout_m")) e.heldout_m = as_count(*p, path + ".heldout_m");
    if (e.m_repeats < 1) fail(path + ".m_repeats", "must be >= 1");
    if (e.heldout_k < 1 || e.heldout_m < 1) fail(path, "heldout budgets must be >= 1");
    return e;
}

inline GridSpec parse_grid(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    reject_unknown_keys(v, path, {"algorithm", "values", "pairs", "n", "g", "k", "p", "m"});
    GridSpec grid;
    grid.present = true;
    std::string alg =
        as_string(v.contains("algorithm") ? v["algorithm"] : json(), path + ".algorithm");
    if (alg == "de") grid.algorithm = GridSpec::Alg::De;
    else if (alg == "pso") grid.algorithm = GridSpec::Alg::Pso;
    else fail(path + ".algorithm", "must be de|pso");
    if (v.contains("values") == v.contains("pairs"))
        fail(path, "give exactly one of values (axis list) or pairs (explicit list)");
    if (v.contains("values")) {
        auto axis = as_number_list(v["values"], path + ".values");
        for (double a : axis)
            for (double b : axis) grid.pairs.emplace_back(a, b);
    } else {
        const json& pj = v["pairs"];
        if (!pj.is_array() || pj.empty()) fail(path + ".pairs", "expected a nonempty array");
        for (std::size_t i = 0; i < pj.size(); ++i) {
            const json& pr = pj[i];
            std::string pp = path + ".pairs[" + std::to_string(i) + "]";
            if (!pr.is_array() || pr.size() != 2) fail(pp, "expected [a, b]");
            grid.pairs.emplace_back(as_number(pr[0], pp), as_number(pr[1], pp));
        }
    }
    for (auto& [a, b] : grid.pairs)
        if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
            fail(path, "grid values must lie in [0,1]");
    if (auto* p = find(v, "n")) grid.n = as_count(*p, path + ".n");
    if (auto* p = find(v, "g")) grid.g = as_count(*p, path + ".g");
    if (auto* p = find(v, "k")) grid.k = as_count(*p, path + ".k");
    if (auto* p = find(v, "p")) grid.p = as_count(*p, path + ".p");
    if (auto* p = find(v, "m")) grid.m = as_count(*p, path + ".m");
    if (grid.n < 1 || grid.g < 1 || grid.k < 1 || grid.m < 1)
        fail(path, "n, g, k, m must be >= 1");
    return grid;
}

inline HistogramSpec parse_histogram(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    reject_unknown_keys(v, path, {"n", "deltas", "repeats"});
    HistogramSpec h;
    h.present = true;
    if (auto* p = find(v, "n")) h.n = as_count(*p, path + ".n");
    if (!v.contains("deltas")) fail(path + ".deltas", "required");
    h.deltas = as_number_list(v["deltas"], path + ".deltas");
    if (auto* p = find(v, "repeats")) h.repeats = as_count(*p, path + ".repeats");
    if (h.n < 1 || h.repeats < 1) fail(path, "n and repeats must be >= 1");
    return h;
}

} // namespace cfgdetail

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    using cfgdetail::fail;
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config error at '': expected a JSON object");
    cfgdetail::reject_unknown_keys(
        root, "", {"scenario", "n_range", "optimizer", "eval", "seeds", "output", "grid",
                   "histogram"});
    ExperimentConfig cfg;
    if (root.contains("scenario"))
        cfg.scenarios = cfgdetail::parse_scenario(root["scenario"], "scenario");
    else
        cfg.scenarios = {{"ideal", NoiseChannel::none(), DecoherenceModel{1.0}}};
    if (root.contains("n_range")) {
        const auto& nr = root["n_range"];
        if (!nr.is_array() || nr.empty()) fail("n_range", "expected a nonempty array");
        for (std::size_t i = 0; i < nr.size(); ++i) {
            auto n = cfgdetail::as_count(nr[i], "n_range[" + std::to_string(i) + "]");
            if (n < 1) fail("n_range[" + std::to_string(i) + "]", "must be >= 1");
            cfg.n_range.push_back(n);
        }
    } else {
        for (std::size_t n = 5; n <= 25; ++n) cfg.n_range.push_back(n);
    }
    if (root.contains("optimizer")) {
        const auto& ov = root["optimizer"];
        if (ov.is_array()) {
            if (ov.empty()) fail("optimizer", "expected an object or nonempty array");
            for (std::size_t i = 0; i < ov.size(); ++i)
                cfg.optimizers.push_back(cfgdetail::parse_optimizer(
                    ov[i], "optimizer[" + std::to_string(i) + "]"));
        } else {
            cfg.optimizers.push_back(cfgdetail::parse_optimizer(ov, "optimizer"));
        }
    }
    if (root.contains("eval")) cfg.eval = cfgdetail::parse_eval(root["eval"], "eval");
    if (root.contains("seeds")) {
        const auto& sv = root["seeds"];
        if (!sv.is_array() || sv.empty()) fail("seeds", "expected a nonempty array");
        for (std::size_t i = 0; i < sv.size(); ++i)
            cfg.seeds.push_back(cfgdetail::as_u64(sv[i], "seeds[" + std::to_string(i) + "]"));
    } else {
        cfg.seeds = {1};
    }
    if (root.contains("output")) {
        const auto& ov = root["output"];
        if (!ov.is_object()) fail("output", "expected an object");
        cfgdetail::reject_unknown_keys(ov, "output", {"path", "format"});
        if (auto* p = cfgdetail::find(ov, "path"))
            cfg.output.path = cfgdetail::as_string(*p, "output.path");
        if (auto* p = cfgdetail::find(ov, "format")) {
            std::string s = cfgdetail::as_string(*p, "output.format");
            if (s == "csv") cfg.output.format = OutputSpec::Format::Csv;
            else if (s == "json") cfg.output.format = OutputSpec::Format::Json;
            else fail("output.format", "must be csv|json");
        }
    }
    if (root.contains("grid")) cfg.grid = cfgdetail::parse_grid(root["grid"], "grid");
    if (root.contains("histogram"))
        cfg.histogram = cfgdetail::parse_histogram(root["histogram"], "histogram");
    return cfg;
}

} // namespace aqpe
