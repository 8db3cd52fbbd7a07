#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aqpe {

// Ready-made experiment configurations. Each entry is embedded in the binary
// and mirrored byte-for-byte by presets/<name>.json in the repository; a
// unit test keeps the two in sync. The full-size presets run the headline
// experiment suites at full statistical weight; the -reduced siblings trade
// precision for desk-scale runtimes; the accept-* presets mirror the
// protocols used by the acceptance suite.
struct PresetEntry {
    const char* name;
    const char* text;
};

namespace presets {

inline constexpr const char* kScalingIdeal = R"json({
  "scenario": {"kind": "ideal"},
  "n_range": [5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 100},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 100},
    {"kind": "baseline"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 10, "m_repeats": 5},
  "seeds": [1, 2, 3],
  "output": {"path": "scaling-ideal.csv", "format": "csv"}
}
)json";

inline constexpr const char* kScalingIdealReduced = R"json({
  "scenario": {"kind": "ideal"},
  "n_range": [5, 9, 13, 17, 21, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 30},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 30},
    {"kind": "baseline"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 2, "m_repeats": 5},
  "seeds": [1],
  "output": {"path": "scaling-ideal-reduced.csv", "format": "csv"}
}
)json";

inline constexpr const char* kScalingGaussian = R"json({
  "scenario": {"kind": "gaussian", "sigma": [0.2, 0.4, 0.8]},
  "n_range": [5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 100},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 100},
    {"kind": "baseline", "actuation": "per_instance"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 10, "m_repeats": 5},
  "seeds": [1, 2, 3],
  "output": {"path": "scaling-gaussian.csv", "format": "csv"}
}
)json";

inline constexpr const char* kScalingGaussianReduced = R"json({
  "scenario": {"kind": "gaussian", "sigma": [0.2, 0.4, 0.8]},
  "n_range": [5, 9, 13, 17, 21, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 30},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 30},
    {"kind": "baseline", "actuation": "per_instance"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 2, "m_repeats": 5},
  "seeds": [1],
  "output": {"path": "scaling-gaussian-reduced.csv", "format": "csv"}
}
)json";

inline constexpr const char* kScalingRtn = R"json({
  "scenario": {"kind": "rtn", "lambda": [0.2, 0.4, 0.8], "eta": 0.4},
  "n_range": [5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 100},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 100},
    {"kind": "baseline", "actuation": "per_instance"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 10, "m_repeats": 5},
  "seeds": [1, 2, 3],
  "output": {"path": "scaling-rtn.csv", "format": "csv"}
}
)json";

inline constexpr const char* kScalingRtnReduced = R"json({
  "scenario": {"kind": "rtn", "lambda": [0.2, 0.4, 0.8], "eta": 0.4},
  "n_range": [5, 9, 13, 17, 21, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 30},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 30},
    {"kind": "baseline", "actuation": "per_instance"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 2, "m_repeats": 5},
  "seeds": [1],
  "output": {"path": "scaling-rtn-reduced.csv", "format": "csv"}
}
)json";

inline constexpr const char* kScalingVisibility = R"json({
  "scenario": {"kind": "visibility", "nu": [0.9, 0.8, 0.6]},
  "n_range": [5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 100},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 100},
    {"kind": "baseline"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 10, "m_repeats": 5},
  "seeds": [1, 2, 3],
  "output": {"path": "scaling-visibility.csv", "format": "csv"}
}
)json";

inline constexpr const char* kScalingVisibilityReduced = R"json({
  "scenario": {"kind": "visibility", "nu": [0.9, 0.8, 0.6]},
  "n_range": [5, 9, 13, 17, 21, 25],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "max_generations": 30},
    {"kind": "pso", "alpha": 0.8, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "max_generations": 30},
    {"kind": "baseline"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 2, "m_repeats": 5},
  "seeds": [1],
  "output": {"path": "scaling-visibility-reduced.csv", "format": "csv"}
}
)json";

inline constexpr const char* kDeGrid = R"json({
  "grid": {"algorithm": "de", "values": [0, 0.2, 0.4, 0.6, 0.8, 1.0], "n": 10, "g": 50, "k": 1000, "p": 20, "m": 5},
  "output": {"path": "de-grid.csv", "format": "csv"}
}
)json";

inline constexpr const char* kPsoGrid = R"json({
  "grid": {"algorithm": "pso", "values": [0, 0.2, 0.4, 0.6, 0.8, 1.0], "n": 10, "g": 50, "k": 1000, "p": 20, "m": 5},
  "output": {"path": "pso-grid.csv", "format": "csv"}
}
)json";

inline constexpr const char* kBinomialHistogram = R"json({
  "scenario": {"kind": "ideal"},
  "histogram": {"n": 50, "deltas": [1.5707963267948966, 0.9272952180016122], "repeats": 25000},
  "output": {"path": "binomial-histogram.csv", "format": "csv"}
}
)json";

inline constexpr const char* kSqlBaseline = R"json({
  "scenario": {"kind": "ideal"},
  "n_range": [5, 10, 15, 20, 25, 30, 40, 50, 60, 80, 100],
  "optimizer": [
    {"kind": "baseline"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_per_n2": 10},
  "seeds": [1, 2, 3, 4, 5],
  "output": {"path": "sql-baseline.csv", "format": "csv"}
}
)json";

inline constexpr const char* kAcceptDeScaling = R"json({
  "scenario": {"kind": "ideal"},
  "n_range": [5, 7, 9, 11, 13, 15],
  "optimizer": [
    {"kind": "de", "amplification": 0.5, "crossover": 0.9, "population": 40, "max_generations": 50, "convergence_threshold": 0, "mutation_base": "best", "bounds": "clip"}
  ],
  "eval": {"k_per_n2": 5, "m_repeats": 5, "mode": "frozen", "eval_seed": 77, "heldout_k": 20000, "heldout_m": 3},
  "seeds": [1, 2, 3],
  "output": {"path": "accept-de-scaling.csv", "format": "csv"}
}
)json";

inline constexpr const char* kAcceptPsoScaling = R"json({
  "scenario": {"kind": "ideal"},
  "n_range": [5, 7, 9, 11, 13, 15],
  "optimizer": [
    {"kind": "pso", "alpha": 0.4, "beta": 0.8, "w": 0.8, "v_max0": 0.2, "v_max_floor_frac": 1.0, "population": 60, "max_generations": 50, "convergence_threshold": 0}
  ],
  "eval": {"k_per_n2": 5, "m_repeats": 10, "mode": "frozen", "eval_seed": 77, "heldout_k": 20000, "heldout_m": 3},
  "seeds": [1, 2, 3],
  "output": {"path": "accept-pso-scaling.csv", "format": "csv"}
}
)json";

inline constexpr const char* kAcceptNoiseRobustness = R"json({
  "scenario": {"kind": "gaussian", "sigma": 0.8},
  "n_range": [15],
  "optimizer": [
    {"kind": "de", "amplification": 0.65, "crossover": 0.7, "population": 40, "max_generations": 80, "convergence_threshold": 0, "mutation_base": "best", "bounds": "clip"},
    {"kind": "baseline", "actuation": "per_instance"}
  ],
  "eval": {"k_instances": 2000, "m_repeats": 5, "mode": "frozen", "eval_seed": 501, "heldout_k": 20000, "heldout_m": 3},
  "seeds": [1, 2, 3, 4, 5],
  "output": {"path": "accept-noise-robustness.csv", "format": "csv"}
}
)json";

inline constexpr const char* kAcceptDeterminism = R"json({
  "scenario": {"kind": "gaussian", "sigma": 0.4},
  "n_range": [4, 5],
  "optimizer": [
    {"kind": "de", "amplification": 0.7, "crossover": 0.8, "population": 8, "max_generations": 3},
    {"kind": "baseline"},
    {"kind": "sql-line"}
  ],
  "eval": {"k_instances": 50, "m_repeats": 2, "heldout_k": 200, "heldout_m": 2},
  "seeds": [7],
  "output": {"path": "accept-determinism.csv", "format": "csv"}
}
)json";

} // namespace presets

inline const std::vector<PresetEntry>& preset_table() {
    static const std::vector<PresetEntry> table = {
        {"scaling-ideal", presets::kScalingIdeal},
        {"scaling-ideal-reduced", presets::kScalingIdealReduced},
        {"scaling-gaussian", presets::kScalingGaussian},
        {"scaling-gaussian-reduced", presets::kScalingGaussianReduced},
        {"scaling-rtn", presets::kScalingRtn},
        {"scaling-rtn-reduced", presets::kScalingRtnReduced},
        {"scaling-visibility", presets::kScalingVisibility},
        {"scaling-visibility-reduced", presets::kScalingVisibilityReduced},
        {"de-grid", presets::kDeGrid},
        {"pso-grid", presets::kPsoGrid},
        {"binomial-histogram", presets::kBinomialHistogram},
        {"sql-baseline", presets::kSqlBaseline},
        {"accept-de-scaling", presets::kAcceptDeScaling},
        {"accept-pso-scaling", presets::kAcceptPsoScaling},
        {"accept-noise-robustness", presets::kAcceptNoiseRobustness},
        {"accept-determinism", presets::kAcceptDeterminism},
    };
    return table;
}

inline const char* find_preset(const std::string& name) {
    for (const auto& e : preset_table())
        if (name == e.name) return e.text;
    return nullptr;
}

} // namespace aqpe
