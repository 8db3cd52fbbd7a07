#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aqpe/phase.hpp"
#include "aqpe/rng.hpp"
#include "aqpe/sensor.hpp"

namespace aqpe {

// Whether each scoring call draws fresh training phases/outcomes from the
// caller's stream or replays a fixed stream seeded by eval_seed (common
// random numbers across calls).
enum class EvalMode : std::uint8_t { Fresh, Frozen };

struct EvalConfig {
    std::size_t n_qubits = 1;
    std::size_t k_instances = 10; // default set by make_eval_config
    std::size_t m_repeats = 5;
    NoiseChannel channel;
    DecoherenceModel deco;
    EvalMode mode = EvalMode::Fresh;
    std::uint64_t eval_seed = 0; // used only in Frozen mode
    PrepMode prep = PrepMode::RandomPerQubit;
    // When set, these phases are scored instead of uniform draws; size must
    // equal k_instances. Each repeat reuses the same list.
    const std::vector<double>* explicit_phases = nullptr;
};

inline EvalConfig make_eval_config(std::size_t n_qubits) {
    EvalConfig cfg;
    cfg.n_qubits = n_qubits;
    cfg.k_instances = 10 * n_qubits * n_qubits;
    cfg.m_repeats = 5;
    return cfg;
}

struct EvalResult {
    double sharpness = 0.0;  // 1/sqrt(holevo+1); 0 when holevo is infinite
    double holevo = 0.0;     // mean over repeats, +infinity propagating
    double log_holevo = 0.0; // natural log of holevo
    std::vector<double> per_repeat;
};

// Sharpness and variance of a batch of phase errors: S is the modulus of the
// mean unit phasor exp(i delta); the variance is S^-2 - 1. Full antipodal
// cancellation (S = 0) reports +infinity rather than throwing, so optimizer
// selection stays total.
inline std::pair<double, double> holevo_from_deltas(const std::vector<double>& deltas) {
    if (deltas.empty()) throw std::domain_error("holevo_from_deltas needs a nonempty list");
    double cs = 0.0, sn = 0.0;
    for (double d : deltas) {
        cs += std::cos(d);
        sn += std::sin(d);
    }
    cs /= static_cast<double>(deltas.size());
    sn /= static_cast<double>(deltas.size());
    double s = std::sqrt(cs * cs + sn * sn);
    if (s == 0.0) return {0.0, std::numeric_limits<double>::infinity()};
    // s may exceed 1 by an ulp when all phasors coincide; the variance is
    // nonnegative by construction, so round-off below zero is truncated.
    double v = 1.0 / (s * s) - 1.0;
    return {s, v < 0.0 ? 0.0 : v};
}

namespace detail {

// One scored episode: returns (cos d, sin d) of the signed error d between
// the true phase and the final estimate. The stream is the episode's own
// substream; the phase is its first draw unless supplied explicitly.
inline void eval_episode(const double* x, const EvalConfig& cfg, RngStream ep,
                         std::size_t k, double& out_cos, double& out_sin) {
    double phi;
    if (cfg.explicit_phases != nullptr) {
        phi = (*cfg.explicit_phases)[k];
    } else {
        phi = kTwoPi * ep.next_uniform();
    }
    double est = run_episode_final(phi, x, cfg.n_qubits, cfg.channel, cfg.deco.nu, ep,
                                   cfg.prep);
    double d = signed_residue(phi - est);
    out_cos = std::cos(d);
    out_sin = std::sin(d);
}

inline void check_eval_args(const std::vector<double>& policy, const EvalConfig& cfg) {
    if (policy.size() != cfg.n_qubits)
        throw std::domain_error("policy length must equal n_qubits");
    if (cfg.k_instances < 1 || cfg.m_repeats < 1)
        throw std::domain_error("k_instances and m_repeats must be >= 1");
    if (cfg.explicit_phases != nullptr && cfg.explicit_phases->size() != cfg.k_instances)
        throw std::domain_error("explicit_phases size must equal k_instances");
}

inline EvalResult reduce_eval(const std::vector<double>& cs, const std::vector<double>& sn,
                              std::size_t k, std::size_t m) {
    EvalResult res;
    res.per_repeat.reserve(m);
    double sum_v = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        double c = 0.0, s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            c += cs[r * k + i];
            s += sn[r * k + i];
        }
        c /= static_cast<double>(k);
        s /= static_cast<double>(k);
        double mod = std::sqrt(c * c + s * s);
        double v = mod == 0.0 ? std::numeric_limits<double>::infinity()
                              : 1.0 / (mod * mod) - 1.0;
        if (v < 0.0) v = 0.0; // round-off guard: the variance is nonnegative
        res.per_repeat.push_back(v);
        sum_v += v;
    }
    res.holevo = sum_v / static_cast<double>(m);
    res.sharpness = std::isinf(res.holevo) ? 0.0 : 1.0 / std::sqrt(res.holevo + 1.0);
    res.log_holevo = std::log(res.holevo);
    return res;
}

} // namespace detail

// Scores a policy: for each of m_repeats batches, K training phases are
// estimated by independent episodes and folded into one variance via
// holevo_from_deltas; the batch variances are arithmetically averaged.
// Episode (r, k) runs on substream r*K + k of the base stream, so results
// are identical for any parallel execution layout. Pure in its arguments:
// the stream is taken by value and the caller's copy is never advanced.
inline EvalResult evaluate_policy(const std::vector<double>& policy, const EvalConfig& cfg,
                                  RngStream rng) {
    detail::check_eval_args(policy, cfg);
    RngStream base = cfg.mode == EvalMode::Frozen ? RngStream::from_seed(cfg.eval_seed) : rng;
    const std::size_t k = cfg.k_instances, m = cfg.m_repeats;
    const std::size_t total = k * m;
    std::vector<double> cs(total), sn(total);
    const double* x = policy.data();
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
        auto i = static_cast<std::size_t>(idx);
        detail::eval_episode(x, cfg, base.substream(i), i % k, cs[i], sn[i]);
    }
    return detail::reduce_eval(cs, sn, k, m);
}

// Plain-loop reference for evaluate_policy; kept independent of the parallel
// path so the two can be compared bit for bit in tests.
inline EvalResult evaluate_policy_serial(const std::vector<double>& policy,
                                         const EvalConfig& cfg, RngStream rng) {
    detail::check_eval_args(policy, cfg);
    RngStream base = cfg.mode == EvalMode::Frozen ? RngStream::from_seed(cfg.eval_seed) : rng;
    const std::size_t k = cfg.k_instances, m = cfg.m_repeats;
    std::vector<double> cs(k * m), sn(k * m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t idx = r * k + i;
            detail::eval_episode(policy.data(), cfg, base.substream(idx), i, cs[idx], sn[idx]);
        }
    }
    return detail::reduce_eval(cs, sn, k, m);
}

// Population dispersion: the mean absolute deviation of each coordinate from
// its column mean, averaged over coordinates. Zero iff all rows coincide.
// Differences are plain reals, not wrapped around the circle.
inline double convergence_metric(const std::vector<std::vector<double>>& candidates) {
    const std::size_t p = candidates.size();
    if (p < 2) throw std::domain_error("convergence_metric needs at least two candidates");
    const std::size_t n = candidates[0].size();
    if (n < 1) throw std::domain_error("convergence_metric needs at least one coordinate");
    for (const auto& row : candidates)
        if (row.size() != n) throw std::domain_error("candidate rows must have equal length");
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < p; ++i) mean += candidates[i][j];
        mean /= static_cast<double>(p);
        double dev = 0.0;
        for (std::size_t i = 0; i < p; ++i) dev += std::abs(mean - candidates[i][j]);
        total += dev / static_cast<double>(p);
    }
    return total / static_cast<double>(n);
}

} // namespace aqpe
