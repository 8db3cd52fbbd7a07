#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aqpe/phase.hpp"
#include "aqpe/policy_eval.hpp"
#include "aqpe/rng.hpp"
#include "aqpe/sensor.hpp"

namespace aqpe {

// How the benchmark draws its test phases. The arccos estimator cannot tell
// delta from -delta, so scoring draws the relative phase in [0, pi) by
// default; the full circle is kept available for comparison.
enum class PhaseSampling : std::uint8_t { FoldedHalf, FullCircle };

// Whether the control-phase corruption is redrawn for every one of the N
// measurements (matching the per-qubit actuation of the adaptive scheme) or
// drawn once per phase instance (the shifter is set once and left alone).
enum class ActuationNoise : std::uint8_t { PerDraw, PerInstance };

struct BaselineConfig {
    std::size_t n_qubits = 1;
    std::size_t k_instances = 10; // default set by make_baseline_config
    double control_theta = 0.0;
    QubitPrep prep = QubitPrep::Plus;
    NoiseChannel channel;
    DecoherenceModel deco;
    PhaseSampling sampling = PhaseSampling::FoldedHalf;
    ActuationNoise actuation = ActuationNoise::PerDraw;
};

inline BaselineConfig make_baseline_config(std::size_t n_qubits) {
    BaselineConfig cfg;
    cfg.n_qubits = n_qubits;
    cfg.k_instances = 10 * n_qubits * n_qubits;
    return cfg;
}

struct BinCount {
    std::size_t n_zero = 0;
    std::size_t n_total = 0;
};

// N Bernoulli measurements against the fixed control phase; returns how many
// came out 0. An active channel corrupts the physical control per draw (or
// once up front, per cfg.actuation).
inline BinCount count_outcomes(double phi, const BaselineConfig& cfg, RngStream& rng) {
    if (cfg.n_qubits < 1) throw std::domain_error("baseline needs n_qubits >= 1");
    BinCount count;
    count.n_total = cfg.n_qubits;
    double theta_fixed = cfg.control_theta;
    if (cfg.channel.kind != NoiseChannel::Kind::None &&
        cfg.actuation == ActuationNoise::PerInstance) {
        theta_fixed = corrupt_control(cfg.control_theta, cfg.channel, rng);
    }
    for (std::size_t m = 0; m < cfg.n_qubits; ++m) {
        double theta_phys = theta_fixed;
        if (cfg.channel.kind != NoiseChannel::Kind::None &&
            cfg.actuation == ActuationNoise::PerDraw) {
            theta_phys = corrupt_control(cfg.control_theta, cfg.channel, rng);
        }
        double p0 = measurement_probability(cfg.prep, phi - theta_phys, cfg.deco.nu);
        if (sample_outcome(p0, rng) == 0) count.n_zero += 1;
    }
    return count;
}

// Inverts the expected count fraction through arccos around the control
// phase: theta + arccos(2 n0/N - 1) for Plus, mirrored signs for Minus. The
// argument is clamped to [-1, 1] so boundary counts stay finite; the result
// lies in [theta, theta + pi] before canonicalization.
inline double estimate_phase(const BinCount& count, double theta, QubitPrep prep) {
    if (count.n_total < 1) throw std::domain_error("estimate_phase needs n_total >= 1");
    double frac = 2.0 * static_cast<double>(count.n_zero) /
                      static_cast<double>(count.n_total) -
                  1.0;
    double arg = prep == QubitPrep::Plus ? frac : -frac;
    if (arg > 1.0) arg = 1.0;
    if (arg < -1.0) arg = -1.0;
    return canonical_phase(theta + std::acos(arg));
}

namespace detail {

// One scored instance on its own substream: draws the test phase (first
// draw), counts outcomes, inverts, and reports the phasor of the error.
inline void baseline_episode(const BaselineConfig& cfg, RngStream ep, double& out_cos,
                             double& out_sin) {
    double u = ep.next_uniform();
    double phi = cfg.sampling == PhaseSampling::FoldedHalf
                     ? canonical_phase(cfg.control_theta + kPi * u)
                     : kTwoPi * u;
    BinCount count = count_outcomes(phi, cfg, ep);
    double est = estimate_phase(count, cfg.control_theta, cfg.prep);
    double d = signed_residue(phi - est);
    out_cos = std::cos(d);
    out_sin = std::sin(d);
}

inline EvalResult reduce_baseline(const std::vector<double>& cs, const std::vector<double>& sn) {
    double c = 0.0, s = 0.0;
    for (double v : cs) c += v;
    for (double v : sn) s += v;
    c /= static_cast<double>(cs.size());
    s /= static_cast<double>(sn.size());
    double mod = std::sqrt(c * c + s * s);
    EvalResult res;
    res.sharpness = mod;
    res.holevo = mod == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (mod * mod) - 1.0;
    if (res.holevo < 0.0) res.holevo = 0.0; // round-off guard: variance is nonnegative
    res.log_holevo = std::log(res.holevo);
    res.per_repeat = {res.holevo};
    return res;
}

} // namespace detail

// Scores the non-adaptive protocol: K independent phase instances, each
// measured N times at the fixed control and inverted through arccos; the
// error phasors fold into one variance. Instance k runs on substream k, so
// the result is identical under any parallel layout.
inline EvalResult baseline_variance(const BaselineConfig& cfg, RngStream rng) {
    if (cfg.k_instances < 1) throw std::domain_error("baseline needs k_instances >= 1");
    const std::size_t k = cfg.k_instances;
    std::vector<double> cs(k), sn(k);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(k); ++idx) {
        auto i = static_cast<std::size_t>(idx);
        detail::baseline_episode(cfg, rng.substream(i), cs[i], sn[i]);
    }
    return detail::reduce_baseline(cs, sn);
}

// Plain-loop reference for baseline_variance, kept independent of the
// parallel path for bitwise comparison in tests.
inline EvalResult baseline_variance_serial(const BaselineConfig& cfg, RngStream rng) {
    if (cfg.k_instances < 1) throw std::domain_error("baseline needs k_instances >= 1");
    const std::size_t k = cfg.k_instances;
    std::vector<double> cs(k), sn(k);
    for (std::size_t i = 0; i < k; ++i)
        detail::baseline_episode(cfg, rng.substream(i), cs[i], sn[i]);
    return detail::reduce_baseline(cs, sn);
}

} // namespace aqpe
