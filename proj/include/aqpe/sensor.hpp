#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aqpe/phase.hpp"
#include "aqpe/rng.hpp"

namespace aqpe {

// Initial sensor state for one Ramsey round: Plus is the |0> preparation,
// Minus is |1>.
enum class QubitPrep : std::uint8_t { Plus, Minus };

// Corruption applied to the physical control phase at each measurement. The
// controller's nominal bookkeeping never sees it.
struct NoiseChannel {
    enum class Kind : std::uint8_t { None, Gaussian, Rtn };
    Kind kind = Kind::None;
    double sigma = 0.0;  // Gaussian: standard deviation of the additive offset
    double lambda = 0.0; // Rtn: fixed offset value
    double eta = 0.0;    // Rtn: per-step probability of applying the offset

    static NoiseChannel none() { return NoiseChannel{}; }
    static NoiseChannel gaussian(double sigma) {
        if (sigma < 0.0) throw std::domain_error("gaussian sigma must be >= 0");
        return NoiseChannel{Kind::Gaussian, sigma, 0.0, 0.0};
    }
    static NoiseChannel rtn(double lambda, double eta) {
        if (eta < 0.0 || eta > 1.0) throw std::domain_error("rtn eta must be in [0,1]");
        return NoiseChannel{Kind::Rtn, 0.0, lambda, eta};
    }
};

// Interference visibility of the Ramsey fringe; 1 is the noiseless limit.
struct DecoherenceModel {
    double nu = 1.0;
};

// Whether each round's preparation is drawn uniformly at random (one draw per
// qubit) or pinned to Plus. Random and forced-Plus give identical estimate
// statistics because the feedback consumes the prep-referenced outcome bit.
enum class PrepMode : std::uint8_t { RandomPerQubit, ForcedPlus };

struct EpisodeRecord {
    std::vector<std::uint8_t> outcomes; // raw measurement bits, one per round
    std::vector<double> controls;       // nominal control phase after each update
    double final_estimate = 0.0;        // equals controls.back()
};

// Probability of measuring outcome 0 for a given preparation, phase
// difference delta = phi - theta, and visibility nu. The Plus preparation
// gives (1 + nu cos delta)/2, Minus gives (1 - nu cos delta)/2.
inline double measurement_probability(QubitPrep prep, double delta, double nu) {
    if (nu < 0.0 || nu > 1.0) throw std::domain_error("visibility nu must be in [0,1]");
    double c = nu * std::cos(delta);
    return prep == QubitPrep::Plus ? 0.5 * (1.0 + c) : 0.5 * (1.0 - c);
}

// Probability of a specific outcome bit.
inline double measurement_probability(QubitPrep prep, double delta, double nu, int zeta) {
    double p0 = measurement_probability(prep, delta, nu);
    return zeta == 0 ? p0 : 1.0 - p0;
}

// Samples one measurement outcome; consumes exactly one uniform draw, and
// returns 0 when that draw falls below p0.
inline int sample_outcome(double p0, RngStream& rng) {
    return rng.next_uniform() < p0 ? 0 : 1;
}

// Applies the channel to the physical control phase and canonicalizes.
// Gaussian consumes two draws, Rtn one, None zero.
inline double corrupt_control(double theta, const NoiseChannel& channel, RngStream& rng) {
    switch (channel.kind) {
        case NoiseChannel::Kind::None:
            return canonical_phase(theta);
        case NoiseChannel::Kind::Gaussian:
            return canonical_phase(theta + channel.sigma * rng.next_normal());
        case NoiseChannel::Kind::Rtn:
            return canonical_phase(rng.next_uniform() < channel.eta ? theta + channel.lambda
                                                                    : theta);
    }
    return canonical_phase(theta);
}

// Feedback rule: theta + x on outcome 0, theta - x on outcome 1, canonical.
// Markovian by construction; only the latest bit matters.
inline double update_control(double theta_prev, int zeta, double x) {
    return canonical_phase(zeta == 0 ? theta_prev + x : theta_prev - x);
}

namespace detail {

// Draw order per round is fixed: prep (when random), channel offset, outcome.
inline QubitPrep draw_prep(PrepMode mode, RngStream& rng) {
    if (mode == PrepMode::ForcedPlus) return QubitPrep::Plus;
    return rng.next_below(2) == 0 ? QubitPrep::Plus : QubitPrep::Minus;
}

} // namespace detail

// Lean episode loop returning only the final nominal control phase; shares
// its draw sequence exactly with run_episode below.
inline double run_episode_final(double phi, const double* x, std::size_t n,
                                const NoiseChannel& channel, double nu, RngStream& rng,
                                PrepMode mode = PrepMode::RandomPerQubit) {
    if (n == 0) throw std::domain_error("policy must have at least one increment");
    double theta = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        QubitPrep prep = detail::draw_prep(mode, rng);
        double theta_phys = corrupt_control(theta, channel, rng);
        double p0 = measurement_probability(prep, phi - theta_phys, nu);
        int zeta = sample_outcome(p0, rng);
        int fed = prep == QubitPrep::Plus ? zeta : 1 - zeta;
        theta = update_control(theta, fed, x[m]);
    }
    return theta;
}

// Full episode: the control starts at 0; each round measures against the
// current nominal phase (corrupted only inside the measurement), then applies
// the feedback increment. The recorded outcome is the raw bit; the feedback
// consumes the prep-referenced bit so that a Minus preparation steers the
// same way as Plus.
inline EpisodeRecord run_episode(double phi, const std::vector<double>& policy,
                                 const NoiseChannel& channel, const DecoherenceModel& deco,
                                 RngStream& rng, PrepMode mode = PrepMode::RandomPerQubit) {
    if (policy.empty()) throw std::domain_error("policy must have at least one increment");
    EpisodeRecord rec;
    rec.outcomes.reserve(policy.size());
    rec.controls.reserve(policy.size());
    double theta = 0.0;
    for (std::size_t m = 0; m < policy.size(); ++m) {
        QubitPrep prep = detail::draw_prep(mode, rng);
        double theta_phys = corrupt_control(theta, channel, rng);
        double p0 = measurement_probability(prep, phi - theta_phys, deco.nu);
        int zeta = sample_outcome(p0, rng);
        int fed = prep == QubitPrep::Plus ? zeta : 1 - zeta;
        theta = update_control(theta, fed, policy[m]);
        rec.outcomes.push_back(static_cast<std::uint8_t>(zeta));
        rec.controls.push_back(theta);
    }
    rec.final_estimate = theta;
    return rec;
}

// Fisher information of one round at phase difference delta and visibility
// nu: nu^2 sin^2(delta) / (1 - nu^2 cos^2(delta)). The removable 0/0 point at
// nu=1, delta in {0, pi} returns 0, the limit along delta.
inline double fisher_information(double delta, double nu) {
    if (nu < 0.0 || nu > 1.0) throw std::domain_error("visibility nu must be in [0,1]");
    double s = std::sin(delta);
    double c = std::cos(delta);
    double num = nu * nu * s * s;
    double den = 1.0 - nu * nu * c * c;
    if (num == 0.0) return 0.0;
    if (den <= 0.0) return 0.0;
    return num / den;
}

// Standard-quantum-limit bound on the phase uncertainty after n independent
// rounds at visibility nu: 1 / (nu sqrt(n)). Squaring it gives the matching
// variance benchmark line.
inline double sql_bound(std::uint64_t n, double nu) {
    if (n < 1) throw std::domain_error("sql_bound needs n >= 1");
    if (nu <= 0.0 || nu > 1.0) throw std::domain_error("sql_bound needs nu in (0,1]");
    return 1.0 / (nu * std::sqrt(static_cast<double>(n)));
}

} // namespace aqpe
