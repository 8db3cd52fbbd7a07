#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aqpe/de.hpp"
#include "aqpe/phase.hpp"
#include "aqpe/policy_eval.hpp"
#include "aqpe/rng.hpp"

namespace aqpe {

struct PsoParams {
    double alpha = 0.8;  // pull toward the particle's own best position
    double beta = 0.8;   // pull toward the swarm-wide best position
    double w = 0.8;      // damping applied to the velocity inside the move
    double v_max0 = 0.2; // initial velocity clamp
    double v_max_floor_frac = 0.01; // clamp never decays below this fraction of v_max0
    std::size_t population = 0;     // 0 means default_population(n)
    std::size_t max_generations = 100;
    double convergence_threshold = 0.1256;
};

struct PsoSwarm {
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> velocities;
    std::vector<std::vector<double>> pbest_pos;
    std::vector<double> pbest_fit;
    std::vector<double> gbest_pos;
    double gbest_fit = 0.0;
    std::size_t generation = 0;
};

// Velocity clamp at a given generation: linear decay from v_max0 toward zero
// across the budget, floored at floor_frac * v_max0. Non-increasing and
// strictly positive.
inline double vmax_schedule(double v_max0, std::size_t generation, std::size_t max_generations,
                            double floor_frac = 0.01) {
    double decayed = v_max0 * (1.0 - static_cast<double>(generation) /
                                         static_cast<double>(max_generations + 1));
    double floor = floor_frac * v_max0;
    return decayed > floor ? decayed : floor;
}

// Core velocity rule with the two random scalars supplied explicitly:
// v' = clamp(v + alpha ra (pbest - x) + beta rb (gbest - x), +-vmax).
// Differences are plain reals; the attraction acts along the line, not
// around the circle.
inline std::vector<double> pso_velocity_update(const PsoSwarm& swarm, std::size_t i,
                                               const PsoParams& params, double vmax, double ra,
                                               double rb) {
    const auto& x = swarm.positions[i];
    const auto& v = swarm.velocities[i];
    const auto& pb = swarm.pbest_pos[i];
    const auto& gb = swarm.gbest_pos;
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double nv = v[j] + params.alpha * ra * (pb[j] - x[j]) + params.beta * rb * (gb[j] - x[j]);
        if (nv > vmax) nv = vmax;
        if (nv < -vmax) nv = -vmax;
        out[j] = nv;
    }
    return out;
}

// Drawing variant: consumes exactly two uniforms (ra then rb), scalar per
// particle per generation.
inline std::vector<double> pso_velocity_update(const PsoSwarm& swarm, std::size_t i,
                                               const PsoParams& params, double vmax,
                                               RngStream& rng) {
    double ra = rng.next_uniform();
    double rb = rng.next_uniform();
    return pso_velocity_update(swarm, i, params, vmax, ra, rb);
}

// Damped move: x + w v per entry, canonicalized to [0, 2pi).
inline std::vector<double> pso_position_update(const std::vector<double>& position,
                                               const std::vector<double>& velocity, double w) {
    if (position.size() != velocity.size())
        throw std::domain_error("position and velocity rows must have equal length");
    std::vector<double> out(position.size());
    for (std::size_t j = 0; j < position.size(); ++j)
        out[j] = canonical_phase(position[j] + w * velocity[j]);
    return out;
}

// Fresh swarm: positions uniform in [0, 2pi), velocities uniform in
// [-v_max0, v_max0], personal bests at the initial positions, swarm best at
// the fittest initial particle.
inline PsoSwarm pso_init(const PsoParams& params, std::size_t n, const EvalConfig& cfg,
                         RngStream& rng) {
    std::size_t p = params.population == 0 ? default_population(n) : params.population;
    if (p < 2) throw std::domain_error("swarm needs at least two particles");
    if (params.v_max0 <= 0.0) throw std::domain_error("v_max0 must be positive");
    PsoSwarm swarm;
    swarm.positions.resize(p);
    for (auto& row : swarm.positions) {
        row.resize(n);
        for (auto& v : row) v = kTwoPi * rng.next_uniform();
    }
    swarm.velocities.resize(p);
    for (auto& row : swarm.velocities) {
        row.resize(n);
        for (auto& v : row) v = params.v_max0 * (2.0 * rng.next_uniform() - 1.0);
    }
    swarm.pbest_pos = swarm.positions;
    swarm.pbest_fit.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        swarm.pbest_fit[i] =
            evaluate_policy(swarm.positions[i], cfg, rng.substream(rng.next_u64())).holevo;
    std::size_t best = detail::argmin_index(swarm.pbest_fit);
    swarm.gbest_pos = swarm.pbest_pos[best];
    swarm.gbest_fit = swarm.pbest_fit[best];
    return swarm;
}

// Full swarm loop. Each generation first checks the dispersion stop, then
// (from the second generation on, once particles have actually moved)
// rescores every particle and folds improvements into pbest/gbest with
// strict-improvement comparisons, then moves every particle under the
// decayed clamp. Returns the entry-wise mean of the final positions; the
// swarm-best position and its recorded fitness ride along in best_member /
// best_fit.
inline TrainResult pso_train(const PsoParams& params, const EvalConfig& cfg, RngStream rng) {
    PsoSwarm swarm = pso_init(params, cfg.n_qubits, cfg, rng);
    const std::size_t p = swarm.positions.size();
    std::vector<double> current_fit = swarm.pbest_fit;
    auto make_row = [&]() {
        TrainTraceRow row;
        row.best_fit = swarm.gbest_fit;
        double sum = 0.0;
        for (double f : current_fit) sum += f;
        row.mean_fit = sum / static_cast<double>(p);
        row.conv_l = convergence_metric(swarm.positions);
        return row;
    };
    std::vector<TrainTraceRow> trace;
    trace.push_back(make_row());
    while (swarm.generation < params.max_generations) {
        if (trace.back().conv_l <= params.convergence_threshold) break;
        if (swarm.generation > 0) {
            std::vector<RngStream> eval_streams(p);
            for (std::size_t i = 0; i < p; ++i) eval_streams[i] = rng.substream(rng.next_u64());
            for (std::size_t i = 0; i < p; ++i)
                current_fit[i] = evaluate_policy(swarm.positions[i], cfg, eval_streams[i]).holevo;
            for (std::size_t i = 0; i < p; ++i) {
                if (current_fit[i] < swarm.pbest_fit[i]) {
                    swarm.pbest_fit[i] = current_fit[i];
                    swarm.pbest_pos[i] = swarm.positions[i];
                }
            }
            std::size_t best = detail::argmin_index(swarm.pbest_fit);
            if (swarm.pbest_fit[best] < swarm.gbest_fit) {
                swarm.gbest_fit = swarm.pbest_fit[best];
                swarm.gbest_pos = swarm.pbest_pos[best];
            }
        }
        double vmax = vmax_schedule(params.v_max0, swarm.generation, params.max_generations,
                                    params.v_max_floor_frac);
        for (std::size_t i = 0; i < p; ++i) {
            swarm.velocities[i] = pso_velocity_update(swarm, i, params, vmax, rng);
            swarm.positions[i] = pso_position_update(swarm.positions[i], swarm.velocities[i],
                                                     params.w);
        }
        swarm.generation += 1;
        trace.push_back(make_row());
    }
    TrainResult res = detail::finish_train(swarm.positions, current_fit, std::move(trace),
                                           swarm.generation, params.convergence_threshold);
    res.best_member = swarm.gbest_pos;
    res.best_fit = swarm.gbest_fit;
    return res;
}

} // namespace aqpe
