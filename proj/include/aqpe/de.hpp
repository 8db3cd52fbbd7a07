#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aqpe/phase.hpp"
#include "aqpe/policy_eval.hpp"
#include "aqpe/rng.hpp"

namespace aqpe {

// Donor choice for the mutation step. Rand uses the printed five-vector rule
// u = x_r1 + F (x_r2 + x_r3 - x_r4 - x_r5). Best anchors the donor at the
// current best member with one difference pair: u = x_best + F (x_r2 - x_r3).
enum class MutationBase : std::uint8_t { Rand, Best };

// How out-of-interval mutants are brought back into [0, 2pi): wrapped around
// the circle, or clipped to the interval edges.
enum class BoundMode : std::uint8_t { Wrap, Clip };

struct DeParams {
    double amplification = 0.7;         // F
    double crossover = 0.8;             // C
    std::size_t population = 0;         // P; 0 means default_population(n)
    std::size_t max_generations = 100;  // G
    double convergence_threshold = 0.1256;
    MutationBase mutation_base = MutationBase::Rand;
    BoundMode bounds = BoundMode::Wrap;
};

// Population sizing rule: 20 + 2*floor(n/10) - 1.
inline std::size_t default_population(std::size_t n) {
    return 20 + 2 * (n / 10) - 1;
}

struct DePopulation {
    std::vector<std::vector<double>> members; // P rows of N entries in [0, 2pi)
    std::vector<double> fitness;              // most recent evaluation per row
    std::size_t generation = 0;
};

struct TrainTraceRow {
    double best_fit = 0.0;
    double mean_fit = 0.0;
    double conv_l = 0.0;
};

struct TrainResult {
    std::vector<double> policy;      // entry-wise mean of the final candidates
    std::vector<double> best_member; // best single candidate at stop time
    double best_fit = 0.0;
    std::vector<TrainTraceRow> trace; // one row for init plus one per generation
    std::size_t generations = 0;      // generations actually executed
    double terminal_l = 0.0;
    bool converged = false;
    std::vector<std::vector<double>> final_members;
};

namespace detail {

inline double constrain_entry(double v, BoundMode bounds) {
    if (bounds == BoundMode::Wrap) return canonical_phase(v);
    if (v < 0.0) return 0.0;
    if (v >= kTwoPi) return kTwoPi - 1e-12;
    return v;
}

// Draws an index in [0, p) distinct from every entry of `taken`.
inline std::size_t draw_distinct(std::size_t p, const std::size_t* taken, std::size_t n_taken,
                                 RngStream& rng) {
    for (;;) {
        std::size_t r = static_cast<std::size_t>(rng.next_below(p));
        bool clash = false;
        for (std::size_t t = 0; t < n_taken; ++t)
            if (taken[t] == r) { clash = true; break; }
        if (!clash) return r;
    }
}

inline std::size_t argmin_index(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[best]) best = i;
    return best;
}

} // namespace detail

// Mutation arithmetic with the donor indices supplied explicitly:
// u = x_{r[0]} + F * (x_{r[1]} + x_{r[2]} - x_{r[3]} - x_{r[4]}).
inline std::vector<double> de_mutant_from_partners(
    const std::vector<std::vector<double>>& members, const std::size_t r[5], double f,
    BoundMode bounds = BoundMode::Wrap) {
    const auto& a = members[r[0]];
    const auto& b = members[r[1]];
    const auto& c = members[r[2]];
    const auto& d = members[r[3]];
    const auto& e = members[r[4]];
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        out[j] = detail::constrain_entry(a[j] + f * (b[j] + c[j] - d[j] - e[j]), bounds);
    return out;
}

// Two-partner variant anchored at an explicit base row:
// u = x_base + F * (x_{r[0]} - x_{r[1]}).
inline std::vector<double> de_mutant_from_base(
    const std::vector<std::vector<double>>& members, std::size_t base, const std::size_t r[2],
    double f, BoundMode bounds = BoundMode::Wrap) {
    const auto& a = members[base];
    const auto& b = members[r[0]];
    const auto& c = members[r[1]];
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        out[j] = detail::constrain_entry(a[j] + f * (b[j] - c[j]), bounds);
    return out;
}

// Builds the mutant for member i. Rand mode draws five donor indices,
// distinct from each other and from i (needs P >= 6). Best mode anchors at
// the fittest member and draws two further donors distinct from each other,
// from i, and from the anchor (needs P >= 4).
inline std::vector<double> de_mutate(const DePopulation& pop, std::size_t i, double f,
                                     RngStream& rng,
                                     MutationBase mode = MutationBase::Rand,
                                     BoundMode bounds = BoundMode::Wrap) {
    const std::size_t p = pop.members.size();
    if (mode == MutationBase::Rand) {
        if (p < 6) throw std::domain_error("five-vector mutation needs population >= 6");
        std::size_t taken[6] = {i, 0, 0, 0, 0, 0};
        for (std::size_t t = 0; t < 5; ++t)
            taken[t + 1] = detail::draw_distinct(p, taken, t + 1, rng);
        return de_mutant_from_partners(pop.members, taken + 1, f, bounds);
    }
    if (p < 4) throw std::domain_error("best-anchored mutation needs population >= 4");
    std::size_t best = detail::argmin_index(pop.fitness);
    std::size_t taken[4] = {i, best, 0, 0};
    std::size_t n_taken = i == best ? 1 : 2;
    taken[1] = best; // harmless duplicate when i == best
    for (std::size_t t = 0; t < 2; ++t) {
        taken[n_taken + t] = detail::draw_distinct(p, taken, n_taken + t, rng);
    }
    return de_mutant_from_base(pop.members, best, taken + n_taken, f, bounds);
}

// Binomial crossover. One forced index is drawn per pairing, then each entry
// takes the mutant value when its own uniform draw is <= C or it is the
// forced index; consumes exactly N + 1 draws.
inline std::vector<double> de_crossover(const std::vector<double>& target,
                                        const std::vector<double>& mutant, double c,
                                        RngStream& rng) {
    if (target.size() != mutant.size())
        throw std::domain_error("crossover vectors must have equal length");
    const std::size_t n = target.size();
    std::size_t forced = static_cast<std::size_t>(rng.next_below(n));
    std::vector<double> trial(n);
    for (std::size_t j = 0; j < n; ++j) {
        double r1 = rng.next_uniform();
        trial[j] = (r1 <= c || j == forced) ? mutant[j] : target[j];
    }
    return trial;
}

// Greedy selection for a minimized objective; ties go to the trial. Returns
// the surviving vector and its fitness. The old fitness is the cached value;
// only the trial is (re-)evaluated.
inline std::pair<std::vector<double>, double> de_select(const std::vector<double>& old,
                                                        double old_fit,
                                                        const std::vector<double>& trial,
                                                        const EvalConfig& cfg,
                                                        RngStream& rng) {
    double trial_fit = evaluate_policy(trial, cfg, rng.substream(rng.next_u64())).holevo;
    if (old_fit >= trial_fit) return {trial, trial_fit};
    return {old, old_fit};
}

// Fresh population: every entry uniform in [0, 2pi), all members scored once.
inline DePopulation de_init(const DeParams& params, std::size_t n, const EvalConfig& cfg,
                            RngStream& rng) {
    std::size_t p = params.population == 0 ? default_population(n) : params.population;
    std::size_t min_p = params.mutation_base == MutationBase::Rand ? 6 : 4;
    if (p < min_p) throw std::domain_error("population too small for the mutation rule");
    DePopulation pop;
    pop.members.resize(p);
    for (auto& row : pop.members) {
        row.resize(n);
        for (auto& v : row) v = kTwoPi * rng.next_uniform();
    }
    pop.fitness.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        pop.fitness[i] = evaluate_policy(pop.members[i], cfg, rng.substream(rng.next_u64())).holevo;
    return pop;
}

namespace detail {

inline TrainTraceRow trace_row(const DePopulation& pop) {
    TrainTraceRow row;
    row.best_fit = pop.fitness[argmin_index(pop.fitness)];
    double sum = 0.0;
    for (double f : pop.fitness) sum += f;
    row.mean_fit = sum / static_cast<double>(pop.fitness.size());
    row.conv_l = convergence_metric(pop.members);
    return row;
}

inline TrainResult finish_train(const std::vector<std::vector<double>>& members,
                                const std::vector<double>& fitness,
                                std::vector<TrainTraceRow> trace, std::size_t generations,
                                double threshold) {
    TrainResult res;
    const std::size_t n = members[0].size();
    res.policy.assign(n, 0.0);
    for (const auto& row : members)
        for (std::size_t j = 0; j < n; ++j) res.policy[j] += row[j];
    for (std::size_t j = 0; j < n; ++j)
        res.policy[j] = canonical_phase(res.policy[j] / static_cast<double>(members.size()));
    std::size_t best = argmin_index(fitness);
    res.best_member = members[best];
    res.best_fit = fitness[best];
    res.trace = std::move(trace);
    res.generations = generations;
    res.terminal_l = convergence_metric(members);
    res.converged = res.terminal_l <= threshold;
    res.final_members = members;
    return res;
}

} // namespace detail

// Full training loop: mutate, crossover, and select every member per
// generation; stop as soon as the population dispersion L falls to the
// threshold (checked before each generation) or the generation budget is
// spent. The returned policy is the entry-wise mean of the final candidates;
// the best single candidate is reported alongside.
inline TrainResult de_train(const DeParams& params, const EvalConfig& cfg, RngStream rng) {
    DePopulation pop = de_init(params, cfg.n_qubits, cfg, rng);
    std::vector<TrainTraceRow> trace;
    trace.push_back(detail::trace_row(pop));
    const std::size_t p = pop.members.size();
    while (pop.generation < params.max_generations) {
        if (trace.back().conv_l <= params.convergence_threshold) break;
        std::vector<std::vector<double>> trials(p);
        std::vector<RngStream> eval_streams(p);
        for (std::size_t i = 0; i < p; ++i) {
            std::vector<double> mutant =
                de_mutate(pop, i, params.amplification, rng, params.mutation_base, params.bounds);
            trials[i] = de_crossover(pop.members[i], mutant, params.crossover, rng);
            eval_streams[i] = rng.substream(rng.next_u64());
        }
        for (std::size_t i = 0; i < p; ++i) {
            double trial_fit = evaluate_policy(trials[i], cfg, eval_streams[i]).holevo;
            if (pop.fitness[i] >= trial_fit) {
                pop.members[i] = std::move(trials[i]);
                pop.fitness[i] = trial_fit;
            }
        }
        pop.generation += 1;
        trace.push_back(detail::trace_row(pop));
    }
    return detail::finish_train(pop.members, pop.fitness, std::move(trace), pop.generation,
                                params.convergence_threshold);
}

} // namespace aqpe
