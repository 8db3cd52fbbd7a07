#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aqpe/phase.hpp"
#include "aqpe/sensor.hpp"

namespace aqpe {

// Unnormalized Fourier coefficients of the Bayesian posterior over the true
// phase, stored as the dense band k in [-depth, depth]. The convention is
// p[k] = (1/2pi) integral P(phi) exp(-i k phi) dphi, so the uniform prior is
// the single coefficient p[0] = 1/(2pi) and each measurement widens the band
// by one harmonic.
struct FourierPosterior {
    std::vector<std::complex<double>> coeffs; // index k + depth
    std::size_t depth = 0;

    std::complex<double> coeff(long long k) const {
        long long m = static_cast<long long>(depth);
        if (k < -m || k > m) return {0.0, 0.0};
        return coeffs[static_cast<std::size_t>(k + m)];
    }
};

struct MeasurementStep {
    int zeta = 0;
    double theta = 0.0;
    double nu = 1.0;
    QubitPrep prep = QubitPrep::Plus;
};

// Uniform prior on the circle.
inline FourierPosterior posterior_init() {
    FourierPosterior post;
    post.coeffs = {std::complex<double>(1.0 / kTwoPi, 0.0)};
    post.depth = 0;
    return post;
}

// Folds one measurement into the posterior with the three-term recurrence
// p'[k] = p[k]/2 + (s nu / 4) (exp(-i theta) p[k-1] + exp(+i theta) p[k+1]),
// where s = +1 for outcome 0 on a Plus preparation, and flips with either
// the outcome bit or a Minus preparation.
inline FourierPosterior posterior_update(const FourierPosterior& post,
                                         const MeasurementStep& step) {
    if (step.nu < 0.0 || step.nu > 1.0)
        throw std::domain_error("visibility nu must be in [0,1]");
    double s = step.zeta == 0 ? 1.0 : -1.0;
    if (step.prep == QubitPrep::Minus) s = -s;
    std::complex<double> em(std::cos(step.theta), -std::sin(step.theta));
    std::complex<double> ep = std::conj(em);
    std::complex<double> g = 0.25 * s * step.nu;
    long long m1 = static_cast<long long>(post.depth) + 1;
    FourierPosterior out;
    out.depth = post.depth + 1;
    out.coeffs.resize(static_cast<std::size_t>(2 * m1 + 1));
    for (long long k = -m1; k <= m1; ++k) {
        std::complex<double> v = 0.5 * post.coeff(k) +
                                 g * (em * post.coeff(k - 1) + ep * post.coeff(k + 1));
        out.coeffs[static_cast<std::size_t>(k + m1)] = v;
    }
    return out;
}

// Modulus of the normalized k = -1 coefficient, |p[-1]| / p[0]; equals the
// sharpness of the posterior and lies in [0, 1].
inline double posterior_sharpness(const FourierPosterior& post) {
    std::complex<double> z0 = post.coeff(0);
    if (std::abs(z0) == 0.0) throw std::domain_error("degenerate posterior: zero mass");
    return std::abs(post.coeff(-1)) / std::abs(z0);
}

// Circular mean of the posterior, the argument of the normalized k = -1
// coefficient, as a canonical phase. Undefined on a flat posterior.
inline double posterior_mean_phase(const FourierPosterior& post) {
    std::complex<double> z0 = post.coeff(0);
    if (std::abs(z0) == 0.0) throw std::domain_error("degenerate posterior: zero mass");
    std::complex<double> z = post.coeff(-1) / z0;
    if (std::abs(z) == 0.0) throw std::domain_error("posterior mean undefined: zero sharpness");
    return canonical_phase(std::arg(z));
}

// Normalized density at one point, reconstructed from the band; the
// imaginary part cancels by Hermitian symmetry and is discarded.
inline double posterior_density(const FourierPosterior& post, double phi) {
    std::complex<double> z0 = post.coeff(0);
    if (std::abs(z0) == 0.0) throw std::domain_error("degenerate posterior: zero mass");
    long long m = static_cast<long long>(post.depth);
    std::complex<double> sum(0.0, 0.0);
    for (long long k = -m; k <= m; ++k) {
        std::complex<double> e(std::cos(k * phi), std::sin(k * phi));
        sum += post.coeff(k) * e;
    }
    return (sum / (kTwoPi * z0)).real();
}

// Largest pointwise gap, over a uniform grid, between the recurrence-built
// posterior density and the directly normalized product of per-measurement
// likelihoods. Both densities are band-limited trigonometric polynomials, so
// the uniform-grid quadrature used for the direct normalization is exact up
// to round-off well below the comparison tolerance.
inline double posterior_quadrature_supnorm(const std::vector<MeasurementStep>& steps,
                                           std::size_t grid_points = 10000) {
    if (grid_points < 2) throw std::domain_error("grid_points must be >= 2");
    FourierPosterior post = posterior_init();
    for (const auto& s : steps) post = posterior_update(post, s);
    std::vector<double> direct(grid_points);
    double integral = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
        double phi = kTwoPi * (static_cast<double>(g) / static_cast<double>(grid_points));
        double f = 1.0 / kTwoPi;
        for (const auto& s : steps)
            f *= measurement_probability(s.prep, phi - s.theta, s.nu, s.zeta);
        direct[g] = f;
        integral += f;
    }
    integral *= kTwoPi / static_cast<double>(grid_points);
    if (integral <= 0.0) throw std::domain_error("zero-probability measurement sequence");
    double sup = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
        double phi = kTwoPi * (static_cast<double>(g) / static_cast<double>(grid_points));
        double gap = std::abs(direct[g] / integral - posterior_density(post, phi));
        if (gap > sup) sup = gap;
    }
    return sup;
}

namespace detail {

// Depth-first walk over the 2^N outcome tree for one true phase: at each
// node the outcome-0 branch carries probability (1 + nu cos(phi - theta))/2
// and steps the control by +x, the other branch by -x. Accumulates the exact
// expectation of exp(i (phi - theta_N)). Preparations are marginalized
// analytically: the bit fed to the controller has the Plus-outcome law for
// either preparation, so the walk is preparation-independent.
inline std::complex<double> exact_phasor_for_phi(double phi, const double* x, std::size_t n,
                                                 double nu) {
    std::complex<double> acc(0.0, 0.0);
    struct Frame {
        double theta;
        double prob;
        std::size_t m;
        int next_branch;
    };
    std::vector<Frame> stack;
    stack.reserve(n + 1);
    stack.push_back({0.0, 1.0, 0, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.m == n) {
            double d = phi - f.theta;
            acc += f.prob * std::complex<double>(std::cos(d), std::sin(d));
            stack.pop_back();
            continue;
        }
        if (f.next_branch > 1) {
            stack.pop_back();
            continue;
        }
        int b = f.next_branch;
        f.next_branch += 1;
        double p0 = 0.5 * (1.0 + nu * std::cos(phi - f.theta));
        double pb = b == 0 ? p0 : 1.0 - p0;
        if (pb == 0.0) continue;
        double theta_next = canonical_phase(b == 0 ? f.theta + x[f.m] : f.theta - x[f.m]);
        stack.push_back({theta_next, f.prob * pb, f.m + 1, 0});
    }
    return acc;
}

} // namespace detail

// Exact variance of a policy under uniform true phases: the outcome tree is
// enumerated per phase on a uniform grid (spectrally accurate for this
// smooth periodic integrand) and the grand phasor mean is inverted to a
// variance. Only the noiseless-control channel admits this discrete tree.
inline double exact_policy_variance(const std::vector<double>& policy,
                                    const DecoherenceModel& deco,
                                    const NoiseChannel& channel = NoiseChannel::none(),
                                    std::size_t grid_points = 720) {
    const std::size_t n = policy.size();
    if (n < 1) throw std::domain_error("policy must have at least one increment");
    if (n > 12) throw std::domain_error("exact enumeration capped at 12 qubits");
    if (channel.kind != NoiseChannel::Kind::None)
        throw std::domain_error("exact enumeration supports only the noise-free channel");
    if (grid_points < 1) throw std::domain_error("grid_points must be >= 1");
    std::vector<double> cs(grid_points), sn(grid_points);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(grid_points); ++idx) {
        auto g = static_cast<std::size_t>(idx);
        double phi = kTwoPi * (static_cast<double>(g) / static_cast<double>(grid_points));
        std::complex<double> z =
            detail::exact_phasor_for_phi(phi, policy.data(), n, deco.nu);
        cs[g] = z.real();
        sn[g] = z.imag();
    }
    double c = 0.0, s = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
        c += cs[g];
        s += sn[g];
    }
    c /= static_cast<double>(grid_points);
    s /= static_cast<double>(grid_points);
    double mod = std::sqrt(c * c + s * s);
    if (mod == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (mod * mod) - 1.0;
}

// Literal preparation enumeration: every qubit branches over both
// preparations (weight 1/2 each) and both raw outcomes, the controller
// consuming the preparation-referenced bit. Exponentially heavier (4^N
// paths); exists to witness that it matches the analytic marginalization.
inline double exact_policy_variance_enumerated_preps(const std::vector<double>& policy,
                                                     const DecoherenceModel& deco,
                                                     std::size_t grid_points = 720) {
    const std::size_t n = policy.size();
    if (n < 1) throw std::domain_error("policy must have at least one increment");
    if (n > 8) throw std::domain_error("literal preparation enumeration capped at 8 qubits");
    if (grid_points < 1) throw std::domain_error("grid_points must be >= 1");
    std::vector<double> cs(grid_points), sn(grid_points);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(grid_points); ++idx) {
        auto g = static_cast<std::size_t>(idx);
        double phi = kTwoPi * (static_cast<double>(g) / static_cast<double>(grid_points));
        // four branches per level: (prep, zeta) pairs
        std::complex<double> acc(0.0, 0.0);
        struct Frame {
            double theta;
            double prob;
            std::size_t m;
            int next_branch;
        };
        std::vector<Frame> stack;
        stack.push_back({0.0, 1.0, 0, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.m == n) {
                double d = phi - f.theta;
                acc += f.prob * std::complex<double>(std::cos(d), std::sin(d));
                stack.pop_back();
                continue;
            }
            if (f.next_branch > 3) {
                stack.pop_back();
                continue;
            }
            int br = f.next_branch;
            f.next_branch += 1;
            QubitPrep prep = (br & 2) == 0 ? QubitPrep::Plus : QubitPrep::Minus;
            int zeta = br & 1;
            double pz = measurement_probability(prep, phi - f.theta, deco.nu, zeta);
            if (pz == 0.0) continue;
            int fed = prep == QubitPrep::Plus ? zeta : 1 - zeta;
            double theta_next =
                canonical_phase(fed == 0 ? f.theta + policy[f.m] : f.theta - policy[f.m]);
            stack.push_back({theta_next, f.prob * 0.5 * pz, f.m + 1, 0});
        }
        cs[g] = acc.real();
        sn[g] = acc.imag();
    }
    double c = 0.0, s = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
        c += cs[g];
        s += sn[g];
    }
    c /= static_cast<double>(grid_points);
    s /= static_cast<double>(grid_points);
    double mod = std::sqrt(c * c + s * s);
    if (mod == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (mod * mod) - 1.0;
}

} // namespace aqpe
