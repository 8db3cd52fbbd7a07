#pragma once

#include <cmath>

namespace aqpe {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

// Canonical representative of an angle in [0, 2*pi). All phase arithmetic in
// the library re-canonicalizes through this function so that equal angles
// modulo 2*pi compare equal (up to floating-point rounding of the reduction).
inline double canonical_phase(double r) {
    double v = std::fmod(r, kTwoPi);
    if (v < 0.0) v += kTwoPi;
    // fmod of a slightly-negative value can round the fixup to exactly 2*pi
    if (v >= kTwoPi) v = 0.0;
    return v;
}

// Signed residue in (-pi, pi]. Used when a phase difference is logged or fed
// into exp(i*delta); the complex exponential itself is unaffected by the
// branch choice.
inline double signed_residue(double r) {
    double v = canonical_phase(r);
    if (v > kPi) v -= kTwoPi;
    return v;
}

} // namespace aqpe
