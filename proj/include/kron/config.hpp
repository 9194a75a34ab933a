#pragma once

namespace kron {

/// Numeric tolerances for the floating-point layers. Exact-rational code
/// paths never consult these. Overridable via CLI --tol-* flags; set once
/// at startup, not meant to be mutated concurrently.
struct Tolerances {
    double spectrum_sum = 1e-12;  // |sum(probs) - 1| allowed in a Spectrum
    double normalization = 1e-10; // completeness of outcome probabilities
    double membership = 1e-9;     // feasibility slack for floating LP queries
    double hermiticity = 1e-12;   // density-operator validation
    double eig_clamp = 1e-10;     // eigenvalue round-off clamp threshold
    double pinsker_slack = 1e-12;
    double entropy_slack = 1e-12;
    double bound_slack = 1e-10;   // estimation-bound comparisons
    double containment = 0.02;    // sampled-triple distance to the hull
};

inline Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

} // namespace kron
