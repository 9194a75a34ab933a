#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kron/config.hpp"
#include "kron/partition.hpp"
#include "kron/schur.hpp"

namespace kron {

inline double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l1_distance: length mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::abs(a[i] - b[i]);
    return s;
}

/// Kullback-Leibler divergence Σ p_i ln(p_i/q_i), with 0·ln(0/·) = 0 and
/// +∞ whenever some p_i > 0 has q_i = 0.
inline double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("kl_divergence: length mismatch");
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0)
            continue;
        if (q[i] <= 0)
            return std::numeric_limits<double>::infinity();
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}

inline double kl_divergence(const Spectrum& p, const Spectrum& q) {
    return kl_divergence(p.probs(), q.probs());
}

/// ‖p−q‖₁²/2 ≤ D(p‖q) must hold for every pair of distributions; a false
/// return is a falsification event for the caller.
inline bool check_pinsker(const std::vector<double>& p, const std::vector<double>& q) {
    double lhs = l1_distance(p, q);
    lhs = lhs * lhs / 2.0;
    double rhs = kl_divergence(p, q);
    return lhs <= rhs + tolerances().pinsker_slack;
}

inline bool check_pinsker(const Spectrum& p, const Spectrum& q) {
    return check_pinsker(p.probs(), q.probs());
}

/// Normalized rows of λ padded with zeros to length d.
inline std::vector<double> normalized_rows(const Partition& lambda, int d) {
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    double k = static_cast<double>(lambda.size());
    for (int i = 0; i < lambda.length(); ++i)
        out[static_cast<std::size_t>(i)] = lambda.rows()[static_cast<std::size_t>(i)] / k;
    return out;
}

/// Upper bound (k+1)^{d(d-1)/2} · exp(−k·D(λ̄‖r)) on the probability of
/// observing block label λ on k copies of a state with spectrum r.
/// Infinite divergence makes the bound exactly zero.
inline double estimation_bound(const Partition& lambda, const Spectrum& r, long long k) {
    if (lambda.size() != k)
        throw std::invalid_argument("estimation_bound: |lambda| != k");
    int d = r.dim();
    if (lambda.length() > d)
        throw std::invalid_argument("estimation_bound: lambda has more rows than spectrum entries");
    double div = kl_divergence(normalized_rows(lambda, d), r.probs());
    if (std::isinf(div))
        return 0.0;
    double exponent = static_cast<double>(d) * (d - 1) / 2.0;
    return std::pow(static_cast<double>(k + 1), exponent) * std::exp(-static_cast<double>(k) * div);
}

struct ConvergenceRow {
    long long k = 0;
    Partition lambda_star;
    double l1 = 0; // ‖normalized argmax − r‖₁
    double prob = 0;
    double bound = 0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double fitted_c = 0; // smallest c with l1 ≤ c/√k over all rows
};

/// For each k, the most likely block label λ* = argmax over Par(k,d) of
/// the outcome probability, its L1 distance to r, and the bound value.
/// Ties resolve to the canonically first diagram.
inline ConvergenceResult estimation_convergence(const Spectrum& r,
                                                const std::vector<long long>& ks) {
    ConvergenceResult out;
    int d = r.dim();
    for (long long k : ks) {
        if (k < 1)
            throw std::invalid_argument("estimation_convergence: k must be positive");
        ConvergenceRow row;
        row.k = k;
        row.prob = -1;
        for (const Partition& lambda : enumerate_partitions(k, d)) {
            double p = schur_weyl_prob(lambda, r, k);
            if (p > row.prob) {
                row.prob = p;
                row.lambda_star = lambda;
            }
        }
        row.l1 = l1_distance(normalized_rows(row.lambda_star, d), r.probs());
        row.bound = estimation_bound(row.lambda_star, r, k);
        out.fitted_c = std::max(out.fitted_c, row.l1 * std::sqrt(static_cast<double>(k)));
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace kron
