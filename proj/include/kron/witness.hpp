#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kron/density.hpp"
#include "kron/estimation.hpp"
#include "kron/random.hpp"

namespace kron {

struct WitnessResult {
    DensityOperator rho;
    double error = 0; // sum of the three L1 spectral distances
    int restarts_used = 0;
};

namespace detail {

/// ρ^{AB} from an unnormalized purification matrix M: M M† / Tr(M M†).
/// PSD and unit trace are automatic, so the search is unconstrained. The
/// environment has one dimension per nonzero target joint eigenvalue,
/// which pins the rank of every candidate.
inline DensityOperator state_from_params(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd rho = m * m.adjoint();
    double tr = rho.trace().real();
    rho /= tr;
    return {std::move(rho)};
}

inline double witness_error(const DensityOperator& rho, int m, int n,
                            const std::vector<double>& ta, const std::vector<double>& tb,
                            const std::vector<double>& tab) {
    SpectralTriple st = spectral_triple(rho, m, n);
    return l1_distance(st.rA.probs(), ta) + l1_distance(st.rB.probs(), tb) +
           l1_distance(st.rAB.probs(), tab);
}

/// Diagonal starting point: place the nonzero joint eigenvalues on the
/// product-basis grid so the induced row/column sums match the target
/// marginals as closely as possible. Many diagram-derived targets are
/// realized exactly by such a classical state.
inline Eigen::MatrixXcd classical_init(int m, int n, const std::vector<double>& ta,
                                       const std::vector<double>& tb,
                                       const std::vector<double>& tab_nz, Rng& rng) {
    const int d = m * n;
    const int r = static_cast<int>(tab_nz.size());
    std::vector<int> best_slots(tab_nz.size());
    double best_err = std::numeric_limits<double>::infinity();
    auto consider = [&](const std::vector<int>& perm) {
        std::vector<double> ra(static_cast<std::size_t>(m), 0.0);
        std::vector<double> rb(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < r; ++j) {
            ra[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)] / n)] += tab_nz[static_cast<std::size_t>(j)];
            rb[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)] % n)] += tab_nz[static_cast<std::size_t>(j)];
        }
        std::sort(ra.begin(), ra.end(), std::greater<>());
        std::sort(rb.begin(), rb.end(), std::greater<>());
        double e = l1_distance(ra, ta) + l1_distance(rb, tb);
        if (e < best_err) {
            best_err = e;
            std::copy(perm.begin(), perm.begin() + r, best_slots.begin());
        }
    };
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    if (d <= 8) {
        do {
            consider(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        consider(perm);
        for (int trial = 0; trial < 512; ++trial) {
            for (int i = d - 1; i > 0; --i)
                std::swap(perm[static_cast<std::size_t>(i)],
                          perm[static_cast<std::size_t>(rng.uniform() * (i + 1))]);
            consider(perm);
        }
    }
    Eigen::MatrixXcd params = Eigen::MatrixXcd::Zero(d, r);
    for (int j = 0; j < r; ++j)
        params(best_slots[static_cast<std::size_t>(j)], j) =
            std::sqrt(tab_nz[static_cast<std::size_t>(j)]);
    return params;
}

/// Cyclic pattern search over the real and imaginary parts, with a fixed
/// evaluation budget. Cheap way to grind out the last digits once the
/// stochastic stage has found the right basin.
inline double polish_params(Eigen::MatrixXcd& params, int m, int n,
                            const std::vector<double>& ta, const std::vector<double>& tb,
                            const std::vector<double>& tab, double err, double stop,
                            int max_evals) {
    const int d = static_cast<int>(params.rows());
    const int r = static_cast<int>(params.cols());
    double step = 0.02;
    int evals = 0;
    while (step > 1e-13 && err > stop && evals < max_evals) {
        bool improved = false;
        for (int i = 0; i < d && evals < max_evals; ++i)
            for (int j = 0; j < r && evals < max_evals; ++j)
                for (int part = 0; part < 2; ++part)
                    for (double sign : {1.0, -1.0}) {
                        Eigen::MatrixXcd prop = params;
                        prop(i, j) += part == 0 ? std::complex<double>(sign * step, 0)
                                                : std::complex<double>(0, sign * step);
                        double ce = witness_error(state_from_params(prop), m, n, ta, tb, tab);
                        ++evals;
                        if (ce < err) {
                            params = std::move(prop);
                            err = ce;
                            improved = true;
                            break;
                        }
                    }
        if (!improved)
            step *= 0.5;
    }
    return err;
}

} // namespace detail

/// Randomized local search for a density operator whose spectral triple
/// matches the target. The first restart starts from the best diagonal
/// arrangement of the target joint spectrum; later restarts draw random
/// purifications and hill-climb with adaptive Gaussian moves, odd ones
/// also proposing a projection onto the exact target joint spectrum.
/// Returns the best state found; no optimality guarantee.
inline WitnessResult find_witness_state(const SpectralTriple& target, int m, int n,
                                        int iterations, std::uint64_t seed, int restarts = 200,
                                        double stop_error = 1e-8) {
    if (target.rA.dim() != m || target.rB.dim() != n || target.rAB.dim() != m * n)
        throw std::invalid_argument("find_witness_state: target lengths must be (m, n, m*n)");
    if (iterations < 1 || restarts < 1)
        throw std::invalid_argument("find_witness_state: iterations and restarts must be positive");
    const int d = m * n;
    const std::vector<double>& ta = target.rA.probs();
    const std::vector<double>& tb = target.rB.probs();
    const std::vector<double>& tab = target.rAB.probs();
    int rank = 0;
    for (double v : tab)
        if (v > 0)
            ++rank;
    const std::vector<double> tab_nz(tab.begin(), tab.begin() + rank);

    WitnessResult best;
    best.error = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < restarts && best.error > stop_error; ++restart) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
        Eigen::MatrixXcd params(d, rank);
        if (restart == 0) {
            params = detail::classical_init(m, n, ta, tb, tab_nz, rng);
        } else {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < rank; ++j)
                    params(i, j) = rng.complex_normal();
        }
        const bool use_projection = restart % 2 == 1;
        double err = detail::witness_error(detail::state_from_params(params), m, n, ta, tb, tab);
        double step = 0.5;
        int fails = 0;
        for (int it = 0; it < iterations && err > stop_error; ++it) {
            Eigen::MatrixXcd prop = params;
            const bool project = use_projection && it % 16 == 15;
            if (project) {
                // keep the eigenbasis, impose the exact target joint spectrum
                Eigen::MatrixXcd cur = prop * prop.adjoint();
                cur /= cur.trace().real();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cur);
                prop.setZero();
                for (int j = 0; j < rank; ++j)
                    prop.col(j) = es.eigenvectors().col(d - 1 - j) *
                                  std::sqrt(tab_nz[static_cast<std::size_t>(j)]);
            } else if (it % 2 == 0) {
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < rank; ++j)
                        prop(i, j) += step * rng.complex_normal();
            } else {
                int i = std::min(static_cast<int>(rng.uniform() * d), d - 1);
                int j = std::min(static_cast<int>(rng.uniform() * rank), rank - 1);
                prop(i, j) += step * rng.complex_normal();
            }
            double ce = detail::witness_error(detail::state_from_params(prop), m, n, ta, tb, tab);
            if (ce < err) {
                params = std::move(prop);
                err = ce;
                if (!project) {
                    step *= 1.5;
                    fails = 0;
                }
            } else if (!project && ++fails >= 10) {
                step *= 0.5;
                fails = 0;
                if (step < 1e-10)
                    break;
            }
        }
        if (err < best.error)
            err = detail::polish_params(params, m, n, ta, tb, tab, err, stop_error, 6000);
        if (err < best.error) {
            best.rho = detail::state_from_params(params);
            best.error = err;
            best.restarts_used = restart + 1;
        }
    }
    return best;
}

} // namespace kron
