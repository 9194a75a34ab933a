#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kron/config.hpp"
#include "kron/errors.hpp"
#include "kron/random.hpp"
#include "kron/schur.hpp"

namespace kron {

/// Hermitian, positive semidefinite, unit-trace operator.
struct DensityOperator {
    Eigen::MatrixXcd mat;

    int dim() const { return static_cast<int>(mat.rows()); }

    void validate() const {
        const Tolerances& tol = tolerances();
        if (mat.rows() != mat.cols() || mat.rows() < 1)
            throw std::invalid_argument("density operator must be square and nonempty");
        if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity)
            throw std::invalid_argument("density operator not Hermitian");
        if (std::abs(mat.trace().real() - 1.0) > tol.hermiticity ||
            std::abs(mat.trace().imag()) > tol.hermiticity)
            throw std::invalid_argument("density operator trace != 1");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw consistency_error("eigensolver failed during validation");
        if (solver.eigenvalues().minCoeff() < -tol.eig_clamp)
            throw std::invalid_argument("density operator has a negative eigenvalue");
    }
};

struct PureState {
    Eigen::VectorXcd amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }

    void validate() const {
        if (amplitudes.size() < 1)
            throw std::invalid_argument("pure state must be nonempty");
        if (std::abs(amplitudes.squaredNorm() - 1.0) > tolerances().spectrum_sum)
            throw std::invalid_argument("pure state not normalized");
    }
};

struct SpectralTriple {
    Spectrum rA, rB, rAB;
};

enum class Side { A, B };

/// Hilbert-Schmidt-measure sample G·G†/Tr(G·G†) with G a d×d matrix of
/// independent standard complex Gaussians; deterministic per seed.
inline DensityOperator random_density(int d, std::uint64_t seed) {
    if (d < 1)
        throw std::invalid_argument("random_density: dimension must be positive");
    Rng rng(seed);
    Eigen::MatrixXcd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            g(i, j) = rng.complex_normal();
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return {std::move(rho)};
}

/// Marginal on factor A (m×m) or B (n×n) of an operator on C^m ⊗ C^n.
inline DensityOperator partial_trace(const DensityOperator& rho, Side side, int m, int n) {
    if (rho.dim() != m * n)
        throw std::invalid_argument("partial_trace: dimension mismatch");
    if (side == Side::A) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
        for (int a = 0; a < m; ++a)
            for (int a2 = 0; a2 < m; ++a2)
                for (int b = 0; b < n; ++b)
                    out(a, a2) += rho.mat(a * n + b, a2 * n + b);
        return {std::move(out)};
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int b2 = 0; b2 < n; ++b2)
            for (int a = 0; a < m; ++a)
                out(b, b2) += rho.mat(a * n + b, a * n + b2);
    return {std::move(out)};
}

/// Eigenvalues sorted decreasing; round-off negatives are clamped to zero
/// and the vector renormalized before Spectrum validation.
inline Spectrum spectrum_of(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.mat, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw consistency_error("eigensolver failed");
    std::vector<double> vals(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    double sum = 0;
    for (double& v : vals) {
        if (v < 0) {
            if (v < -tolerances().eig_clamp)
                throw consistency_error("eigenvalue below clamp threshold");
            v = 0;
        }
        sum += v;
    }
    for (double& v : vals)
        v /= sum;
    return Spectrum(std::move(vals));
}

inline SpectralTriple spectral_triple(const DensityOperator& rho, int m, int n) {
    if (rho.dim() != m * n)
        throw std::invalid_argument("spectral_triple: dimension mismatch");
    return {spectrum_of(partial_trace(rho, Side::A, m, n)),
            spectrum_of(partial_trace(rho, Side::B, m, n)), spectrum_of(rho)};
}

/// Purification |ψ⟩ = Σ √p_i |u_i⟩ ⊗ |e_i⟩ on C^d ⊗ C^d. The first-factor
/// marginal reproduces ρ; the environment marginal shares its spectrum.
inline PureState purify(const DensityOperator& rho) {
    int d = rho.dim();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.mat);
    if (solver.info() != Eigen::Success)
        throw consistency_error("eigensolver failed during purification");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
    for (int i = 0; i < d; ++i) {
        double p = std::max(0.0, solver.eigenvalues()(i));
        double amp = std::sqrt(p);
        for (int a = 0; a < d; ++a)
            psi(a * d + i) += amp * solver.eigenvectors()(a, i);
    }
    psi /= psi.norm();
    return {std::move(psi)};
}

inline DensityOperator pure_density(const PureState& psi) {
    Eigen::MatrixXcd mat = psi.amplitudes * psi.amplitudes.adjoint();
    return {std::move(mat)};
}

} // namespace kron
