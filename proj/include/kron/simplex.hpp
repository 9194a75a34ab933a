#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kron/errors.hpp"

namespace kron {

// Pivot tolerance; zero for exact scalar types.
template <class Scalar>
struct lp_eps {
    static Scalar value() { return Scalar(0); }
};
template <>
struct lp_eps<double> {
    static double value() { return 1e-11; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class Scalar>
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Scalar objective{};
    std::vector<Scalar> x;      // primal solution when Optimal
    std::vector<Scalar> farkas; // y with yᵀA ≤ 0 and yᵀb > 0 when Infeasible
};

/// Minimize c·x subject to A x = b, x ≥ 0.
///
/// Two-phase tableau simplex with Bland's rule, so it terminates for
/// exact scalars and behaves on the small dense systems the polytope
/// queries produce. Infeasible systems come back with a Farkas
/// certificate, which membership tests turn into separating directions.
template <class Scalar>
class SimplexSolver {
public:
    SimplexSolver(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b)
        : rows_(a.size()), cols_(a.empty() ? 0 : a[0].size()) {
        for (const auto& row : a)
            if (row.size() != cols_)
                throw std::invalid_argument("simplex: ragged constraint matrix");
        if (b.size() != rows_)
            throw std::invalid_argument("simplex: rhs size mismatch");
        flipped_.assign(rows_, false);
        tableau_.assign(rows_, std::vector<Scalar>(cols_ + rows_ + 1, Scalar(0)));
        for (std::size_t i = 0; i < rows_; ++i) {
            bool flip = b[i] < Scalar(0);
            flipped_[i] = flip;
            for (std::size_t j = 0; j < cols_; ++j)
                tableau_[i][j] = flip ? -a[i][j] : a[i][j];
            tableau_[i][cols_ + i] = Scalar(1);
            tableau_[i].back() = flip ? -b[i] : b[i];
        }
        basis_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            basis_[i] = cols_ + i;
    }

    LpResult<Scalar> solve(const std::vector<Scalar>& c) {
        if (c.size() != cols_)
            throw std::invalid_argument("simplex: objective size mismatch");
        LpResult<Scalar> result;

        // Phase I: minimize the artificial sum.
        obj_.assign(cols_ + rows_ + 1, Scalar(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j <= cols_ + rows_; ++j)
                obj_[j] -= tableau_[i][j];
        for (std::size_t j = cols_; j < cols_ + rows_; ++j)
            obj_[j] += Scalar(1);
        iterate(cols_ + rows_);
        Scalar infeas = -obj_.back();
        if (infeas > lp_eps<Scalar>::value()) {
            result.status = LpStatus::Infeasible;
            result.farkas.assign(rows_, Scalar(0));
            for (std::size_t i = 0; i < rows_; ++i) {
                Scalar y = Scalar(1) - obj_[cols_ + i];
                result.farkas[i] = flipped_[i] ? -y : y;
            }
            return result;
        }

        // Pivot lingering artificials out; rows where no structural column
        // has a nonzero entry are redundant and can stay parked at zero.
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < cols_)
                continue;
            for (std::size_t j = 0; j < cols_; ++j) {
                Scalar v = tableau_[i][j];
                if (v > lp_eps<Scalar>::value() || -v > lp_eps<Scalar>::value()) {
                    pivot(i, j);
                    break;
                }
            }
        }

        // Phase II on the structural columns only.
        obj_.assign(cols_ + rows_ + 1, Scalar(0));
        for (std::size_t j = 0; j < cols_; ++j)
            obj_[j] = c[j];
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] >= cols_)
                continue;
            Scalar weight = c[basis_[i]];
            if (weight == Scalar(0))
                continue;
            for (std::size_t j = 0; j <= cols_ + rows_; ++j)
                obj_[j] -= weight * tableau_[i][j];
        }
        if (!iterate(cols_)) {
            result.status = LpStatus::Unbounded;
            return result;
        }

        result.status = LpStatus::Optimal;
        result.objective = -obj_.back();
        result.x.assign(cols_, Scalar(0));
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] < cols_)
                result.x[basis_[i]] = tableau_[i].back();
        return result;
    }

private:
    // Bland's rule: enter the lowest-index improving column, leave by the
    // lowest basis index among ratio ties. Returns false on unboundedness.
    bool iterate(std::size_t usable_cols) {
        const Scalar eps = lp_eps<Scalar>::value();
        while (true) {
            std::size_t entering = usable_cols;
            for (std::size_t j = 0; j < usable_cols; ++j) {
                if (obj_[j] < -eps) {
                    entering = j;
                    break;
                }
            }
            if (entering == usable_cols)
                return true;
            std::size_t leaving = rows_;
            Scalar best_num{}, best_den{};
            for (std::size_t i = 0; i < rows_; ++i) {
                if (tableau_[i][entering] <= eps)
                    continue;
                // compare rhs_i / t_i against the incumbent without dividing
                if (leaving == rows_ ||
                    tableau_[i].back() * best_den < best_num * tableau_[i][entering] ||
                    (tableau_[i].back() * best_den == best_num * tableau_[i][entering] &&
                     basis_[i] < basis_[leaving])) {
                    leaving = i;
                    best_num = tableau_[i].back();
                    best_den = tableau_[i][entering];
                }
            }
            if (leaving == rows_)
                return false;
            pivot(leaving, entering);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        Scalar inv = tableau_[row][col];
        for (auto& v : tableau_[row])
            v = v / inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row)
                continue;
            Scalar factor = tableau_[i][col];
            if (factor == Scalar(0))
                continue;
            for (std::size_t j = 0; j < tableau_[i].size(); ++j)
                tableau_[i][j] -= factor * tableau_[row][j];
        }
        Scalar factor = obj_[col];
        if (factor != Scalar(0))
            for (std::size_t j = 0; j < obj_.size(); ++j)
                obj_[j] -= factor * tableau_[row][j];
        basis_[row] = col;
    }

    std::size_t rows_, cols_;
    std::vector<std::vector<Scalar>> tableau_;
    std::vector<Scalar> obj_;
    std::vector<std::size_t> basis_;
    std::vector<bool> flipped_;
};

template <class Scalar>
LpResult<Scalar> solve_lp(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b,
                          const std::vector<Scalar>& c) {
    SimplexSolver<Scalar> solver(std::move(a), std::move(b));
    return solver.solve(c);
}

} // namespace kron
