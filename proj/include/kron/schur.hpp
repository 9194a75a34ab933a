#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kron/characters.hpp"
#include "kron/config.hpp"
#include "kron/partition.hpp"

namespace kron {

/// Probability vector sorted weakly decreasing; the sum must be 1 within
/// tolerances().spectrum_sum.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty())
            throw std::invalid_argument("spectrum must be nonempty");
        double sum = 0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            if (probs_[i] < 0)
                throw std::invalid_argument("spectrum entries must be nonnegative");
            if (i + 1 < probs_.size() && probs_[i] < probs_[i + 1])
                throw std::invalid_argument("spectrum must be sorted decreasing");
            sum += probs_[i];
        }
        if (std::abs(sum - 1.0) > tolerances().spectrum_sum)
            throw std::invalid_argument("spectrum does not sum to 1");
    }

    static Spectrum uniform(int d) {
        return Spectrum(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
    }

    /// Point distribution (1, 0, ..., 0).
    static Spectrum pure(int d) {
        std::vector<double> p(static_cast<std::size_t>(d), 0.0);
        p[0] = 1.0;
        return Spectrum(std::move(p));
    }

    const std::vector<double>& probs() const { return probs_; }
    int dim() const { return static_cast<int>(probs_.size()); }
    double operator[](std::size_t i) const { return probs_[i]; }

private:
    std::vector<double> probs_;
};

namespace detail {

template <class Scalar>
Scalar pow_nonneg(const Scalar& x, int e) {
    Scalar r(1);
    for (int i = 0; i < e; ++i)
        r = r * x;
    return r;
}

// Branching over the last variable:
//   s_λ(x_1..x_m) = Σ_{μ ≺ λ} x_m^{|λ|-|μ|} s_μ(x_1..x_{m-1}),
// μ ranging over diagrams interlacing λ (μ_{i+1} ≤ λ_{i+1} ≤ μ_i ≤ λ_i).
// Every intermediate term is nonnegative for nonnegative inputs, which is
// why this beats determinant evaluation for probability work.
template <class Scalar>
Scalar schur_rec(const Partition& shape, int m, const std::vector<Scalar>& x,
                 std::map<std::pair<Partition, int>, Scalar>& memo) {
    if (shape.empty())
        return Scalar(1);
    if (m == 0)
        return Scalar(0);
    if (m == 1)
        return shape.length() <= 1 ? pow_nonneg(x[0], shape.rows()[0]) : Scalar(0);
    auto key = std::make_pair(shape, m);
    if (auto it = memo.find(key); it != memo.end())
        return it->second;
    Scalar total(0);
    int d = shape.length();
    std::vector<int> mu(static_cast<std::size_t>(d));
    // odometer over μ_i in [λ_{i+1}, λ_i]; interlacing keeps μ decreasing
    for (int i = 0; i < d; ++i)
        mu[static_cast<std::size_t>(i)] = shape.row(static_cast<std::size_t>(i) + 1);
    while (true) {
        long long stripped = shape.size();
        for (int v : mu)
            stripped -= v;
        total = total + pow_nonneg(x[static_cast<std::size_t>(m - 1)], static_cast<int>(stripped)) *
                            schur_rec(Partition(mu), m - 1, x, memo);
        int i = d - 1;
        while (i >= 0 && mu[static_cast<std::size_t>(i)] == shape.rows()[static_cast<std::size_t>(i)])
            --i;
        if (i < 0)
            break;
        ++mu[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < d; ++j)
            mu[static_cast<std::size_t>(j)] = shape.row(static_cast<std::size_t>(j) + 1);
    }
    memo.emplace(std::move(key), total);
    return total;
}

} // namespace detail

/// Schur polynomial s_λ(x) for nonnegative inputs; zero when λ has more
/// rows than there are variables. Works over double or exact Rational.
template <class Scalar>
Scalar schur_poly(const Partition& lambda, const std::vector<Scalar>& x) {
    if (x.empty())
        throw std::invalid_argument("schur_poly: needs at least one variable");
    for (const Scalar& v : x)
        if (v < Scalar(0))
            throw std::invalid_argument("schur_poly: negative entries not supported");
    if (lambda.length() > static_cast<int>(x.size()))
        return Scalar(0);
    std::map<std::pair<Partition, int>, Scalar> memo;
    return detail::schur_rec(lambda, static_cast<int>(x.size()), x, memo);
}

inline double schur_poly(const Partition& lambda, const Spectrum& x) {
    return schur_poly(lambda, x.probs());
}

/// Probability of observing block label λ when measuring k copies of a
/// state with spectrum r: dim V_λ · s_λ(r). Summed over all λ with at
/// most dim(r) rows this is 1.
inline double schur_weyl_prob(const Partition& lambda, const Spectrum& r, long long k) {
    if (lambda.size() != k)
        throw std::invalid_argument("schur_weyl_prob: |lambda| != k");
    if (lambda.length() > r.dim())
        return 0.0;
    return to_double(dim_sk(lambda)) * schur_poly(lambda, r);
}

} // namespace kron
