#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kron/characters.hpp"
#include "kron/config.hpp"
#include "kron/errors.hpp"
#include "kron/partition.hpp"
#include "kron/random.hpp"
#include "kron/rational.hpp"

namespace kron {

/// Triple of equal-size diagrams with its coefficient g.
struct KronTriple {
    Partition mu, nu, lambda;
    Int g;

    bool operator==(const KronTriple& o) const {
        return mu == o.mu && nu == o.nu && lambda == o.lambda;
    }
};

inline std::string to_string(const KronTriple& t) {
    return "(" + to_string(t.mu) + " | " + to_string(t.nu) + " | " + to_string(t.lambda) +
           ", g=" + t.g.str() + ")";
}

/// Row bounds for the three diagrams. The λ bound defaults to m·n, the
/// natural value for the bipartite reading, but stays a free parameter.
struct KronBounds {
    int m = 2;
    int n = 2;
    int mn_bound = 4;
};

/// Nonzero triples collected within row bounds up to a box budget.
struct KronSet {
    KronBounds bounds;
    long long max_boxes = 0;
    std::vector<KronTriple> triples; // canonical order: μ, then ν, then λ
};

/// Shared memo of computed coefficients, keyed by the triple itself.
class KronCache {
public:
    bool lookup(const Partition& mu, const Partition& nu, const Partition& lambda, Int& out) const {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(Key{mu, nu, lambda});
        if (it == memo_.end())
            return false;
        out = it->second;
        return true;
    }

    void insert(const Partition& mu, const Partition& nu, const Partition& lambda, const Int& g) {
        std::unique_lock lock(mutex_);
        memo_.emplace(Key{mu, nu, lambda}, g);
    }

    std::vector<std::tuple<Partition, Partition, Partition, Int>> snapshot() const {
        std::shared_lock lock(mutex_);
        std::vector<std::tuple<Partition, Partition, Partition, Int>> out;
        out.reserve(memo_.size());
        for (const auto& [key, value] : memo_)
            out.emplace_back(key.mu, key.nu, key.lambda, value);
        return out;
    }

    std::size_t entries() const {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }

    void clear() {
        std::unique_lock lock(mutex_);
        memo_.clear();
    }

private:
    struct Key {
        Partition mu, nu, lambda;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            PartitionHash h;
            std::size_t v = h(k.mu);
            v = v * 0x9e3779b97f4a7c15ull + h(k.nu);
            v = v * 0x9e3779b97f4a7c15ull + h(k.lambda);
            return v;
        }
    };
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, Int, KeyHash> memo_;
};

inline KronCache& kron_cache() {
    static KronCache cache;
    return cache;
}

/// g_{μνλ} as the class-weighted character average
///   (1/k!) Σ_C |C| χ_μ(C) χ_ν(C) χ_λ(C).
/// The division must come out exact; anything else means a character bug.
inline Int kronecker_coefficient(const Partition& mu, const Partition& nu,
                                 const Partition& lambda) {
    if (mu.size() != nu.size() || mu.size() != lambda.size())
        throw std::invalid_argument("kronecker_coefficient: sizes differ");
    Int cached;
    if (kron_cache().lookup(mu, nu, lambda, cached))
        return cached;
    long long k = mu.size();
    Int sum = 0;
    CharacterCache& chi = character_cache();
    for (const CycleType& cls : conjugacy_classes(k))
        sum += cls.class_size * chi.character(mu, cls.cycles) * chi.character(nu, cls.cycles) *
               chi.character(lambda, cls.cycles);
    Int g, rem;
    divide_qr(sum, factorial(k), g, rem);
    if (rem != 0)
        throw consistency_error("kronecker_coefficient: character sum not divisible by k!");
    if (g < 0)
        throw consistency_error("kronecker_coefficient: negative coefficient");
    kron_cache().insert(mu, nu, lambda, g);
    return g;
}

/// All triples of size exactly k within the row bounds with g > 0, in
/// canonical order. Coefficients are evaluated in parallel; the result
/// does not depend on the thread count.
inline KronSet enumerate_kron(long long k, const KronBounds& bounds, unsigned threads = 1) {
    if (k < 0)
        throw std::invalid_argument("enumerate_kron: negative box count");
    KronSet set{bounds, k, {}};
    if (k == 0)
        return set;
    std::vector<Partition> mus = enumerate_partitions(k, bounds.m);
    std::vector<Partition> nus = enumerate_partitions(k, bounds.n);
    std::vector<Partition> lambdas = enumerate_partitions(k, bounds.mn_bound);
    std::size_t total = mus.size() * nus.size() * lambdas.size();
    std::vector<Int> g(total);
    parallel_for(total, threads, [&](std::size_t idx) {
        std::size_t li = idx % lambdas.size();
        std::size_t ni = (idx / lambdas.size()) % nus.size();
        std::size_t mi = idx / (lambdas.size() * nus.size());
        g[idx] = kronecker_coefficient(mus[mi], nus[ni], lambdas[li]);
    });
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (g[idx] == 0)
            continue;
        std::size_t li = idx % lambdas.size();
        std::size_t ni = (idx / lambdas.size()) % nus.size();
        std::size_t mi = idx / (lambdas.size() * nus.size());
        set.triples.push_back({mus[mi], nus[ni], lambdas[li], g[idx]});
    }
    return set;
}

/// Union of enumerate_kron(k) for 1 ≤ k ≤ max_boxes.
inline KronSet enumerate_kron_upto(long long max_boxes, const KronBounds& bounds,
                                   unsigned threads = 1) {
    KronSet set{bounds, max_boxes, {}};
    for (long long k = 1; k <= max_boxes; ++k) {
        KronSet layer = enumerate_kron(k, bounds, threads);
        set.triples.insert(set.triples.end(), layer.triples.begin(), layer.triples.end());
    }
    return set;
}

/// Row-wise sum of two nonzero triples with its freshly computed g. The
/// semigroup property says the sum cannot vanish; if it does, that is a
/// falsification event and we refuse to pass it silently.
inline KronTriple check_semigroup(const KronTriple& a, const KronTriple& b) {
    if (a.g <= 0 || b.g <= 0)
        throw std::invalid_argument("check_semigroup: both inputs must have g > 0");
    KronTriple sum{add_rowwise(a.mu, b.mu), add_rowwise(a.nu, b.nu),
                   add_rowwise(a.lambda, b.lambda), 0};
    sum.g = kronecker_coefficient(sum.mu, sum.nu, sum.lambda);
    if (sum.g == 0)
        throw falsification_error("semigroup closure failed: " + to_string(a) + " + " +
                                  to_string(b) + " -> " + to_string(sum));
    return sum;
}

/// True iff the N-scaled triple still has g > 0. False would falsify
/// stability; callers treat it as a fatal event.
inline bool check_stability(const KronTriple& t, long long n) {
    if (t.g <= 0)
        throw std::invalid_argument("check_stability: input must have g > 0");
    if (n < 1)
        throw std::invalid_argument("check_stability: scale must be positive");
    return kronecker_coefficient(scale(t.mu, n), scale(t.nu, n), scale(t.lambda, n)) > 0;
}

struct EntropyCheck {
    double h_mu = 0;
    double h_nu = 0;
    double h_lambda = 0;
    bool holds = false;
};

inline double shannon_entropy(const NormalizedPartition& p) {
    double h = 0;
    for (const Rational& w : p.weights()) {
        double x = to_double(w);
        if (x > 0)
            h -= x * std::log(x);
    }
    return h;
}

/// Shannon entropies (natural log) of the normalized rows, plus the pair
/// of spectral inequalities: subadditivity H(λ̄) ≤ H(μ̄)+H(ν̄) and the
/// triangle inequality |H(μ̄)−H(ν̄)| ≤ H(λ̄).
inline EntropyCheck entropy_check(const KronTriple& t) {
    if (t.g <= 0)
        throw std::invalid_argument("entropy_check: input must have g > 0");
    EntropyCheck out;
    out.h_mu = shannon_entropy(normalize(t.mu));
    out.h_nu = shannon_entropy(normalize(t.nu));
    out.h_lambda = shannon_entropy(normalize(t.lambda));
    double slack = tolerances().entropy_slack;
    out.holds = out.h_lambda <= out.h_mu + out.h_nu + slack &&
                std::abs(out.h_mu - out.h_nu) <= out.h_lambda + slack;
    return out;
}

/// Members of the set not expressible as a row-wise sum of two smaller
/// members. Candidates only: completeness beyond max_boxes is not claimed.
inline std::vector<KronTriple> extract_generators(const KronSet& set) {
    struct Key {
        Partition mu, nu, lambda;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            PartitionHash h;
            return (h(k.mu) * 31 + h(k.nu)) * 31 + h(k.lambda);
        }
    };
    std::unordered_map<Key, const KronTriple*, KeyHash> lookup;
    for (const KronTriple& t : set.triples)
        lookup.emplace(Key{t.mu, t.nu, t.lambda}, &t);

    std::vector<KronTriple> generators;
    for (const KronTriple& t : set.triples) {
        bool decomposable = false;
        for (const KronTriple& part : set.triples) {
            if (part.mu.size() >= t.mu.size())
                continue;
            auto mu = try_subtract_rowwise(t.mu, part.mu);
            if (!mu)
                continue;
            auto nu = try_subtract_rowwise(t.nu, part.nu);
            if (!nu)
                continue;
            auto lambda = try_subtract_rowwise(t.lambda, part.lambda);
            if (!lambda)
                continue;
            if (lookup.contains(Key{*mu, *nu, *lambda})) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable)
            generators.push_back(t);
    }
    return generators;
}

} // namespace kron
