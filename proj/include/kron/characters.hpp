#pragma once

#include <mutex>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kron/errors.hpp"
#include "kron/partition.hpp"
#include "kron/rational.hpp"

namespace kron {

/// Conjugacy class of S_k: the cycle type together with the number of
/// permutations in the class, k! / prod_j (j^{m_j} m_j!).
struct CycleType {
    Partition cycles;
    Int class_size;
};

inline Int class_size(const Partition& cycles) {
    Int denom = 1;
    const auto& rows = cycles.rows();
    for (std::size_t i = 0; i < rows.size();) {
        std::size_t j = i;
        while (j < rows.size() && rows[j] == rows[i])
            ++j;
        long long mult = static_cast<long long>(j - i);
        for (long long t = 0; t < mult; ++t)
            denom *= rows[i];
        denom *= factorial(mult);
        i = j;
    }
    return factorial(cycles.size()) / denom;
}

/// All conjugacy classes of S_k in canonical (lexicographically
/// decreasing cycle type) order.
inline std::vector<CycleType> conjugacy_classes(long long k) {
    std::vector<CycleType> out;
    for (const Partition& p : enumerate_partitions(k, static_cast<int>(std::max<long long>(k, 1))))
        out.push_back({p, class_size(p)});
    return out;
}

namespace detail {

/// Beta set of a diagram: the strictly decreasing values λ_i + (L-1-i).
/// Removing a border strip of length t is subtracting t from one entry,
/// valid when the result is nonnegative and not already present; the
/// strip height is the number of entries jumped over.
inline std::vector<int> beta_set(const Partition& p) {
    int len = p.length();
    std::vector<int> b(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i)
        b[static_cast<std::size_t>(i)] = p.rows()[static_cast<std::size_t>(i)] + (len - 1 - i);
    return b;
}

inline Partition partition_from_beta(std::vector<int> b) {
    std::sort(b.begin(), b.end(), std::greater<int>());
    int len = static_cast<int>(b.size());
    std::vector<int> rows(b.size());
    for (int i = 0; i < len; ++i)
        rows[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - (len - 1 - i);
    return Partition(std::move(rows));
}

} // namespace detail

/// Memoized border-strip character recursion. The cache is safe for
/// concurrent use: lookups take a shared lock and racing inserts are
/// harmless because a key always maps to the same value.
class CharacterCache {
public:
    /// χ_λ(class with the given cycle type), as an exact integer.
    Int character(const Partition& lambda, const Partition& cycles) const {
        if (lambda.size() != cycles.size())
            throw std::invalid_argument("character: |lambda| != |cycle type|");
        return recurse(lambda, std::span<const int>(cycles.rows()));
    }

    std::size_t entries() const {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }

    /// Stable snapshot for persistence.
    std::vector<std::tuple<Partition, Partition, Int>> snapshot() const {
        std::shared_lock lock(mutex_);
        std::vector<std::tuple<Partition, Partition, Int>> out;
        out.reserve(memo_.size());
        for (const auto& [key, value] : memo_)
            out.emplace_back(key.first, key.second, value);
        return out;
    }

    /// Idempotent bulk insert (used when loading a cache file).
    void import(const Partition& lambda, const Partition& cycles, const Int& value) {
        std::unique_lock lock(mutex_);
        memo_.emplace(Key{lambda, cycles}, value);
    }

    void clear() {
        std::unique_lock lock(mutex_);
        memo_.clear();
    }

private:
    using Key = std::pair<Partition, Partition>;

    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            PartitionHash h;
            return h(k.first) * 0x9e3779b97f4a7c15ull + h(k.second);
        }
    };

    Int recurse(const Partition& shape, std::span<const int> cycles) const {
        if (cycles.empty())
            return shape.empty() ? Int(1) : Int(0);
        Key key{shape, Partition(std::vector<int>(cycles.begin(), cycles.end()))};
        {
            std::shared_lock lock(mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end())
                return it->second;
        }
        int t = cycles.front();
        std::vector<int> beta = detail::beta_set(shape);
        Int total = 0;
        for (std::size_t i = 0; i < beta.size(); ++i) {
            int nb = beta[i] - t;
            if (nb < 0)
                continue;
            bool occupied = false;
            int height = 0;
            for (std::size_t j = 0; j < beta.size(); ++j) {
                if (beta[j] == nb)
                    occupied = true;
                if (beta[j] > nb && beta[j] < beta[i])
                    ++height;
            }
            if (occupied)
                continue;
            std::vector<int> next = beta;
            next[i] = nb;
            Int sub = recurse(detail::partition_from_beta(std::move(next)), cycles.subspan(1));
            if (height % 2)
                total -= sub;
            else
                total += sub;
        }
        {
            std::unique_lock lock(mutex_);
            memo_.emplace(std::move(key), total);
        }
        return total;
    }

    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Key, Int, KeyHash> memo_;
};

/// Process-wide shared character cache.
inline CharacterCache& character_cache() {
    static CharacterCache cache;
    return cache;
}

inline Int character(const Partition& lambda, const Partition& cycles) {
    return character_cache().character(lambda, cycles);
}

/// dim V_λ by the hook length formula, k! / prod hooks.
inline Int dim_sk(const Partition& lambda) {
    Int den = 1;
    for (int h : hook_lengths(lambda))
        den *= h;
    Int q, r;
    divide_qr(factorial(lambda.size()), den, q, r);
    if (r != 0)
        throw consistency_error("dim_sk: hook product did not divide k!");
    return q;
}

/// dim U^d_λ = prod (d + j - i) / hook(i,j); zero when λ has more than d rows.
inline Int dim_gl(const Partition& lambda, int d) {
    if (d < 1)
        throw std::invalid_argument("dim_gl: dimension must be positive");
    if (lambda.length() > d)
        return 0;
    Int num = 1, den = 1;
    Partition conj = conjugate(lambda);
    for (int i = 0; i < lambda.length(); ++i)
        for (int j = 0; j < lambda.rows()[static_cast<std::size_t>(i)]; ++j) {
            num *= d + j - i;
            den *= lambda.row(static_cast<std::size_t>(i)) - j +
                   conj.row(static_cast<std::size_t>(j)) - i - 1;
        }
    Int q, r;
    divide_qr(num, den, q, r);
    if (r != 0)
        throw consistency_error("dim_gl: content/hook product did not divide");
    return q;
}

} // namespace kron
