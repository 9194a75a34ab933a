#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kron/rational.hpp"

namespace kron {

/// Young diagram stored as weakly decreasing positive row lengths. The
/// empty diagram (zero boxes) has no rows. Trailing zeros are stripped on
/// construction, so equality is plain vector equality.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> rows) : rows_(std::move(rows)) {
        while (!rows_.empty() && rows_.back() == 0)
            rows_.pop_back();
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i] <= 0)
                throw std::invalid_argument("partition rows must be positive");
            if (i + 1 < rows_.size() && rows_[i] < rows_[i + 1])
                throw std::invalid_argument("partition rows must be weakly decreasing");
        }
    }

    Partition(std::initializer_list<int> rows) : Partition(std::vector<int>(rows)) {}

    const std::vector<int>& rows() const { return rows_; }

    /// Row length, zero-padded beyond the last row.
    int row(std::size_t i) const { return i < rows_.size() ? rows_[i] : 0; }

    /// Number of rows d.
    int length() const { return static_cast<int>(rows_.size()); }

    /// Number of boxes k.
    long long size() const {
        long long s = 0;
        for (int r : rows_)
            s += r;
        return s;
    }

    bool empty() const { return rows_.empty(); }

    bool operator==(const Partition&) const = default;

    /// Lexicographic on row vectors, so (3) > (2,1) > (1,1,1). Canonical
    /// listings throughout the library are sorted decreasing in this order.
    auto operator<=>(const Partition&) const = default;

private:
    std::vector<int> rows_;
};

struct PartitionHash {
    std::size_t operator()(const Partition& p) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (int r : p.rows()) {
            h ^= static_cast<std::size_t>(r);
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

/// Exact normalized diagram: weights λ_i/|λ|, weakly decreasing, summing
/// to 1 in rational arithmetic.
class NormalizedPartition {
public:
    explicit NormalizedPartition(const Partition& p) {
        if (p.empty())
            throw std::invalid_argument("cannot normalize empty diagram");
        Int k = p.size();
        weights_.reserve(p.rows().size());
        for (int r : p.rows())
            weights_.emplace_back(Int(r), k);
    }

    const std::vector<Rational>& weights() const { return weights_; }

    bool operator==(const NormalizedPartition&) const = default;

private:
    std::vector<Rational> weights_;
};

/// Componentwise sum; the shorter diagram is padded with zero rows.
inline Partition add_rowwise(const Partition& a, const Partition& b) {
    std::size_t d = std::max(a.rows().size(), b.rows().size());
    std::vector<int> rows(d);
    for (std::size_t i = 0; i < d; ++i)
        rows[i] = a.row(i) + b.row(i);
    return Partition(std::move(rows));
}

/// Componentwise difference a - b, or nullopt when the result is not a
/// valid diagram (some row negative or not weakly decreasing).
inline std::optional<Partition> try_subtract_rowwise(const Partition& a, const Partition& b) {
    if (b.rows().size() > a.rows().size())
        return std::nullopt;
    std::vector<int> rows(a.rows().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i] = a.row(i) - b.row(i);
        if (rows[i] < 0)
            return std::nullopt;
        if (i > 0 && rows[i] > rows[i - 1])
            return std::nullopt;
    }
    return Partition(std::move(rows));
}

inline Partition scale(const Partition& a, long long n) {
    if (n < 1)
        throw std::invalid_argument("scale factor must be positive");
    std::vector<int> rows(a.rows());
    for (int& r : rows)
        r = static_cast<int>(r * n);
    return Partition(std::move(rows));
}

inline NormalizedPartition normalize(const Partition& a) { return NormalizedPartition(a); }

inline Partition conjugate(const Partition& a) {
    if (a.empty())
        return {};
    std::vector<int> cols(static_cast<std::size_t>(a.rows()[0]));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        int count = 0;
        for (int r : a.rows())
            if (r > static_cast<int>(j))
                ++count;
        cols[j] = count;
    }
    return Partition(std::move(cols));
}

/// Hook lengths in row-major box order; one entry per box.
inline std::vector<int> hook_lengths(const Partition& a) {
    Partition conj = conjugate(a);
    std::vector<int> hooks;
    hooks.reserve(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.length(); ++i)
        for (int j = 0; j < a.rows()[static_cast<std::size_t>(i)]; ++j)
            hooks.push_back(a.row(static_cast<std::size_t>(i)) - j +
                            conj.row(static_cast<std::size_t>(j)) - i - 1);
    return hooks;
}

namespace detail {
inline void enumerate_rec(long long remaining, int rows_left, long long max_part,
                          std::vector<int>& acc, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(acc);
        return;
    }
    if (rows_left == 0)
        return;
    long long hi = std::min<long long>(max_part, remaining);
    long long lo = (remaining + rows_left - 1) / rows_left; // smallest feasible first row
    for (long long r = hi; r >= lo; --r) {
        acc.push_back(static_cast<int>(r));
        enumerate_rec(remaining - r, rows_left - 1, r, acc, out);
        acc.pop_back();
    }
}
} // namespace detail

/// All partitions of k with at most d rows, in lexicographically
/// decreasing order, e.g. (6), (5,1), (4,2), (4,1,1), (3,3), (3,2,1), (2,2,2).
inline std::vector<Partition> enumerate_partitions(long long k, int d) {
    if (k < 0)
        throw std::invalid_argument("box count must be nonnegative");
    if (d < 1)
        throw std::invalid_argument("row bound must be positive");
    std::vector<Partition> out;
    std::vector<int> acc;
    detail::enumerate_rec(k, d, k, acc, out);
    if (k == 0)
        out.assign(1, Partition{});
    return out;
}

/// Text form: comma-separated rows "4,2,1"; the empty diagram is "-".
inline std::string to_string(const Partition& p) {
    if (p.empty())
        return "-";
    std::string s;
    for (std::size_t i = 0; i < p.rows().size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(p.rows()[i]);
    }
    return s;
}

inline Partition parse_partition(std::string_view text) {
    if (text == "-")
        return {};
    std::vector<int> rows;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string_view tok = text.substr(pos, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - pos);
        try {
            std::size_t used = 0;
            int v = std::stoi(std::string(tok), &used);
            if (used != tok.size())
                throw std::invalid_argument("trailing junk");
            rows.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid partition text: '" + std::string(text) + "'");
        }
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return Partition(std::move(rows));
}

} // namespace kron
