#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kron/config.hpp"
#include "kron/density.hpp"
#include "kron/errors.hpp"
#include "kron/kronecker.hpp"
#include "kron/partition.hpp"
#include "kron/rational.hpp"
#include "kron/simplex.hpp"

namespace kron {

/// Vertex representation of the hull of normalized triples, in exact
/// rationals. Points are flattened as r^A ⧺ r^B ⧺ r^{AB}, each block
/// zero-padded to its row bound. An inner approximation of the full
/// admissible region: it grows with the box budget K it was built from.
struct PolytopeV {
    KronBounds bounds;
    long long max_boxes = 0; // K
    int ambient_dim = 0;     // m + n + mn_bound
    int affine_dim = 0;      // t, dimension of the affine hull
    std::vector<std::vector<Rational>> vertices;    // canonical descending order
    std::vector<std::vector<double>> vertices_d;    // double mirror for fast queries

    /// Sort canonically, recompute the affine dimension and the double
    /// mirror. Called after construction or deserialization.
    void finalize();
};

struct MembershipExact {
    bool inside = false;
    Rational distance; // exact L1 distance to the hull, 0 when inside
};

struct Membership {
    bool inside = false;
    double distance = 0;
};

struct CaratheodoryCert {
    std::vector<std::vector<Rational>> generators;
    std::vector<Rational> coefficients; // nonnegative, summing to 1 exactly
};

struct ScalingResult {
    bool found = false;
    long long m = 0;
    KronTriple triple;
};

/// Flatten a nonzero triple to its normalized point in the ambient space.
inline std::vector<Rational> normalized_point(const KronTriple& t, const KronBounds& bounds) {
    if (t.mu.length() > bounds.m || t.nu.length() > bounds.n || t.lambda.length() > bounds.mn_bound)
        throw std::invalid_argument("normalized_point: triple exceeds row bounds");
    std::vector<Rational> p;
    p.reserve(static_cast<std::size_t>(bounds.m + bounds.n + bounds.mn_bound));
    auto push_block = [&p](const Partition& part, int width) {
        Int k = part.size();
        for (int i = 0; i < width; ++i)
            p.emplace_back(Int(part.row(static_cast<std::size_t>(i))), k);
    };
    push_block(t.mu, bounds.m);
    push_block(t.nu, bounds.n);
    push_block(t.lambda, bounds.mn_bound);
    return p;
}

namespace detail {

inline int rational_rank(std::vector<std::vector<Rational>> rows) {
    int rank = 0;
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t col = 0; col < cols && rank < static_cast<int>(rows.size()); ++col) {
        std::size_t pivot = rows.size();
        for (std::size_t r = static_cast<std::size_t>(rank); r < rows.size(); ++r)
            if (rows[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot == rows.size())
            continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[pivot]);
        const auto& prow = rows[static_cast<std::size_t>(rank)];
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == static_cast<std::size_t>(rank) || rows[r][col] == 0)
                continue;
            Rational f = rows[r][col] / prow[col];
            for (std::size_t c = col; c < cols; ++c)
                rows[r][c] -= f * prow[c];
        }
        ++rank;
    }
    return rank;
}

/// Feasibility of p ∈ conv(points): Σ x_i v_i = p, Σ x_i = 1, x ≥ 0.
template <class Scalar>
LpResult<Scalar> membership_lp(const std::vector<std::vector<Scalar>>& points,
                               const std::vector<Scalar>& p) {
    std::size_t dim = p.size();
    std::vector<std::vector<Scalar>> a(dim + 1, std::vector<Scalar>(points.size(), Scalar(0)));
    for (std::size_t j = 0; j < points.size(); ++j) {
        for (std::size_t i = 0; i < dim; ++i)
            a[i][j] = points[j][i];
        a[dim][j] = Scalar(1);
    }
    std::vector<Scalar> b(p);
    b.push_back(Scalar(1));
    return solve_lp(std::move(a), std::move(b), std::vector<Scalar>(points.size(), Scalar(0)));
}

/// Minimum L1 distance from p to conv(points):
/// min Σ(u+w) s.t. Σ x_i v_i + u − w = p, Σ x_i = 1, x,u,w ≥ 0.
template <class Scalar>
Scalar distance_lp(const std::vector<std::vector<Scalar>>& points, const std::vector<Scalar>& p) {
    std::size_t dim = p.size();
    std::size_t n = points.size();
    std::size_t cols = n + 2 * dim;
    std::vector<std::vector<Scalar>> a(dim + 1, std::vector<Scalar>(cols, Scalar(0)));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < dim; ++i)
            a[i][j] = points[j][i];
        a[dim][j] = Scalar(1);
    }
    for (std::size_t i = 0; i < dim; ++i) {
        a[i][n + i] = Scalar(1);
        a[i][n + dim + i] = Scalar(-1);
    }
    std::vector<Scalar> b(p);
    b.push_back(Scalar(1));
    std::vector<Scalar> c(cols, Scalar(0));
    for (std::size_t j = n; j < cols; ++j)
        c[j] = Scalar(1);
    LpResult<Scalar> result = solve_lp(std::move(a), std::move(b), c);
    if (result.status != LpStatus::Optimal)
        throw consistency_error("distance LP did not solve; the hull is nonempty so it must");
    return result.objective;
}

inline std::vector<double> to_double_vec(const std::vector<Rational>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = to_double(v[i]);
    return out;
}

} // namespace detail

inline void PolytopeV::finalize() {
    ambient_dim = bounds.m + bounds.n + bounds.mn_bound;
    for (const auto& v : vertices) {
        if (static_cast<int>(v.size()) != ambient_dim)
            throw consistency_error("polytope vertex has the wrong dimension");
        int offset = 0;
        for (int width : {bounds.m, bounds.n, bounds.mn_bound}) {
            Rational sum = 0;
            for (int i = 0; i < width; ++i) {
                const Rational& c = v[static_cast<std::size_t>(offset + i)];
                if (c < 0 || (i > 0 && c > v[static_cast<std::size_t>(offset + i - 1)]))
                    throw consistency_error("polytope vertex block not sorted nonnegative");
                sum += c;
            }
            if (sum != 1)
                throw consistency_error("polytope vertex block does not sum to 1");
            offset += width;
        }
    }
    std::sort(vertices.begin(), vertices.end(), std::greater<>());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    std::vector<std::vector<Rational>> diffs;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        std::vector<Rational> d(vertices[i].size());
        for (std::size_t c = 0; c < d.size(); ++c)
            d[c] = vertices[i][c] - vertices[0][c];
        diffs.push_back(std::move(d));
    }
    affine_dim = detail::rational_rank(std::move(diffs));
    vertices_d.clear();
    for (const auto& v : vertices)
        vertices_d.push_back(detail::to_double_vec(v));
}

/// Extreme points of the normalized triples of a KRON set, by incremental
/// separation: test each candidate against the confirmed vertices; an
/// infeasible membership LP yields a separating direction whose
/// lexicographic argmax over all candidates is a new confirmed vertex.
/// Runs entirely in exact rationals.
inline PolytopeV build_polytope(const KronSet& set) {
    if (set.triples.empty())
        throw std::invalid_argument("build_polytope: empty KRON set");
    std::vector<std::vector<Rational>> candidates;
    candidates.reserve(set.triples.size());
    for (const KronTriple& t : set.triples)
        candidates.push_back(normalized_point(t, set.bounds));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t dim = candidates[0].size();
    auto lex_argmax = [&](const std::vector<Rational>& direction) -> std::size_t {
        std::size_t best = 0;
        Rational best_val;
        bool first = true;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            Rational val = 0;
            for (std::size_t c = 0; c < dim; ++c)
                val += direction[c] * candidates[i][c];
            if (first || val > best_val ||
                (val == best_val && candidates[i] > candidates[best])) {
                best = i;
                best_val = val;
                first = false;
            }
        }
        return best;
    };

    std::vector<std::size_t> confirmed;
    std::vector<std::vector<Rational>> hull_points;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        while (true) {
            if (std::find(confirmed.begin(), confirmed.end(), ci) != confirmed.end())
                break;
            std::vector<Rational> direction(dim, Rational(0));
            if (!hull_points.empty()) {
                LpResult<Rational> lp = detail::membership_lp(hull_points, candidates[ci]);
                if (lp.status == LpStatus::Optimal)
                    break; // inside the confirmed hull, not a vertex
                for (std::size_t c = 0; c < dim; ++c)
                    direction[c] = lp.farkas[c];
            }
            std::size_t q = lex_argmax(direction);
            confirmed.push_back(q);
            hull_points.push_back(candidates[q]);
        }
    }

    PolytopeV poly;
    poly.bounds = set.bounds;
    poly.max_boxes = set.max_boxes;
    poly.vertices = std::move(hull_points);
    poly.finalize();
    return poly;
}

/// Exact membership and L1 distance for a rational query point.
inline MembershipExact membership_exact(const std::vector<Rational>& p, const PolytopeV& poly) {
    if (static_cast<int>(p.size()) != poly.ambient_dim)
        throw std::invalid_argument("membership: dimension mismatch");
    LpResult<Rational> lp = detail::membership_lp(poly.vertices, p);
    if (lp.status == LpStatus::Optimal)
        return {true, Rational(0)};
    return {false, detail::distance_lp(poly.vertices, p)};
}

/// Floating membership for sampled spectra: a single L1-distance LP in
/// doubles, inside when the distance is within the feasibility slack.
inline Membership membership(const SpectralTriple& p, const PolytopeV& poly) {
    const int want = poly.bounds.m + poly.bounds.n + poly.bounds.mn_bound;
    if (p.rA.dim() != poly.bounds.m || p.rB.dim() != poly.bounds.n ||
        p.rAB.dim() != poly.bounds.mn_bound || want != poly.ambient_dim)
        throw std::invalid_argument("membership: dimension mismatch");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(want));
    flat.insert(flat.end(), p.rA.probs().begin(), p.rA.probs().end());
    flat.insert(flat.end(), p.rB.probs().begin(), p.rB.probs().end());
    flat.insert(flat.end(), p.rAB.probs().begin(), p.rAB.probs().end());
    double dist = detail::distance_lp(poly.vertices_d, flat);
    if (dist <= tolerances().membership)
        return {true, 0.0};
    return {false, dist};
}

/// Exact convex decomposition of an interior rational point into at most
/// t+1 vertices. The basic feasible solution of the membership LP cannot
/// have more positive entries than the system rank, which is exactly t+1,
/// and the reconstruction is re-verified before returning.
inline CaratheodoryCert caratheodory(const std::vector<Rational>& p, const PolytopeV& poly) {
    if (static_cast<int>(p.size()) != poly.ambient_dim)
        throw std::invalid_argument("caratheodory: dimension mismatch");
    LpResult<Rational> lp = detail::membership_lp(poly.vertices, p);
    if (lp.status != LpStatus::Optimal)
        throw std::invalid_argument("caratheodory: point is outside the polytope");
    CaratheodoryCert cert;
    for (std::size_t j = 0; j < lp.x.size(); ++j) {
        if (lp.x[j] == 0)
            continue;
        cert.generators.push_back(poly.vertices[j]);
        cert.coefficients.push_back(lp.x[j]);
    }
    if (static_cast<int>(cert.generators.size()) > poly.affine_dim + 1)
        throw consistency_error("caratheodory: support exceeds t+1");
    Rational total = 0;
    std::vector<Rational> recon(p.size(), Rational(0));
    for (std::size_t j = 0; j < cert.generators.size(); ++j) {
        if (cert.coefficients[j] < 0)
            throw consistency_error("caratheodory: negative coefficient");
        total += cert.coefficients[j];
        for (std::size_t c = 0; c < recon.size(); ++c)
            recon[c] += cert.coefficients[j] * cert.generators[j][c];
    }
    if (total != 1 || recon != p)
        throw consistency_error("caratheodory: reconstruction failed");
    return cert;
}

namespace detail {

inline Int lcm_int(const Int& a, const Int& b) { return a / gcd(a, b) * b; }

/// Smallest positive scale making every coordinate an integer.
inline Int integral_scale(const std::vector<Rational>& p) {
    Int l = 1;
    for (const Rational& v : p)
        l = lcm_int(l, denominator(v));
    return l;
}

/// Rebuild the diagram triple from an integrally scaled point; nullopt if
/// any block fails to be a valid diagram layout.
inline std::optional<KronTriple> triple_from_scaled(const std::vector<Rational>& p, long long m,
                                                    const KronBounds& bounds) {
    auto block = [&](int offset, int width) -> std::optional<Partition> {
        std::vector<int> rows;
        for (int i = 0; i < width; ++i) {
            Rational v = p[static_cast<std::size_t>(offset + i)] * m;
            if (denominator(v) != 1)
                return std::nullopt;
            rows.push_back(static_cast<int>(numerator(v).convert_to<long long>()));
        }
        try {
            return Partition(std::move(rows));
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    };
    auto mu = block(0, bounds.m);
    auto nu = block(bounds.m, bounds.n);
    auto lambda = block(bounds.m + bounds.n, bounds.mn_bound);
    if (!mu || !nu || !lambda)
        return std::nullopt;
    return KronTriple{*mu, *nu, *lambda, 0};
}

} // namespace detail

/// Smallest m ≤ max_m with m·p an integer triple of nonzero coefficient,
/// by direct search over multiples of the integral scale of p. With
/// max_m = 0 the bound is derived from the certificate: the common
/// denominator of its coefficients times the least common multiple of the
/// generators' verified integral sizes is guaranteed to succeed.
inline ScalingResult find_scaling(const std::vector<Rational>& p, const KronBounds& bounds,
                                  const CaratheodoryCert& cert, long long max_m = 0) {
    Int step = detail::integral_scale(p);
    if (max_m == 0) {
        Int common = 1;
        for (const Rational& c : cert.coefficients)
            common = detail::lcm_int(common, denominator(c));
        Int sizes = 1;
        for (const auto& gen : cert.generators) {
            Int gen_scale = detail::integral_scale(gen);
            // smallest verified size of this generator as a nonzero member
            bool verified = false;
            for (Int s = gen_scale; s <= gen_scale * 256; s += gen_scale) {
                auto t = detail::triple_from_scaled(gen, s.convert_to<long long>(), bounds);
                if (t && kronecker_coefficient(t->mu, t->nu, t->lambda) > 0) {
                    sizes = detail::lcm_int(sizes, s);
                    verified = true;
                    break;
                }
            }
            if (!verified)
                throw consistency_error("find_scaling: certificate generator never realizes g > 0");
        }
        max_m = Int(common * sizes).convert_to<long long>();
    }
    for (Int m = step; m <= max_m; m += step) {
        long long ml = m.convert_to<long long>();
        auto t = detail::triple_from_scaled(p, ml, bounds);
        if (!t)
            continue;
        t->g = kronecker_coefficient(t->mu, t->nu, t->lambda);
        if (t->g > 0)
            return {true, ml, *t};
    }
    return {false, 0, {}};
}

} // namespace kron
