#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "kron/polytope.hpp"

using namespace kron;

namespace {

const KronBounds kBounds{2, 2, 4};

std::vector<Rational> rational_point(std::initializer_list<Rational> vals) { return vals; }

PolytopeV hull_up_to(long long max_boxes) {
    return build_polytope(enumerate_kron_upto(max_boxes, kBounds));
}

} // namespace

TEST_CASE("hull construction") {
    PolytopeV k1 = hull_up_to(1);
    REQUIRE(k1.vertices.size() == 1);
    CHECK(k1.vertices[0] ==
          rational_point({1, 0, 1, 0, 1, 0, 0, 0}));
    CHECK(k1.ambient_dim == 8);

    PolytopeV k2 = hull_up_to(2);
    REQUIRE(k2.vertices.size() == 4);
    auto has_vertex = [&k2](const std::vector<Rational>& v) {
        return std::find(k2.vertices.begin(), k2.vertices.end(), v) != k2.vertices.end();
    };
    CHECK(has_vertex(rational_point({{1, 2}, {1, 2}, {1, 2}, {1, 2}, 1, 0, 0, 0})));
    CHECK(has_vertex(rational_point({{1, 2}, {1, 2}, 1, 0, {1, 2}, {1, 2}, 0, 0})));
    CHECK(has_vertex(rational_point({1, 0, {1, 2}, {1, 2}, {1, 2}, {1, 2}, 0, 0})));

    // regression values from the first verified full run
    CHECK(hull_up_to(4).vertices.size() == 9);
    CHECK(hull_up_to(8).vertices.size() == 10);

    CHECK_THROWS_AS(build_polytope(KronSet{kBounds, 0, {}}), std::invalid_argument);
}

TEST_CASE("membership") {
    PolytopeV poly = hull_up_to(6);

    SECTION("every vertex is inside at distance zero") {
        for (const auto& v : poly.vertices) {
            MembershipExact mem = membership_exact(v, poly);
            CHECK(mem.inside);
            CHECK(mem.distance == 0);
        }
    }

    SECTION("midpoints are inside") {
        for (std::size_t i = 1; i < poly.vertices.size(); ++i) {
            std::vector<Rational> mid(poly.vertices[0].size());
            for (std::size_t c = 0; c < mid.size(); ++c)
                mid[c] = (poly.vertices[0][c] + poly.vertices[i][c]) / 2;
            CHECK(membership_exact(mid, poly).inside);
        }
    }

    SECTION("a pure joint spectrum with unequal marginals is outside") {
        auto p = rational_point({1, 0, {1, 2}, {1, 2}, 1, 0, 0, 0});
        MembershipExact mem = membership_exact(p, poly);
        CHECK_FALSE(mem.inside);
        CHECK(mem.distance > 0);

        SpectralTriple st{Spectrum({1.0, 0.0}), Spectrum({0.5, 0.5}),
                          Spectrum({1.0, 0.0, 0.0, 0.0})};
        Membership fmem = membership(st, poly);
        CHECK_FALSE(fmem.inside);
        CHECK(fmem.distance == Catch::Approx(to_double(mem.distance)).margin(1e-7));
    }

    SECTION("floating queries accept known members") {
        SpectralTriple bell{Spectrum({0.5, 0.5}), Spectrum({0.5, 0.5}),
                            Spectrum({1.0, 0.0, 0.0, 0.0})};
        CHECK(membership(bell, poly).inside);
    }

    SECTION("invariant under vertex reordering") {
        PolytopeV shuffled = poly;
        std::mt19937_64 rng(3);
        std::shuffle(shuffled.vertices.begin(), shuffled.vertices.end(), rng);
        std::shuffle(shuffled.vertices_d.begin(), shuffled.vertices_d.end(), rng);
        auto p = rational_point({{3, 4}, {1, 4}, {3, 4}, {1, 4}, {1, 2}, {1, 4}, {1, 4}, 0});
        CHECK(membership_exact(p, shuffled).inside == membership_exact(p, poly).inside);
        auto q = rational_point({1, 0, {1, 2}, {1, 2}, 1, 0, 0, 0});
        CHECK(membership_exact(q, shuffled).distance == membership_exact(q, poly).distance);
    }

    CHECK_THROWS_AS(membership_exact(rational_point({1, 0}), poly), std::invalid_argument);
}

TEST_CASE("asymmetric bounds work end to end") {
    KronBounds bounds{2, 3, 6};
    PolytopeV poly = build_polytope(enumerate_kron_upto(6, bounds));
    CHECK(poly.ambient_dim == 11);
    CHECK(poly.vertices.size() == 30); // regression, first verified run
    for (const auto& v : poly.vertices)
        CHECK(membership_exact(v, poly).inside);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SpectralTriple st = spectral_triple(random_density(6, 7000 + seed), 2, 3);
        CHECK(membership(st, poly).inside);
    }
}

TEST_CASE("inner approximations are monotone") {
    PolytopeV big = hull_up_to(12);
    for (long long small : {2, 4, 8})
        for (const auto& v : hull_up_to(small).vertices)
            CHECK(membership_exact(v, big).inside);
}

TEST_CASE("convex combinations of members stay inside") {
    PolytopeV poly = hull_up_to(8);
    auto triples = enumerate_kron_upto(4, kBounds).triples;
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const KronTriple& a = triples[rng() % triples.size()];
        const KronTriple& b = triples[rng() % triples.size()];
        long long c1 = 1 + static_cast<long long>(rng() % 3);
        long long c2 = 1 + static_cast<long long>(rng() % 3);
        if (c1 * a.mu.size() + c2 * b.mu.size() > 8)
            continue;
        Rational weight(c1 * a.mu.size(), c1 * a.mu.size() + c2 * b.mu.size());
        auto pa = normalized_point(a, kBounds);
        auto pb = normalized_point(b, kBounds);
        std::vector<Rational> combo(pa.size());
        for (std::size_t i = 0; i < combo.size(); ++i)
            combo[i] = weight * pa[i] + (1 - weight) * pb[i];
        CHECK(membership_exact(combo, poly).inside);
    }
}

TEST_CASE("Caratheodory decomposition") {
    PolytopeV poly = hull_up_to(6);

    SECTION("a vertex decomposes as itself") {
        CaratheodoryCert cert = caratheodory(poly.vertices[2], poly);
        REQUIRE(cert.generators.size() == 1);
        CHECK(cert.generators[0] == poly.vertices[2]);
        CHECK(cert.coefficients[0] == 1);
    }

    SECTION("constructed two-vertex combination") {
        std::vector<Rational> p(poly.vertices[0].size());
        for (std::size_t c = 0; c < p.size(); ++c)
            p[c] = Rational(2, 3) * poly.vertices[0][c] + Rational(1, 3) * poly.vertices[1][c];
        CaratheodoryCert cert = caratheodory(p, poly);
        REQUIRE(cert.generators.size() == 2);
        // reconstruction is what matters; order is not pinned
        Rational total = 0;
        for (const Rational& c : cert.coefficients)
            total += c;
        CHECK(total == 1);
    }

    SECTION("random rational interior points, exact reconstruction, <= t+1 terms") {
        std::mt19937_64 rng(4242);
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<Rational> weights(poly.vertices.size());
            Rational total = 0;
            for (Rational& w : weights) {
                w = Rational(static_cast<long long>(rng() % 5));
                total += w;
            }
            if (total == 0)
                continue;
            std::vector<Rational> p(poly.vertices[0].size(), Rational(0));
            for (std::size_t j = 0; j < poly.vertices.size(); ++j)
                for (std::size_t c = 0; c < p.size(); ++c)
                    p[c] += weights[j] / total * poly.vertices[j][c];
            CaratheodoryCert cert = caratheodory(p, poly);
            CHECK(static_cast<int>(cert.generators.size()) <= poly.affine_dim + 1);
            // the library verifies reconstruction internally; double-check here
            std::vector<Rational> recon(p.size(), Rational(0));
            for (std::size_t j = 0; j < cert.generators.size(); ++j)
                for (std::size_t c = 0; c < p.size(); ++c)
                    recon[c] += cert.coefficients[j] * cert.generators[j][c];
            CHECK(recon == p);
        }
    }

    SECTION("points outside are rejected") {
        auto q = rational_point({1, 0, {1, 2}, {1, 2}, 1, 0, 0, 0});
        CHECK_THROWS_AS(caratheodory(q, poly), std::invalid_argument);
    }
}

TEST_CASE("integer scaling recovery") {
    PolytopeV poly = hull_up_to(6);

    auto run = [&poly](std::initializer_list<Rational> vals, long long max_m) {
        std::vector<Rational> p = vals;
        CaratheodoryCert cert = caratheodory(p, poly);
        return find_scaling(p, poly.bounds, cert, max_m);
    };

    ScalingResult unit = run({1, 0, 1, 0, 1, 0, 0, 0}, 4);
    REQUIRE(unit.found);
    CHECK(unit.m == 1);
    CHECK(unit.triple.mu == Partition{1});

    ScalingResult bell = run({{1, 2}, {1, 2}, {1, 2}, {1, 2}, 1, 0, 0, 0}, 4);
    REQUIRE(bell.found);
    CHECK(bell.m == 2);
    CHECK(bell.triple.lambda == Partition{2});
    CHECK(bell.triple.g == 1);

    ScalingResult thirds =
        run({{2, 3}, {1, 3}, {2, 3}, {1, 3}, {2, 3}, {1, 3}, 0, 0}, 4);
    REQUIRE(thirds.found);
    CHECK(thirds.m == 3);
    CHECK(thirds.triple.mu == Partition{2, 1});
    CHECK(thirds.triple.lambda == Partition{2, 1});

    SECTION("derived bound from the certificate also succeeds") {
        ScalingResult auto_bound = run({{1, 2}, {1, 2}, {1, 2}, {1, 2}, 1, 0, 0, 0}, 0);
        REQUIRE(auto_bound.found);
        CHECK(auto_bound.m == 2);
    }

    SECTION("not-found is reported, not thrown") {
        // prime denominator 7 forces m >= 7 > max_m
        std::vector<Rational> p{{4, 7}, {3, 7}, {4, 7}, {3, 7}, {4, 7}, {3, 7}, 0, 0};
        if (membership_exact(p, poly).inside) {
            CaratheodoryCert cert = caratheodory(p, poly);
            ScalingResult res = find_scaling(p, poly.bounds, cert, 4);
            CHECK_FALSE(res.found);
        }
    }
}
