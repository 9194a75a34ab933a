#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <thread>

#include "kron/characters.hpp"

#include "oracles.hpp"

using namespace kron;

TEST_CASE("class sizes match brute-force permutation counting") {
    for (int k = 1; k <= 6; ++k) {
        auto brute = oracle::class_sizes_brute(k);
        auto classes = conjugacy_classes(k);
        REQUIRE(classes.size() == brute.size());
        Int total = 0;
        for (const CycleType& c : classes) {
            REQUIRE(brute.count(c.cycles.rows()) == 1);
            CHECK(c.class_size == Int(brute.at(c.cycles.rows())));
            total += c.class_size;
        }
        CHECK(total == factorial(k));
    }
}

TEST_CASE("character values") {
    CHECK(character({2, 1}, {1, 1, 1}) == 2);
    CHECK(character({2, 1}, {3}) == -1);
    for (const Partition& cls : enumerate_partitions(5, 5))
        CHECK(character({5}, cls) == 1); // trivial representation

    CHECK_THROWS_AS(character({2, 1}, {2, 1, 1}), std::invalid_argument);
}

TEST_CASE("border-strip recursion agrees with the alternant oracle, k <= 5") {
    for (int k = 1; k <= 5; ++k)
        for (const Partition& lambda : enumerate_partitions(k, k))
            for (const Partition& cls : enumerate_partitions(k, k))
                CHECK(character(lambda, cls) == Int(oracle::frobenius_character(lambda, cls)));
}

TEST_CASE("first orthogonality holds exactly, k <= 7") {
    for (int k = 1; k <= 7; ++k) {
        auto shapes = enumerate_partitions(k, k);
        auto classes = conjugacy_classes(k);
        for (const Partition& mu : shapes)
            for (const Partition& nu : shapes) {
                Int sum = 0;
                for (const CycleType& c : classes)
                    sum += c.class_size * character(mu, c.cycles) * character(nu, c.cycles);
                CHECK(sum == (mu == nu ? factorial(k) : Int(0)));
            }
    }
}

TEST_CASE("dimensions") {
    CHECK(dim_sk({2, 2}) == 2);
    CHECK(dim_sk({7}) == 1);
    CHECK(dim_sk({1, 1, 1}) == 1);

    SECTION("hook formula equals the character at the identity, k <= 8") {
        for (int k = 1; k <= 8; ++k) {
            Partition identity(std::vector<int>(static_cast<std::size_t>(k), 1));
            for (const Partition& lambda : enumerate_partitions(k, k))
                CHECK(dim_sk(lambda) == character(lambda, identity));
        }
    }

    SECTION("unitary-group dimensions") {
        CHECK(dim_gl({1}, 2) == 2);
        CHECK(dim_gl({1, 1, 1}, 2) == 0);
        CHECK(dim_gl({2}, 2) == 3);
        CHECK(dim_gl({2, 1}, 3) == 8);       // adjoint of dimension 3
        CHECK(dim_gl({}, 4) == 1);           // trivial representation
        CHECK_THROWS_AS(dim_gl({1}, 0), std::invalid_argument);
    }
}

TEST_CASE("memo cache tolerates concurrent mixed workloads") {
    CharacterCache serial;
    std::vector<std::pair<Partition, Partition>> work;
    for (const Partition& lambda : enumerate_partitions(8, 8))
        for (const Partition& cls : enumerate_partitions(8, 8))
            work.emplace_back(lambda, cls);
    std::vector<Int> expected(work.size());
    for (std::size_t i = 0; i < work.size(); ++i)
        expected[i] = serial.character(work[i].first, work[i].second);

    CharacterCache shared;
    std::atomic<bool> mismatch{false};
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < work.size(); i += 4)
                if (shared.character(work[i].first, work[i].second) != expected[i])
                    mismatch = true;
            // second pass hits the now-warm cache
            for (std::size_t i = static_cast<std::size_t>(w); i < work.size(); i += 4)
                if (shared.character(work[i].first, work[i].second) != expected[i])
                    mismatch = true;
        });
    for (auto& t : pool)
        t.join();
    CHECK_FALSE(mismatch.load());
    CHECK(shared.entries() >= work.size());
}
