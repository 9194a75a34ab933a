// Acceptance suite: every shipped guarantee exercised end to end, one
// pass/fail line per criterion. Run as: acceptance <kron-binary> <tmpdir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kron/density.hpp"
#include "kron/estimation.hpp"
#include "kron/io.hpp"
#include "kron/kronecker.hpp"
#include "kron/polytope.hpp"
#include "kron/witness.hpp"

#include "oracles.hpp"

using namespace kron;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::string cli_binary;
std::string tmp_dir;

void report(int number, const std::string& name, bool pass, const std::string& detail,
            Clock::time_point started) {
    double secs = std::chrono::duration<double>(Clock::now() - started).count();
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] %2d %-28s %s (%.1fs)", pass ? "PASS" : "FAIL", number,
                  name.c_str(), detail.c_str(), secs);
    std::cout << line << std::endl;
    if (!pass)
        ++failures;
}

template <class Fn>
void criterion(int number, const std::string& name, Fn&& fn) {
    auto started = Clock::now();
    try {
        auto [pass, detail] = fn();
        report(number, name, pass, detail, started);
    } catch (const std::exception& e) {
        report(number, name, false, std::string("exception: ") + e.what(), started);
    }
}

const KronBounds kBounds{2, 2, 4};

std::vector<double> normalized_rows_padded(const Partition& p, int width) {
    return normalized_rows(p, width);
}

Spectrum random_spectrum(int d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> p(static_cast<std::size_t>(d));
    double sum = 0;
    for (double& v : p) {
        v = -std::log(1.0 - rng.uniform());
        sum += v;
    }
    for (double& v : p)
        v /= sum;
    std::sort(p.begin(), p.end(), std::greater<>());
    return Spectrum(std::move(p));
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    FILE* pipe = ::popen((cli_binary + " " + args + " 2>&1").c_str(), "r");
    if (!pipe)
        return -1;
    char buf[4096];
    std::string out;
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
        out.append(buf, got);
    int status = ::pclose(pipe);
    if (output)
        *output = out;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <kron-binary> <tmpdir>\n";
        return 2;
    }
    cli_binary = argv[1];
    tmp_dir = argv[2];
    std::filesystem::remove_all(tmp_dir);
    std::filesystem::create_directories(tmp_dir);

    criterion(1, "semigroup closure", [] {
        auto all = enumerate_kron_upto(7, kBounds, 2).triples;
        long long pairs = 0;
        for (const KronTriple& a : all)
            for (const KronTriple& b : all) {
                if (a.mu.size() + b.mu.size() > 8)
                    continue;
                check_semigroup(a, b); // throws on any violation
                ++pairs;
            }
        return std::pair(true, "pairs=" + std::to_string(pairs) + " violations=0");
    });

    criterion(2, "scaling stability", [] {
        long long checks = 0;
        for (const KronTriple& t : enumerate_kron_upto(5, kBounds, 2).triples)
            for (long long n : {2ll, 3ll}) {
                if (!check_stability(t, n))
                    return std::pair(false, "violation at " + to_string(t));
                ++checks;
            }
        return std::pair(true, "checks=" + std::to_string(checks) + " violations=0");
    });

    criterion(3, "character correctness", [] {
        long long compared = 0;
        for (int k = 1; k <= 5; ++k)
            for (const Partition& lambda : enumerate_partitions(k, k))
                for (const Partition& cls : enumerate_partitions(k, k)) {
                    if (character(lambda, cls) != Int(oracle::frobenius_character(lambda, cls)))
                        return std::pair(false, "oracle mismatch at " + to_string(lambda));
                    ++compared;
                }
        long long orth = 0;
        for (int k = 1; k <= 7; ++k) {
            auto shapes = enumerate_partitions(k, k);
            auto classes = conjugacy_classes(k);
            for (const Partition& mu : shapes)
                for (const Partition& nu : shapes) {
                    Int sum = 0;
                    for (const CycleType& c : classes)
                        sum += c.class_size * character(mu, c.cycles) * character(nu, c.cycles);
                    if (sum != (mu == nu ? factorial(k) : Int(0)))
                        return std::pair(false, "orthogonality failed at k=" + std::to_string(k));
                    ++orth;
                }
        }
        return std::pair(true, "oracle=" + std::to_string(compared) +
                                   " orthogonality=" + std::to_string(orth));
    });

    criterion(4, "coefficient identities", [] {
        long long checks = 0;
        for (int k = 1; k <= 6; ++k) {
            auto shapes = enumerate_partitions(k, k);
            Partition row(std::vector<int>{k});
            for (const Partition& mu : shapes)
                for (const Partition& nu : shapes) {
                    if (kronecker_coefficient(mu, nu, row) != (mu == nu ? Int(1) : Int(0)))
                        return std::pair(false, std::string("row identity failed"));
                    Int total = 0;
                    for (const Partition& lambda : shapes) {
                        Int g = kronecker_coefficient(mu, nu, lambda);
                        total += g * dim_sk(lambda);
                        if (g != kronecker_coefficient(nu, mu, lambda) ||
                            g != kronecker_coefficient(lambda, nu, mu) ||
                            g != kronecker_coefficient(mu, lambda, nu) ||
                            g != kronecker_coefficient(lambda, mu, nu) ||
                            g != kronecker_coefficient(nu, lambda, mu))
                            return std::pair(false, std::string("symmetry failed"));
                        ++checks;
                    }
                    if (total != dim_sk(mu) * dim_sk(nu))
                        return std::pair(false, std::string("sum rule failed"));
                }
        }
        return std::pair(true, "triples=" + std::to_string(checks) + " all exact");
    });

    criterion(5, "estimation bound", [] {
        long long checks = 0;
        for (int d = 2; d <= 3; ++d)
            for (int i = 0; i < 50; ++i) {
                Spectrum r = random_spectrum(d, 5000 + static_cast<std::uint64_t>(100 * d + i));
                for (long long k = 1; k <= 10; ++k)
                    for (const Partition& lambda : enumerate_partitions(k, d)) {
                        if (schur_weyl_prob(lambda, r, k) > estimation_bound(lambda, r, k) + 1e-10)
                            return std::pair(false, "bound violated at " + to_string(lambda));
                        ++checks;
                    }
            }
        return std::pair(true, "spectra=100 checks=" + std::to_string(checks) + " violations=0");
    });

    criterion(6, "outcome completeness", [] {
        double worst = 0;
        for (int d = 2; d <= 3; ++d)
            for (int i = 0; i < 50; ++i) {
                Spectrum r = random_spectrum(d, 6000 + static_cast<std::uint64_t>(100 * d + i));
                for (long long k = 1; k <= 8; ++k) {
                    double total = 0;
                    for (const Partition& lambda : enumerate_partitions(k, d))
                        total += schur_weyl_prob(lambda, r, k);
                    worst = std::max(worst, std::abs(total - 1.0));
                }
            }
        return std::pair(worst <= 1e-10, "spectra=100 worst |sum-1|=" + format_double(worst));
    });

    criterion(7, "estimation convergence", [] {
        std::vector<long long> ks;
        for (long long k = 4; k <= 64; ++k)
            ks.push_back(k);
        ConvergenceResult conv = estimation_convergence(Spectrum({0.7, 0.3}), ks);
        for (const ConvergenceRow& row : conv.rows)
            if (row.l1 > 2.0 / std::sqrt(static_cast<double>(row.k)))
                return std::pair(false, "distance above 2/sqrt(k) at k=" + std::to_string(row.k));
        return std::pair(true, "k=4..64 fitted_c=" + format_double(conv.fitted_c));
    });

    criterion(8, "sampled triples near hull", [] {
        PolytopeV hull = build_polytope(enumerate_kron_upto(12, kBounds, 2));
        if (hull.vertices.size() != 10)
            return std::pair(false,
                             "K=12 vertex count drifted: " + std::to_string(hull.vertices.size()));
        const int trials = 10000;
        std::vector<double> dist(trials);
        parallel_for(trials, 2, [&](std::size_t i) {
            DensityOperator rho = random_density(4, derive_seed(8080, i));
            dist[i] = membership(spectral_triple(rho, 2, 2), hull).distance;
        });
        double max_d = *std::max_element(dist.begin(), dist.end());
        return std::pair(max_d <= 0.02,
                         "trials=10000 max_distance=" + format_double(max_d) + " tol=0.02");
    });

    criterion(9, "witnesses and integer scaling", [] {
        auto triples = enumerate_kron_upto(4, kBounds, 2).triples;
        double worst = 0;
        double delta_fraction = 0; // achieved error over the guaranteed 3mn*sqrt(ln k / k)
        for (const KronTriple& t : triples) {
            SpectralTriple target{Spectrum(normalized_rows_padded(t.mu, 2)),
                                  Spectrum(normalized_rows_padded(t.nu, 2)),
                                  Spectrum(normalized_rows_padded(t.lambda, 4))};
            WitnessResult w = find_witness_state(target, 2, 2, 2000, 909, 200, 1e-4);
            worst = std::max(worst, w.error);
            double k = static_cast<double>(t.mu.size());
            if (k > 1)
                delta_fraction =
                    std::max(delta_fraction, w.error / (3.0 * 4 * std::sqrt(std::log(k) / k)));
            if (w.error > 1e-3)
                return std::pair(false, "witness error " + format_double(w.error) + " for " +
                                            to_string(t));
        }

        PolytopeV hull = build_polytope(enumerate_kron_upto(6, kBounds, 2));
        struct Fixture {
            std::vector<Rational> p;
            long long m;
        };
        std::vector<Fixture> fixtures = {
            {{1, 0, 1, 0, 1, 0, 0, 0}, 1},
            {{{1, 2}, {1, 2}, {1, 2}, {1, 2}, 1, 0, 0, 0}, 2},
            {{{2, 3}, {1, 3}, {2, 3}, {1, 3}, {2, 3}, {1, 3}, 0, 0}, 3},
        };
        for (const Fixture& f : fixtures) {
            CaratheodoryCert cert = caratheodory(f.p, hull);
            ScalingResult sc = find_scaling(f.p, kBounds, cert, 4);
            if (!sc.found || sc.m != f.m)
                return std::pair(false, "scaling fixture expected m=" + std::to_string(f.m));
        }
        return std::pair(true, "targets=" + std::to_string(triples.size()) +
                                   " worst_error=" + format_double(worst) +
                                   " delta_fraction=" + format_double(delta_fraction) +
                                   " scaling m=1,2,3");
    });

    criterion(10, "Caratheodory certificates", [] {
        PolytopeV hull = build_polytope(enumerate_kron_upto(8, kBounds, 2));
        std::mt19937_64 rng(1010);
        int decomposed = 0;
        std::size_t largest = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Rational> weights(hull.vertices.size());
            Rational total = 0;
            for (Rational& w : weights) {
                w = Rational(static_cast<long long>(rng() % 7));
                total += w;
            }
            if (total == 0)
                continue;
            std::vector<Rational> p(hull.vertices[0].size(), Rational(0));
            for (std::size_t j = 0; j < hull.vertices.size(); ++j)
                for (std::size_t c = 0; c < p.size(); ++c)
                    p[c] += weights[j] / total * hull.vertices[j][c];
            CaratheodoryCert cert = caratheodory(p, hull); // verifies reconstruction
            if (static_cast<int>(cert.generators.size()) > hull.affine_dim + 1)
                return std::pair(false, std::string("certificate larger than t+1"));
            largest = std::max(largest, cert.generators.size());
            ++decomposed;
        }
        return std::pair(true, "points=" + std::to_string(decomposed) + " max_terms=" +
                                   std::to_string(largest) + " (t+1=" +
                                   std::to_string(hull.affine_dim + 1) + ")");
    });

    criterion(11, "Pinsker inequality", [] {
        long long checks = 0;
        for (int d = 2; d <= 6; ++d)
            for (int i = 0; i < 2000; ++i) {
                Rng rng(derive_seed(1111, static_cast<std::uint64_t>(d) * 100000 + i));
                auto draw = [&rng, d] {
                    std::vector<double> p(static_cast<std::size_t>(d));
                    double sum = 0;
                    for (double& v : p) {
                        v = -std::log(1.0 - rng.uniform());
                        sum += v;
                    }
                    for (double& v : p)
                        v /= sum;
                    return p;
                };
                if (!check_pinsker(draw(), draw()))
                    return std::pair(false, "violation at d=" + std::to_string(d));
                ++checks;
            }
        return std::pair(true, "pairs=" + std::to_string(checks) + " violations=0");
    });

    criterion(12, "CLI determinism", [] {
        std::string hull = tmp_dir + "/hull.json";
        if (run_cli("polytope -K 6 --out " + hull) != 0)
            return std::pair(false, std::string("polytope run failed"));
        std::string out1, out2;
        if (run_cli("polytope -K 6 --out " + tmp_dir + "/hull2.json", &out1) != 0 ||
            run_cli("polytope -K 6 --out " + tmp_dir + "/hull3.json", &out2) != 0)
            return std::pair(false, std::string("polytope rerun failed"));
        if (slurp(tmp_dir + "/hull2.json") != slurp(tmp_dir + "/hull3.json") || out1 != out2)
            return std::pair(false, std::string("polytope output not byte-identical"));

        std::string base = " sample --trials 200 -m 2 -n 2 --seed 77 --hull " + hull + " --out ";
        if (run_cli(base + tmp_dir + "/a.csv --threads 1", &out1) != 0 ||
            run_cli(base + tmp_dir + "/b.csv --threads 2", &out2) != 0)
            return std::pair(false, std::string("sample run failed"));
        if (slurp(tmp_dir + "/a.csv") != slurp(tmp_dir + "/b.csv") || out1 != out2)
            return std::pair(false, std::string("sample output not byte-identical"));
        return std::pair(true, std::string("polytope K=6 and sample trials=200 byte-identical"));
    });

    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " + std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
