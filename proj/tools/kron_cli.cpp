// Command-line surface for the library: exact coefficients, KRON
// enumeration, polytope construction, density-operator sampling against a
// hull, spectrum-estimation tables, generator extraction and the
// falsification suites. All stochastic commands are deterministic per
// --seed; structured output is JSON or CSV with stable ordering.

#include <sys/file.h>
#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kron/density.hpp"
#include "kron/estimation.hpp"
#include "kron/io.hpp"
#include "kron/kronecker.hpp"
#include "kron/polytope.hpp"
#include "kron/random.hpp"
#include "kron/schur.hpp"
#include "kron/witness.hpp"

namespace {

using namespace kron;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;
constexpr int kExitConsistency = 4;
constexpr int kExitFalsified = 5;

struct GlobalOpts {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string cache_path;
    std::string out_path;
};

/// Advisory exclusive lock; a second concurrent invocation simply runs
/// without the cache instead of blocking or corrupting it.
class CacheSession {
public:
    CacheSession(const CacheSession&) = delete;

    explicit CacheSession(const std::string& path) : path_(path) {
        if (path_.empty())
            return;
        fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT, 0644);
        if (fd_ < 0)
            throw io_error("cannot open cache file '" + path_ + "'");
        if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
            std::cerr << "cache file busy; continuing without cache\n";
            ::close(fd_);
            fd_ = -1;
            path_.clear();
            return;
        }
        try {
            std::ifstream probe(path_);
            if (probe.peek() != std::ifstream::traits_type::eof())
                CacheFile::load(path_);
        } catch (...) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
            throw;
        }
    }

    ~CacheSession() {
        if (path_.empty())
            return;
        try {
            CacheFile::save(path_);
        } catch (const std::exception& e) {
            std::cerr << "cache save failed: " << e.what() << "\n";
        }
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

private:
    std::string path_;
    int fd_ = -1;
};

void emit(const GlobalOpts& opts, const std::string& content) {
    if (opts.out_path.empty())
        std::cout << content;
    else
        write_text_file(opts.out_path, content);
}

std::vector<Spectrum> random_spectra(int d, int count, std::uint64_t seed) {
    std::vector<Spectrum> out;
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i) * 1000003 + d));
        std::vector<double> p(static_cast<std::size_t>(d));
        double sum = 0;
        for (double& v : p) {
            v = -std::log(1.0 - rng.uniform());
            sum += v;
        }
        for (double& v : p)
            v /= sum;
        std::sort(p.begin(), p.end(), std::greater<>());
        out.emplace_back(std::move(p));
    }
    return out;
}

int cmd_coeff(const std::string& mu, const std::string& nu, const std::string& lambda) {
    Int g = kronecker_coefficient(parse_partition(mu), parse_partition(nu),
                                  parse_partition(lambda));
    std::cout << g.str() << "\n";
    return kExitOk;
}

int cmd_enumerate(const GlobalOpts& opts, long long k, const KronBounds& bounds) {
    KronSet set = enumerate_kron(k, bounds, opts.threads);
    emit(opts, kron_set_to_json(set).dump(2) + "\n");
    return kExitOk;
}

int cmd_generators(const GlobalOpts& opts, long long max_boxes, const KronBounds& bounds) {
    KronSet set = enumerate_kron_upto(max_boxes, bounds, opts.threads);
    KronSet gens{set.bounds, set.max_boxes, extract_generators(set)};
    emit(opts, kron_set_to_json(gens, "generators").dump(2) + "\n");
    std::cout << gens.triples.size() << " generator candidates up to " << max_boxes
              << " boxes\n";
    return kExitOk;
}

int cmd_polytope(const GlobalOpts& opts, long long max_boxes, const KronBounds& bounds) {
    KronSet set = enumerate_kron_upto(max_boxes, bounds, opts.threads);
    PolytopeV poly = build_polytope(set);
    emit(opts, polytope_to_json(poly).dump(2) + "\n");
    std::cout << poly.vertices.size() << " vertices (K=" << max_boxes << ", ambient dim "
              << poly.ambient_dim << ", affine dim " << poly.affine_dim << ")\n";
    return kExitOk;
}

int cmd_sample(const GlobalOpts& opts, long long trials, int m, int n,
               const std::string& hull_path) {
    PolytopeV poly = polytope_from_json(nlohmann::json::parse(read_text_file(hull_path)));
    if (poly.bounds.m != m || poly.bounds.n != n || poly.bounds.mn_bound != m * n)
        throw consistency_error("hull bounds do not match the requested (m, n)");
    struct Row {
        std::uint64_t seed;
        SpectralTriple st;
        double distance;
    };
    std::vector<std::optional<Row>> rows(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), opts.threads, [&](std::size_t i) {
        std::uint64_t trial_seed = derive_seed(opts.seed, i);
        DensityOperator rho = random_density(m * n, trial_seed);
        SpectralTriple st = spectral_triple(rho, m, n);
        Membership mem = membership(st, poly);
        rows[i] = Row{trial_seed, std::move(st), mem.distance};
    });

    std::ostringstream csv;
    csv << "seed,m,n";
    for (int i = 1; i <= m; ++i)
        csv << ",rA" << i;
    for (int i = 1; i <= n; ++i)
        csv << ",rB" << i;
    for (int i = 1; i <= m * n; ++i)
        csv << ",rAB" << i;
    csv << ",hull_distance\n";
    double max_distance = 0;
    long long exceed = 0;
    for (const auto& row : rows) {
        csv << row->seed << "," << m << "," << n;
        for (double v : row->st.rA.probs())
            csv << "," << format_double(v);
        for (double v : row->st.rB.probs())
            csv << "," << format_double(v);
        for (double v : row->st.rAB.probs())
            csv << "," << format_double(v);
        csv << "," << format_double(row->distance) << "\n";
        max_distance = std::max(max_distance, row->distance);
        if (row->distance > tolerances().containment)
            ++exceed;
    }
    emit(opts, csv.str());
    std::cout << "trials=" << trials << " max_distance=" << format_double(max_distance)
              << " exceeding_tolerance=" << exceed << " tolerance="
              << format_double(tolerances().containment) << "\n";
    return kExitOk;
}

int cmd_estimate(const std::string& spec_text, long long k_max) {
    Spectrum r = parse_spectrum(spec_text);
    std::vector<long long> ks;
    for (long long k = 1; k <= k_max; ++k)
        ks.push_back(k);
    ConvergenceResult conv = estimation_convergence(r, ks);
    std::cout << "k lambda_star l1_distance bound_check\n";
    for (const ConvergenceRow& row : conv.rows) {
        bool ok = row.prob <= row.bound + tolerances().bound_slack;
        std::cout << row.k << " " << to_string(row.lambda_star) << " " << format_double(row.l1)
                  << " " << (ok ? "pass" : "FAIL") << "\n";
        if (!ok)
            throw falsification_error("estimation bound violated at k=" + std::to_string(row.k));
    }
    std::cout << "fitted_c=" << format_double(conv.fitted_c) << "\n";
    return kExitOk;
}

int check_semigroup_suite(long long combined_boxes, const KronBounds& bounds, unsigned threads) {
    std::vector<KronTriple> all =
        enumerate_kron_upto(combined_boxes - 1, bounds, threads).triples;
    long long pairs = 0;
    for (const KronTriple& a : all)
        for (const KronTriple& b : all) {
            if (a.mu.size() + b.mu.size() > combined_boxes)
                continue;
            check_semigroup(a, b); // throws falsification_error on g = 0
            ++pairs;
        }
    std::cout << "[ok] semigroup closure: " << pairs << " pairs with combined size <= "
              << combined_boxes << "\n";
    return kExitOk;
}

int check_stability_suite(long long max_boxes, const KronBounds& bounds, unsigned threads) {
    long long checks = 0;
    for (const KronTriple& t : enumerate_kron_upto(max_boxes, bounds, threads).triples)
        for (long long n : {2ll, 3ll}) {
            if (!check_stability(t, n))
                throw falsification_error("stability failed at N=" + std::to_string(n) + " for " +
                                          to_string(t));
            ++checks;
        }
    std::cout << "[ok] stability: " << checks << " scaled triples, k <= " << max_boxes << "\n";
    return kExitOk;
}

int check_entropy_suite(long long max_boxes, const KronBounds& bounds, unsigned threads) {
    long long checks = 0;
    for (const KronTriple& t : enumerate_kron_upto(max_boxes, bounds, threads).triples) {
        EntropyCheck e = entropy_check(t);
        if (!e.holds)
            throw falsification_error("entropy relations failed for " + to_string(t));
        ++checks;
    }
    std::cout << "[ok] entropy relations: " << checks << " triples, k <= " << max_boxes << "\n";
    return kExitOk;
}

int check_pinsker_suite(std::uint64_t seed) {
    long long checks = 0;
    for (int d = 2; d <= 6; ++d)
        for (int i = 0; i < 2500; ++i) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(d) * 1000000 + i));
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
            std::vector<double> p = draw(), q = draw();
            if (!check_pinsker(p, q))
                throw falsification_error("Pinsker inequality failed");
            ++checks;
        }
    std::cout << "[ok] Pinsker inequality: " << checks << " random pairs\n";
    return kExitOk;
}

int check_bound_suite(std::uint64_t seed) {
    long long checks = 0;
    for (int d = 2; d <= 3; ++d)
        for (const Spectrum& r : random_spectra(d, 20, seed))
            for (long long k = 1; k <= 10; ++k)
                for (const Partition& lambda : enumerate_partitions(k, d)) {
                    double prob = schur_weyl_prob(lambda, r, k);
                    double bound = estimation_bound(lambda, r, k);
                    if (prob > bound + tolerances().bound_slack)
                        throw falsification_error("estimation bound violated for " +
                                                  to_string(lambda));
                    ++checks;
                }
    std::cout << "[ok] estimation bound: " << checks << " (lambda, spectrum) pairs\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Kronecker-coefficient semigroup and admissible-spectra toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand name

    GlobalOpts opts;
    app.add_option("--seed", opts.seed, "Seed for all stochastic commands");
    app.add_option("--threads", opts.threads, "Worker thread count");
    app.add_option("--cache", opts.cache_path, "Persistent character/coefficient cache file");
    app.add_option("--out", opts.out_path, "Output path (stdout if omitted)");
    Tolerances& tol = tolerances();
    app.add_option("--tol-spectrum-sum", tol.spectrum_sum, "Spectrum sum tolerance");
    app.add_option("--tol-normalization", tol.normalization, "Outcome completeness tolerance");
    app.add_option("--tol-membership", tol.membership, "Floating LP feasibility slack");
    app.add_option("--tol-containment", tol.containment, "Sampled-triple hull distance tolerance");
    app.add_option("--tol-pinsker", tol.pinsker_slack, "Pinsker check slack");
    app.add_option("--tol-bound", tol.bound_slack, "Estimation bound slack");

    KronBounds bounds;
    bool mn_given = false;
    auto add_bounds = [&](CLI::App* cmd) {
        cmd->add_option("-m", bounds.m, "Row bound for mu")->check(CLI::PositiveNumber);
        cmd->add_option("-n", bounds.n, "Row bound for nu")->check(CLI::PositiveNumber);
        cmd->add_option("--mn-bound", bounds.mn_bound, "Row bound for lambda (default m*n)")
            ->check(CLI::PositiveNumber)
            ->each([&](const std::string&) { mn_given = true; });
    };

    std::string mu_text, nu_text, lambda_text;
    CLI::App* coeff = app.add_subcommand("coeff", "Kronecker coefficient of a diagram triple");
    coeff->add_option("mu", mu_text, "First diagram, e.g. 2,1")->required();
    coeff->add_option("nu", nu_text, "Second diagram")->required();
    coeff->add_option("lambda", lambda_text, "Third diagram")->required();

    long long boxes = 1;
    CLI::App* enumerate = app.add_subcommand("enumerate", "Nonzero triples of size exactly k");
    enumerate->add_option("-k", boxes, "Box count")->required();
    add_bounds(enumerate);

    long long max_boxes = 1;
    CLI::App* generators =
        app.add_subcommand("generators", "Indecomposable triple candidates up to K boxes");
    generators->add_option("-K", max_boxes, "Box budget")->check(CLI::PositiveNumber)->required();
    add_bounds(generators);

    CLI::App* polytope = app.add_subcommand("polytope", "Hull of normalized triples up to K boxes");
    polytope->add_option("-K", max_boxes, "Box budget")->check(CLI::PositiveNumber)->required();
    add_bounds(polytope);

    long long trials = 0;
    std::string hull_path;
    CLI::App* sample =
        app.add_subcommand("sample", "Random densities, spectral triples and hull distances");
    sample->add_option("--trials", trials, "Number of sampled operators")->required();
    sample->add_option("-m", bounds.m, "Dimension of system A")->check(CLI::PositiveNumber);
    sample->add_option("-n", bounds.n, "Dimension of system B")->check(CLI::PositiveNumber);
    sample->add_option("--hull", hull_path, "Polytope JSON to test against")->required();

    std::string spec_text;
    long long k_max = 16;
    CLI::App* estimate = app.add_subcommand("estimate", "Spectrum-estimation convergence table");
    estimate->add_option("--spec", spec_text, "Target spectrum, e.g. 0.7,0.3")->required();
    estimate->add_option("--kmax", k_max, "Largest copy count")->check(CLI::PositiveNumber);

    long long semigroup_boxes = 8, stability_boxes = 5, entropy_boxes = 8;
    CLI::App* check = app.add_subcommand("check", "Run the falsification suites");
    std::vector<std::string> suites;
    check->add_option("--suite", suites,
                      "Subset to run: semigroup stability entropy pinsker bound");
    check->add_option("--semigroup-boxes", semigroup_boxes, "Combined size limit for pairs");
    check->add_option("--stability-boxes", stability_boxes, "Size limit for scaling checks");
    check->add_option("--entropy-boxes", entropy_boxes, "Size limit for entropy checks");
    add_bounds(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (!mn_given)
            bounds.mn_bound = bounds.m * bounds.n;
        for (double t : {tol.spectrum_sum, tol.normalization, tol.membership, tol.containment,
                         tol.pinsker_slack, tol.bound_slack})
            if (!(t > 0))
                throw std::invalid_argument("tolerances must be positive");
        CacheSession cache(opts.cache_path);
        if (coeff->parsed())
            return cmd_coeff(mu_text, nu_text, lambda_text);
        if (enumerate->parsed())
            return cmd_enumerate(opts, boxes, bounds);
        if (generators->parsed())
            return cmd_generators(opts, max_boxes, bounds);
        if (polytope->parsed())
            return cmd_polytope(opts, max_boxes, bounds);
        if (sample->parsed())
            return cmd_sample(opts, trials, bounds.m, bounds.n, hull_path);
        if (estimate->parsed())
            return cmd_estimate(spec_text, k_max);
        if (check->parsed()) {
            auto wants = [&suites](const char* name) {
                return suites.empty() || std::find(suites.begin(), suites.end(), name) != suites.end();
            };
            if (wants("semigroup"))
                check_semigroup_suite(semigroup_boxes, bounds, opts.threads);
            if (wants("stability"))
                check_stability_suite(stability_boxes, bounds, opts.threads);
            if (wants("entropy"))
                check_entropy_suite(entropy_boxes, bounds, opts.threads);
            if (wants("pinsker"))
                check_pinsker_suite(opts.seed);
            if (wants("bound"))
                check_bound_suite(opts.seed);
            return kExitOk;
        }
    } catch (const falsification_error& e) {
        std::cerr << "FALSIFICATION: " << e.what() << "\n";
        return kExitFalsified;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const consistency_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConsistency;
    }
    return kExitOk;
}
