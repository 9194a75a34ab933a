#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "kron/characters.hpp"
#include "kron/errors.hpp"
#include "kron/kronecker.hpp"
#include "kron/polytope.hpp"
#include "kron/schur.hpp"

namespace kron {

/// Floating output convention: 12 significant digits everywhere.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline Spectrum parse_spectrum(const std::string& text) {
    std::vector<double> probs;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            probs.push_back(std::stod(tok, &used));
            if (used != tok.size())
                throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid spectrum text: '" + text + "'");
        }
    }
    return Spectrum(std::move(probs));
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write '" + path + "'");
    out << content;
    if (!out)
        throw io_error("write failed for '" + path + "'");
}

// --- KRON set -------------------------------------------------------------

inline nlohmann::json triple_to_json(const KronTriple& t) {
    nlohmann::json j;
    j["mu"] = to_string(t.mu);
    j["nu"] = to_string(t.nu);
    j["lambda"] = to_string(t.lambda);
    if (t.g <= Int(std::numeric_limits<std::int64_t>::max()))
        j["g"] = t.g.convert_to<std::int64_t>();
    else
        j["g"] = t.g.str();
    return j;
}

inline KronTriple triple_from_json(const nlohmann::json& j) {
    KronTriple t;
    t.mu = parse_partition(j.at("mu").get<std::string>());
    t.nu = parse_partition(j.at("nu").get<std::string>());
    t.lambda = parse_partition(j.at("lambda").get<std::string>());
    if (j.at("g").is_string())
        t.g = Int(j.at("g").get<std::string>());
    else
        t.g = j.at("g").get<std::int64_t>();
    return t;
}

inline nlohmann::json kron_set_to_json(const KronSet& set, const char* list_key = "triples") {
    nlohmann::json j;
    j["bounds"] = {set.bounds.m, set.bounds.n, set.bounds.mn_bound};
    j["max_boxes"] = set.max_boxes;
    nlohmann::json arr = nlohmann::json::array();
    for (const KronTriple& t : set.triples)
        arr.push_back(triple_to_json(t));
    j[list_key] = std::move(arr);
    return j;
}

inline KronSet kron_set_from_json(const nlohmann::json& j, const char* list_key = "triples") {
    KronSet set;
    set.bounds = {j.at("bounds").at(0).get<int>(), j.at("bounds").at(1).get<int>(),
                  j.at("bounds").at(2).get<int>()};
    set.max_boxes = j.at("max_boxes").get<long long>();
    for (const auto& item : j.at(list_key))
        set.triples.push_back(triple_from_json(item));
    return set;
}

// --- polytope ---------------------------------------------------------------

inline nlohmann::json polytope_to_json(const PolytopeV& poly) {
    nlohmann::json j;
    j["bounds"] = {poly.bounds.m, poly.bounds.n, poly.bounds.mn_bound};
    j["max_boxes"] = poly.max_boxes;
    j["ambient_dim"] = poly.ambient_dim;
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : poly.vertices) {
        nlohmann::json row = nlohmann::json::array();
        for (const Rational& c : v)
            row.push_back(to_string(c));
        verts.push_back(std::move(row));
    }
    j["vertices"] = std::move(verts);
    return j;
}

inline PolytopeV polytope_from_json(const nlohmann::json& j) {
    PolytopeV poly;
    poly.bounds = {j.at("bounds").at(0).get<int>(), j.at("bounds").at(1).get<int>(),
                   j.at("bounds").at(2).get<int>()};
    poly.max_boxes = j.at("max_boxes").get<long long>();
    for (const auto& row : j.at("vertices")) {
        std::vector<Rational> v;
        for (const auto& c : row)
            v.push_back(parse_rational(c.get<std::string>()));
        poly.vertices.push_back(std::move(v));
    }
    if (poly.vertices.empty())
        throw io_error("polytope file has no vertices");
    poly.finalize();
    if (poly.ambient_dim != j.at("ambient_dim").get<int>())
        throw consistency_error("polytope file ambient_dim disagrees with its vertices");
    return poly;
}

// --- cache file ---------------------------------------------------------------

/// Persistent memo of character and coefficient values. Advisory only:
/// everything recomputes identically without it. On load a random sample
/// of entries is recomputed and compared, so a stale or corrupted file
/// fails fast instead of poisoning results.
struct CacheFile {
    static constexpr int version = 1;

    static void save(const std::string& path) {
        nlohmann::json j;
        j["version"] = version;
        std::vector<std::array<std::string, 3>> chars;
        for (const auto& [lambda, cycles, value] : character_cache().snapshot())
            chars.push_back({to_string(lambda), to_string(cycles), value.str()});
        std::sort(chars.begin(), chars.end());
        nlohmann::json carr = nlohmann::json::array();
        for (const auto& row : chars)
            carr.push_back({row[0], row[1], row[2]});
        j["characters"] = std::move(carr);

        std::vector<std::array<std::string, 4>> coeffs;
        for (const auto& [mu, nu, lambda, g] : kron_cache().snapshot())
            coeffs.push_back({to_string(mu), to_string(nu), to_string(lambda), g.str()});
        std::sort(coeffs.begin(), coeffs.end());
        nlohmann::json karr = nlohmann::json::array();
        for (const auto& row : coeffs)
            karr.push_back({row[0], row[1], row[2], row[3]});
        j["kron"] = std::move(karr);
        write_text_file(path, j.dump(2) + "\n");
    }

    /// Load and import entries, spot-checking up to `verify_samples`
    /// random entries against fresh computation.
    static void load(const std::string& path, int verify_samples = 100) {
        nlohmann::json j = nlohmann::json::parse(read_text_file(path));
        if (j.at("version").get<int>() != version)
            throw consistency_error("cache file version mismatch");
        struct CharEntry {
            Partition lambda, cycles;
            Int value;
        };
        struct KronEntry {
            Partition mu, nu, lambda;
            Int g;
        };
        std::vector<CharEntry> chars;
        for (const auto& row : j.at("characters"))
            chars.push_back({parse_partition(row.at(0).get<std::string>()),
                             parse_partition(row.at(1).get<std::string>()),
                             Int(row.at(2).get<std::string>())});
        std::vector<KronEntry> coeffs;
        for (const auto& row : j.at("kron"))
            coeffs.push_back({parse_partition(row.at(0).get<std::string>()),
                              parse_partition(row.at(1).get<std::string>()),
                              parse_partition(row.at(2).get<std::string>()),
                              Int(row.at(3).get<std::string>())});

        std::mt19937_64 rng(0x5eed5eedull); // fixed: verification must not depend on --seed
        auto sample = [&rng](std::size_t n, int want) {
            std::vector<std::size_t> idx(n);
            for (std::size_t i = 0; i < n; ++i)
                idx[i] = i;
            std::shuffle(idx.begin(), idx.end(), rng);
            if (static_cast<std::size_t>(want) < n)
                idx.resize(static_cast<std::size_t>(want));
            return idx;
        };
        for (std::size_t i : sample(chars.size(), verify_samples))
            if (character(chars[i].lambda, chars[i].cycles) != chars[i].value)
                throw consistency_error("cache verification failed for character entry");
        for (std::size_t i : sample(coeffs.size(), verify_samples))
            if (kronecker_coefficient(coeffs[i].mu, coeffs[i].nu, coeffs[i].lambda) != coeffs[i].g)
                throw consistency_error("cache verification failed for coefficient entry");

        for (const auto& e : chars)
            character_cache().import(e.lambda, e.cycles, e.value);
        for (const auto& e : coeffs)
            kron_cache().insert(e.mu, e.nu, e.lambda, e.g);
    }
};

} // namespace kron
