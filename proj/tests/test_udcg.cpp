#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "scma/udcg.hpp"

using namespace scma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DesignParams constellation_params(std::uint32_t M, std::uint32_t r, double a, double t,
                                  std::vector<double> eps) {
    DesignParams p;
    p.M = M;
    p.r = r;
    p.a = a;
    p.t = t;
    p.epsilons = std::move(eps);
    return p;
}

// Oracle-style direct point evaluation, independent of build_udcg's loops.
cplx expected_point(double amp, std::uint32_t l, std::uint32_t ring, double theta) {
    return std::polar(amp, 2.0 * kPi * l / ring + theta);
}

}  // namespace

TEST_CASE("single-ring M=8 r=3 group has unit radius and +-pi/16 rotations") {
    const auto g = build_udcg(constellation_params(8, 3, 0.5, 0.0, {1.0, 1.0}));
    REQUIRE(g.n_constellations() == 3);
    REQUIRE(g.amplitudes == std::vector<double>{0.5});
    REQUIRE_THAT(g.thetas[0], WithinAbs(0.0, 0.0));
    REQUIRE_THAT(g.thetas[1], WithinAbs(-kPi / 16.0, 1e-15));
    REQUIRE_THAT(g.thetas[2], WithinAbs(kPi / 16.0, 1e-15));
    for (std::uint32_t l = 0; l < 8; ++l) {
        REQUIRE_THAT(std::abs(g.points[0][l] - expected_point(0.5, l, 8, 0.0)), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(g.points[0][l]), WithinAbs(0.5, 1e-15));
    }
}

TEST_CASE("M=4 r=2 collapses to a single amplitude with +-pi/8 rotations") {
    const auto g = build_udcg(constellation_params(4, 2, 0.5, 0.0, {1.0, 1.0}));
    REQUIRE(g.V() == 0);
    REQUIRE(g.amplitudes == std::vector<double>{0.5});
    REQUIRE_THAT(g.thetas[1], WithinAbs(-kPi / 8.0, 1e-15));
    REQUIRE_THAT(g.thetas[2], WithinAbs(kPi / 8.0, 1e-15));
}

TEST_CASE("two-ring M=8 r=2 group enumerates amplitude-major") {
    const auto g = build_udcg(constellation_params(8, 2, 0.5, 0.7, {1.0, 1.0}));
    REQUIRE(g.amplitudes == std::vector<double>{0.5, 1.2});
    REQUIRE(g.points[0].size() == 8);
    // Point index p = v * 2^r + l.
    for (std::uint32_t v = 0; v <= 1; ++v)
        for (std::uint32_t l = 0; l < 4; ++l) {
            const cplx got = g.points[0][v * 4 + l];
            REQUIRE_THAT(std::abs(got - expected_point(v ? 1.2 : 0.5, l, 4, 0.0)), WithinAbs(0.0, 1e-15));
        }
    // Every point magnitude lies on one of the rings, rotated copies included.
    for (const auto& c : g.points)
        for (const cplx& pt : c) {
            const double mag = std::abs(pt);
            REQUIRE((std::abs(mag - 0.5) < 1e-12 || std::abs(mag - 1.2) < 1e-12));
        }
    // Rotated constellations are elementwise rotations of the base.
    for (std::size_t n = 1; n < g.n_constellations(); ++n)
        for (std::uint32_t m = 0; m < 8; ++m)
            REQUIRE_THAT(std::abs(g.points[n][m] - g.points[0][m] * std::polar(1.0, g.thetas[n])),
                         WithinAbs(0.0, 1e-12));
}

TEST_CASE("invalid constellation parameters are rejected") {
    REQUIRE_THROWS_AS(build_udcg(constellation_params(6, 1, 0.5, 0.1, {1.0, 1.0})), std::invalid_argument);
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 4, 0.5, 0.1, {1.0, 1.0})), std::invalid_argument);
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 0, 0.5, 0.1, {1.0, 1.0})), std::invalid_argument);
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 2, -0.5, 0.1, {1.0, 1.0})), std::invalid_argument);
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 2, 0.5, -0.1, {1.0, 1.0})), std::invalid_argument);
    // Multi-ring layout with a zero step collapses rings.
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 2, 0.5, 0.0, {1.0, 1.0})), std::invalid_argument);
    // Pairing violations.
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 2, 0.5, 0.1, {1.0, 2.0})), std::invalid_argument);
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 2, 0.5, 0.1, {2.0, 2.0, 1.0, 1.0})),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(build_udcg(constellation_params(8, 2, 0.5, 0.1, {0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("superimpose enumerates M^(N+1) sums with a consistent index map") {
    const auto g4 = build_udcg(constellation_params(4, 2, 0.5, 0.0, {1.0, 1.0}));
    const auto s4 = superimpose(g4);
    REQUIRE(s4.points.size() == 64);

    const auto g8 = build_udcg(constellation_params(8, 3, 0.5, 0.0, {1.0, 1.0}));
    REQUIRE(superimpose(g8).points.size() == 512);

    for (std::size_t p = 0; p < s4.points.size(); ++p) {
        const auto idx = s4.index_tuple(p);
        cplx sum{0.0, 0.0};
        for (std::size_t n = 0; n < idx.size(); ++n) sum += g4.points[n][idx[n]];
        REQUIRE_THAT(std::abs(sum - s4.points[p]), WithinAbs(0.0, 1e-12));
    }

    double energy = 0.0;
    for (const cplx& c : s4.points) energy += std::norm(c);
    REQUIRE_THAT(energy, WithinRel(48.0, 1e-12));
}

TEST_CASE("superimpose rejects enumerations beyond the cap") {
    const auto g = build_udcg(constellation_params(16, 2, 0.5, 0.3, {1.0, 1.0, 2.0, 2.0, 3.0, 3.0}));
    // 16^7 = 2^28 > 2^24 default cap.
    REQUIRE_THROWS_AS(superimpose(g), std::invalid_argument);
    REQUIRE_NOTHROW(superimpose(build_udcg(constellation_params(4, 2, 0.5, 0.0, {1.0, 1.0}))));
}

TEST_CASE("Lemma-3 group is uniquely decodable, duplicated constellation is not") {
    const auto g = build_udcg(constellation_params(4, 2, 0.5, 0.0, {1.0, 1.0}));
    const auto res = check_uniquely_decodable(superimpose(g), 1e-9);
    REQUIRE(res.is_udc);
    REQUIRE(res.min_distance > 1e-9);
    REQUIRE_FALSE(res.witness.has_value());

    // (C_0, C_1, C_1): swapping the two identical constellations' points
    // yields equal sums from distinct tuples.
    ConstellationGroup dup = g;
    dup.points[2] = dup.points[1];
    dup.thetas[2] = dup.thetas[1];
    const auto sup = superimpose(dup);
    const auto bad = check_uniquely_decodable(sup, 1e-9);
    REQUIRE_FALSE(bad.is_udc);
    REQUIRE(bad.witness.has_value());
    const auto [p1, p2] = *bad.witness;
    REQUIRE(p1 != p2);
    REQUIRE_THAT(std::abs(sup.points[p1] - sup.points[p2]), WithinAbs(0.0, 1e-9));
    REQUIRE(sup.index_tuple(p1) != sup.index_tuple(p2));
}

TEST_CASE("degenerate inputs for the uniqueness check") {
    DesignParams p = constellation_params(2, 1, 0.5, 0.0, {});
    const auto g = build_udcg(p);  // N = 0: single constellation {a, -a}
    const auto res = check_uniquely_decodable(superimpose(g), 1e-9);
    REQUIRE(res.is_udc);

    SuperimposedConstellation one;
    one.M = 1;
    one.n_groups = 1;
    one.points = {cplx{1.0, 0.0}};
    const auto single = check_uniquely_decodable(one, 1e-9);
    REQUIRE(single.is_udc);
    REQUIRE(std::isinf(single.min_distance));
}

TEST_CASE("Proposition 1 property: base plus +-pi/2^(r+eps) rotations stay decodable") {
    for (const std::uint32_t M : {4u, 8u}) {
        for (std::uint32_t r = 1; r <= int_log2(M); ++r) {
            for (const double eps : {1.0, 2.0, 3.0}) {
                const double t = (M / (1u << r) > 1) ? 0.45 : 0.0;
                const auto g = build_udcg(constellation_params(M, r, 0.5, t, {eps, eps}));
                const auto res = check_uniquely_decodable(superimpose(g), 1e-9);
                INFO("M=" << M << " r=" << r << " eps=" << eps);
                REQUIRE(res.is_udc);
            }
        }
    }
}

TEST_CASE("Proposition 2 property: distinct rotation exponents give a decodable pair") {
    // Pairs C_1, C_2 with theta = +-pi/2^(r+eps1), +-pi/2^(r+eps2), eps1 != eps2 >= 0.
    for (const auto& [eps1, eps2] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {1.0, 2.0}, {0.0, 2.0}}) {
        for (const double s1 : {-1.0, 1.0}) {
            for (const double s2 : {-1.0, 1.0}) {
                const std::uint32_t M = 8, r = 2;
                const auto base = build_udcg(constellation_params(M, r, 0.5, 0.45, {1.0, 1.0}));
                ConstellationGroup pair;
                pair.M = M;
                pair.r = r;
                pair.amplitudes = base.amplitudes;
                pair.thetas = {s1 * kPi / std::pow(2.0, r + eps1), s2 * kPi / std::pow(2.0, r + eps2)};
                pair.points.resize(2);
                for (int n = 0; n < 2; ++n) {
                    pair.points[n].resize(M);
                    for (std::uint32_t m = 0; m < M; ++m)
                        pair.points[n][m] = base.points[0][m] * std::polar(1.0, pair.thetas[n]);
                }
                const auto res = check_uniquely_decodable(superimpose(pair), 1e-9);
                INFO("eps=(" << eps1 << "," << eps2 << ") signs=(" << s1 << "," << s2 << ")");
                REQUIRE(res.is_udc);
            }
        }
    }
}

TEST_CASE("Lemma 1 property: arbitrary positive amplitude ladders stay decodable") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        for (const std::uint32_t r : {1u, 2u}) {
            const std::uint32_t M = 8;
            const std::uint32_t ring = 1u << r;
            const std::uint32_t V = M / ring - 1;
            std::vector<double> amps(V + 1);
            double acc = 0.1 + 0.9 * (rng() >> 11) * 0x1p-53;
            for (auto& a : amps) {
                a = acc;
                acc += 0.05 + 1.5 * (rng() >> 11) * 0x1p-53;
            }
            ConstellationGroup g;
            g.M = M;
            g.r = r;
            g.amplitudes = amps;
            g.thetas = {0.0, -kPi / (2.0 * ring), kPi / (2.0 * ring)};  // eps = 1
            g.points.resize(3);
            for (int n = 0; n < 3; ++n) {
                g.points[n].resize(M);
                for (std::uint32_t v = 0; v <= V; ++v)
                    for (std::uint32_t l = 0; l < ring; ++l)
                        g.points[n][v * ring + l] = std::polar(amps[v], 2.0 * kPi * l / ring + g.thetas[n]);
            }
            const auto res = check_uniquely_decodable(superimpose(g), 1e-9);
            INFO("r=" << r << " amps[0]=" << amps[0]);
            REQUIRE(res.is_udc);
        }
    }
}

TEST_CASE("rotation covariance: a common rotation preserves all pairwise distances") {
    const auto g = build_udcg(constellation_params(4, 2, 0.5, 0.0, {1.0, 1.0}));
    ConstellationGroup rot = g;
    const cplx phase = std::polar(1.0, 0.7321);
    for (auto& c : rot.points)
        for (auto& pt : c) pt *= phase;
    const auto s0 = superimpose(g);
    const auto s1 = superimpose(rot);
    REQUIRE(s0.points.size() == s1.points.size());
    for (std::size_t i = 0; i < s0.points.size(); ++i)
        for (std::size_t j = i + 1; j < s0.points.size(); ++j)
            REQUIRE_THAT(std::abs(s0.points[i] - s0.points[j]), WithinAbs(std::abs(s1.points[i] - s1.points[j]), 1e-12));
}
