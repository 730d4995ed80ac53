#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scma/optimizer.hpp"

using namespace scma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DesignParams search_params(std::uint32_t M, std::uint32_t r) {
    DesignParams p;
    p.M = M;
    p.r = r;
    p.a = 0.5;
    p.t = 0.0;  // to be optimized
    p.epsilons = {1.0, 1.0};
    p.K = 4;
    p.J = 6;
    p.B = 2;
    return p;
}

SearchConfig cfg(GainCriterion crit) {
    SearchConfig c;
    c.t_ini = 0.0;
    c.t_end = 2.0;
    c.grid_step = 0.05;
    c.criterion = crit;
    return c;
}

/// Largest-gain run must be contiguous: rises, one maximal plateau, falls.
bool single_maximal_plateau(const std::vector<std::pair<double, double>>& trace) {
    double best = -1.0;
    for (const auto& [t, g] : trace) best = std::max(best, g);
    bool in = false, done = false;
    for (const auto& [t, g] : trace) {
        if (g == best) {
            if (done) return false;
            in = true;
        } else if (in) {
            done = true;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("step-size optima reproduce the reference design points") {
    struct Case {
        std::uint32_t M, r;
        GainCriterion crit;
        double expect;
    };
    const std::vector<Case> cases = {
        {4, 1, GainCriterion::superimposed, 1.15}, {8, 1, GainCriterion::superimposed, 0.95},
        {8, 1, GainCriterion::codebook, 1.00},     {8, 2, GainCriterion::superimposed, 0.60},
        {8, 2, GainCriterion::codebook, 0.70},     {16, 3, GainCriterion::superimposed, 0.85},
        {16, 3, GainCriterion::codebook, 0.40},
    };
    for (const auto& c : cases) {
        const auto res = optimize_step_size(search_params(c.M, c.r), cfg(c.crit));
        INFO("M=" << c.M << " r=" << c.r << (c.crit == GainCriterion::codebook ? " codebook" : " superimposed"));
        REQUIRE(res.searched);
        REQUIRE_THAT(res.t_star, WithinAbs(c.expect, 0.05 + 1e-12));
        REQUIRE(single_maximal_plateau(res.trace));
    }
}

TEST_CASE("trace covers the grid in order and reports the argmax gain") {
    const auto res = optimize_step_size(search_params(8, 2), cfg(GainCriterion::codebook));
    REQUIRE(res.trace.size() == 41);
    REQUIRE_THAT(res.trace.front().first, WithinAbs(0.0, 0.0));
    REQUIRE_THAT(res.trace.back().first, WithinAbs(2.0, 1e-12));
    double best = -1.0;
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
        REQUIRE(res.trace[i].first > res.trace[i - 1].first);
        best = std::max(best, res.trace[i].second);
    }
    best = std::max(best, res.trace.front().second);
    REQUIRE_THAT(res.gain_star, WithinRel(best, 1e-15));
    // A multi-ring group at t = 0 has gain 0 under both criteria.
    REQUIRE_THAT(res.trace.front().second, WithinAbs(0.0, 0.0));
}

TEST_CASE("V = 0 layouts skip the search with a notice") {
    const auto res = optimize_step_size(search_params(4, 2), cfg(GainCriterion::superimposed));
    REQUIRE_FALSE(res.searched);
    REQUIRE_THAT(res.t_star, WithinAbs(0.0, 0.0));
    REQUIRE(res.gain_star > 0.0);
    REQUIRE_FALSE(res.note.empty());
    REQUIRE(res.trace.size() == 1);
}

TEST_CASE("degenerate search ranges are rejected") {
    auto c = cfg(GainCriterion::codebook);
    c.t_end = c.t_ini;
    REQUIRE_THROWS_AS(optimize_step_size(search_params(8, 2), c), std::invalid_argument);
    c = cfg(GainCriterion::codebook);
    c.grid_step = 5.0;  // fewer than 2 grid points
    REQUIRE_THROWS_AS(optimize_step_size(search_params(8, 2), c), std::invalid_argument);
    c = cfg(GainCriterion::codebook);
    c.grid_step = -0.1;
    REQUIRE_THROWS_AS(optimize_step_size(search_params(8, 2), c), std::invalid_argument);
}

TEST_CASE("ties break toward smaller t") {
    // The codebook gain is flat in t once d and the energy both saturate;
    // force an exact tie by searching a two-point grid inside the flat
    // region of a V = 0 layout... V = 0 skips the search, so instead check
    // the scan order contract directly on a plateau produced by duplicated
    // grid evaluation of equal gains.
    // gain_x(t) for M=8 r=1 at t in {1.0} is the unique max; widen the grid
    // so 1.0 appears once: the reported t_star is the smallest argmax.
    auto c = cfg(GainCriterion::codebook);
    c.grid_step = 0.25;
    const auto res = optimize_step_size(search_params(8, 1), c);
    double best = res.gain_star;
    double first_t = -1.0;
    for (const auto& [t, g] : res.trace)
        if (g == best) {
            first_t = t;
            break;
        }
    REQUIRE_THAT(res.t_star, WithinAbs(first_t, 0.0));
}

TEST_CASE("design pipeline wires search, build, interleave, normalize, report") {
    DesignParams p = search_params(4, 2);
    const auto out = design_pipeline(p, cfg(GainCriterion::codebook), /*interleave=*/true);
    REQUIRE(out.set.books.size() == 6);
    REQUIRE(out.set.interleaved);
    REQUIRE_THAT(out.set.mean_codeword_energy(), WithinRel(1.0, 1e-12));
    REQUIRE(out.report.per_rn_med.size() == 4);
    for (const double d : out.report.per_rn_med) {
        REQUIRE(d > 0.0);
        REQUIRE_THAT(d, WithinRel(out.report.per_rn_med.front(), 1e-12));
    }
    // V = 0: search skipped but the design is still uniquely decodable.
    REQUIRE_FALSE(out.search.searched);

    // Overloaded lambda = 200% system: d_f = 4, so three rotation exponents
    // with the leading pair equal.
    DesignParams p200;
    p200.M = 4;
    p200.r = 1;
    p200.a = 0.5;
    p200.epsilons = {1.0, 1.0, 2.0};
    p200.K = 5;
    p200.J = 10;
    p200.B = 2;
    const auto big = design_pipeline(p200, cfg(GainCriterion::codebook), false);
    REQUIRE(big.set.books.size() == 10);
    REQUIRE(big.set.graph.d_f == 4);
    for (const double d : big.report.per_rn_med) REQUIRE(d > 0.0);

    // d_f = 5 system exercising the full two-pair epsilon pattern.
    DesignParams p250;
    p250.M = 4;
    p250.r = 1;
    p250.a = 0.5;
    p250.epsilons = {1.0, 1.0, 2.0, 2.0};
    p250.K = 6;
    p250.J = 15;
    p250.B = 2;
    const auto df5 = design_pipeline(p250, cfg(GainCriterion::codebook), false);
    REQUIRE(df5.set.graph.d_f == 5);
    for (const double d : df5.report.per_rn_med) REQUIRE(d > 0.0);
}

TEST_CASE("pipeline gain is self-consistent with the report") {
    SECTION("codebook criterion") {
        const auto out = design_pipeline(search_params(8, 2), cfg(GainCriterion::codebook), false);
        REQUIRE_THAT(out.search.gain_star, WithinRel(coding_gain(out.report.d_min_x, out.report.e_x_avg), 1e-12));
    }
    SECTION("superimposed criterion") {
        const auto out = design_pipeline(search_params(8, 2), cfg(GainCriterion::superimposed), false);
        REQUIRE_THAT(out.search.gain_star, WithinRel(coding_gain(out.report.d_min_c, out.report.e_c_avg), 1e-12));
    }
}
