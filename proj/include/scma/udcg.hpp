#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "scma/common.hpp"
#include "scma/design_params.hpp"

namespace scma {

/// A group of N+1 equal-size constellations: a base ring constellation C_0
/// and N phase-rotated copies C_n = e^{j*theta_n} * C_0.
///
/// Point order inside every constellation is canonical amplitude-major:
/// point index p = v * 2^r + l for ring v and phase step l (0-based).
struct ConstellationGroup {
    std::uint32_t M = 0;              ///< points per constellation
    std::uint32_t r = 0;              ///< ring order exponent (2^r points per ring)
    std::vector<double> amplitudes;   ///< ring radii a, a+t, ..., a+Vt
    std::vector<double> thetas;       ///< rotation angles, thetas[0] = 0
    std::vector<std::vector<cplx>> points;  ///< (N+1) x M point values

    std::size_t n_constellations() const noexcept { return points.size(); }
    std::uint32_t ring_size() const noexcept { return 1u << r; }
    std::uint32_t V() const noexcept { return static_cast<std::uint32_t>(amplitudes.size()) - 1; }
};

/// Builds the uniquely decomposable constellation group for the given
/// parameters: C_0 = {(a+vt) * e^{j 2*pi*l / 2^r}} in canonical order and
/// rotated copies with theta_n = (-1)^n * pi / 2^(r + eps_n), n >= 1.
inline ConstellationGroup build_udcg(const DesignParams& p) {
    validate_constellation_params(p);
    ConstellationGroup g;
    g.M = p.M;
    g.r = p.r;
    const std::uint32_t ring = p.ring_size();
    const std::uint32_t V = p.V();
    g.amplitudes.resize(V + 1);
    for (std::uint32_t v = 0; v <= V; ++v) g.amplitudes[v] = p.a + v * p.t;

    g.thetas.resize(p.d_f());
    g.thetas[0] = 0.0;
    for (std::size_t n = 1; n <= p.n_rotated(); ++n) {
        const double sign = (n % 2 == 1) ? -1.0 : 1.0;
        g.thetas[n] = sign * kPi / std::pow(2.0, static_cast<double>(p.r) + p.epsilons[n - 1]);
    }

    g.points.resize(g.thetas.size());
    for (std::size_t n = 0; n < g.thetas.size(); ++n) {
        auto& c = g.points[n];
        c.resize(p.M);
        for (std::uint32_t v = 0; v <= V; ++v)
            for (std::uint32_t l = 0; l < ring; ++l)
                c[v * ring + l] = std::polar(g.amplitudes[v], 2.0 * kPi * l / ring + g.thetas[n]);
    }
    return g;
}

/// All sums of one point per constellation. Point p's constituent indices
/// are the mixed-radix digits of p (constellation 0 most significant), see
/// index_tuple().
struct SuperimposedConstellation {
    std::uint32_t M = 0;            ///< points per source constellation
    std::uint32_t n_groups = 0;     ///< number of source constellations
    std::vector<cplx> points;       ///< M^n_groups superimposed values

    /// Constituent point index per constellation for superimposed point p.
    std::vector<std::uint32_t> index_tuple(std::size_t p) const {
        std::vector<std::uint32_t> idx(n_groups);
        for (std::size_t n = n_groups; n-- > 0;) {
            idx[n] = static_cast<std::uint32_t>(p % M);
            p /= M;
        }
        return idx;
    }
};

inline constexpr std::size_t kDefaultSuperposeCap = std::size_t{1} << 24;

/// Enumerates the full superimposed constellation (M^{N+1} points).
/// Throws when the enumeration would exceed `cap` points.
inline SuperimposedConstellation superimpose(const ConstellationGroup& g,
                                             std::size_t cap = kDefaultSuperposeCap) {
    SuperimposedConstellation s;
    s.M = g.M;
    s.n_groups = static_cast<std::uint32_t>(g.n_constellations());
    std::size_t total = 1;
    for (std::uint32_t n = 0; n < s.n_groups; ++n) {
        if (total > cap / g.M)
            throw std::invalid_argument("superimposed constellation size M^(N+1) exceeds cap of " +
                                        std::to_string(cap) + " points");
        total *= g.M;
    }
    s.points.assign(1, cplx{0.0, 0.0});
    s.points.reserve(total);
    for (std::uint32_t n = 0; n < s.n_groups; ++n) {
        std::vector<cplx> next;
        next.resize(s.points.size() * g.M);
        std::size_t w = 0;
        for (const cplx base : s.points)
            for (std::uint32_t m = 0; m < g.M; ++m) next[w++] = base + g.points[n][m];
        s.points = std::move(next);
    }
    return s;
}

struct UdcCheckResult {
    bool is_udc = false;
    double min_distance = 0.0;  ///< exact min pairwise distance; +inf for a single point
    /// Flat indices of one colliding pair when is_udc is false.
    std::optional<std::array<std::size_t, 2>> witness;
};

namespace detail {

struct MinPair {
    double d2 = std::numeric_limits<double>::infinity();
    std::size_t i = 0, j = 0;
};

inline MinPair closer(const MinPair& x, const MinPair& y) noexcept {
    if (y.d2 < x.d2) return y;
    if (x.d2 < y.d2) return x;
    // Exact tie: lexicographically smallest pair, so the result is
    // independent of chunking.
    if (y.i != x.i ? y.i < x.i : y.j < x.j) return y;
    return x;
}

/// Exact minimum pairwise distance with arg pair, scanned over row blocks.
inline MinPair min_pairwise(const std::vector<cplx>& pts) {
    const std::size_t n = pts.size();
    MinPair init;
    if (n < 2) return init;
    std::vector<double> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = pts[i].real();
        im[i] = pts[i].imag();
    }
    auto scan_rows = [&](std::size_t b, std::size_t e) {
        MinPair best;
        for (std::size_t i = b; i < e; ++i) {
            const double xi = re[i], yi = im[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = xi - re[j];
                const double dy = yi - im[j];
                const double d2 = dx * dx + dy * dy;
                if (d2 < best.d2) best = {d2, i, j};
            }
        }
        return best;
    };
    return parallel_chunked_reduce(n, init, scan_rows, closer);
}

}  // namespace detail

/// Exhaustive unique-decodability check: every pair of superimposed points
/// must be farther apart than `tol`. Returns the exact minimum pairwise
/// distance and, on failure, one colliding pair.
inline UdcCheckResult check_uniquely_decodable(const SuperimposedConstellation& s, double tol = 1e-9) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    UdcCheckResult out;
    if (s.points.size() < 2) {
        out.is_udc = true;
        out.min_distance = std::numeric_limits<double>::infinity();
        return out;
    }
    const auto mp = detail::min_pairwise(s.points);
    out.min_distance = std::sqrt(mp.d2);
    out.is_udc = out.min_distance > tol;
    if (!out.is_udc) out.witness = {mp.i, mp.j};
    return out;
}

}  // namespace scma
