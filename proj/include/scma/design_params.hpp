#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scma/common.hpp"

namespace scma {

/// All knobs of a UDCG codebook design.
///
/// Constellation side: M points per constellation laid out on 2^r-point
/// phase rings, V+1 = M/2^r rings with amplitudes a, a+t, ..., a+Vt, and
/// N = d_f-1 rotated copies controlled by the rotation exponents
/// epsilons[0..N-1]. System side: K resources, J users, B resources per
/// user.
struct DesignParams {
    std::uint32_t M = 4;           ///< points per constellation (power of two, >= 2)
    std::uint32_t r = 2;           ///< ring order exponent, 1 <= r <= log2(M)
    double a = 0.5;                ///< base amplitude, > 0
    double t = 0.0;                ///< amplitude step between rings, >= 0
    std::vector<double> epsilons;  ///< rotation exponents, one per rotated constellation
    std::uint32_t K = 4;
    std::uint32_t J = 6;
    std::uint32_t B = 2;

    std::uint32_t ring_size() const noexcept { return 1u << r; }
    /// Highest ring index: V = M / 2^r - 1.
    std::uint32_t V() const noexcept { return M / ring_size() - 1; }
    std::size_t n_rotated() const noexcept { return epsilons.size(); }
    std::size_t d_f() const noexcept { return epsilons.size() + 1; }
};

namespace detail {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace detail

/// Checks the constellation-side invariants (M, r, a, t, epsilons).
/// Throws std::invalid_argument with a message naming the violated rule.
inline void validate_constellation_params(const DesignParams& p) {
    if (p.M < 2 || !is_power_of_two(p.M))
        throw std::invalid_argument("M must be a power of two >= 2, got " + std::to_string(p.M));
    if (p.r < 1 || p.r > int_log2(p.M))
        throw std::invalid_argument("r must satisfy 1 <= r <= log2(M), got r=" + std::to_string(p.r) +
                                    " for M=" + std::to_string(p.M));
    if (p.M % p.ring_size() != 0)
        throw std::invalid_argument("M must be divisible by 2^r");
    if (!(p.a > 0.0))
        throw std::invalid_argument("base amplitude a must be positive");
    if (p.t < 0.0)
        throw std::invalid_argument("amplitude step t must be non-negative");
    // Distinct ring amplitudes are required as soon as there is more than one
    // ring; t = 0 would collapse them onto each other.
    if (p.V() >= 1 && p.t == 0.0)
        throw std::invalid_argument("amplitude step t must be positive when M > 2^r (multiple rings)");
    for (double e : p.epsilons)
        if (!(e > 0.0)) throw std::invalid_argument("rotation exponents must be positive");
    // Paired-equal, non-decreasing pattern: eps_1 = eps_2 <= eps_3 = eps_4 <= ...
    for (std::size_t i = 0; i + 1 < p.epsilons.size(); i += 2)
        if (p.epsilons[i] != p.epsilons[i + 1])
            throw std::invalid_argument("rotation exponents must be pairwise equal (eps_{2i-1} = eps_{2i})");
    for (std::size_t i = 1; i < p.epsilons.size(); ++i)
        if (p.epsilons[i] < p.epsilons[i - 1])
            throw std::invalid_argument("rotation exponents must be non-decreasing");
}

/// Checks the system-side invariants (K, J, B) and their consistency with the
/// constellation side (d_f = J*B/K must equal epsilons.size() + 1).
inline void validate_system_params(const DesignParams& p) {
    if (p.K == 0 || p.J == 0 || p.B == 0)
        throw std::invalid_argument("K, J, B must be positive");
    if (p.B >= p.K)
        throw std::invalid_argument("B < K required");
    if (p.J <= p.K)
        throw std::invalid_argument("J > K required for an overloaded system");
    if (p.J > detail::binomial(p.K, p.B))
        throw std::invalid_argument("J exceeds C(K,B): not enough distinct factor graph columns");
    if ((static_cast<std::uint64_t>(p.J) * p.B) % p.K != 0)
        throw std::invalid_argument("J*B must be divisible by K (integer row weight d_f)");
    const std::uint64_t df = static_cast<std::uint64_t>(p.J) * p.B / p.K;
    if (df != p.d_f())
        throw std::invalid_argument("epsilons length " + std::to_string(p.n_rotated()) +
                                    " inconsistent with d_f = J*B/K = " + std::to_string(df) +
                                    " (need d_f - 1 rotation exponents)");
}

inline void validate_params(const DesignParams& p) {
    validate_constellation_params(p);
    validate_system_params(p);
}

}  // namespace scma
