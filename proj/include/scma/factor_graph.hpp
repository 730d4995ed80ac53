#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "scma/common.hpp"
#include "scma/design_params.hpp"

namespace scma {

/// K x J binary mapping between resources (rows) and users (columns).
/// Row/column index sets are precomputed: rn_users[k] lists the users on
/// resource k, un_resources[j] lists the resources of user j (0-based).
struct FactorGraph {
    std::uint32_t K = 0, J = 0, B = 0, d_f = 0;
    std::vector<std::uint8_t> f;  ///< row-major K x J
    std::vector<std::vector<std::uint32_t>> rn_users;
    std::vector<std::vector<std::uint32_t>> un_resources;

    std::uint8_t at(std::uint32_t k, std::uint32_t j) const { return f[static_cast<std::size_t>(k) * J + j]; }

    /// Decimal value of column j: D(f_j) = sum_k f_{k,j} * 2^(K-1-k), 0-based k.
    std::uint64_t column_value(std::uint32_t j) const {
        std::uint64_t d = 0;
        for (std::uint32_t k = 0; k < K; ++k) d = (d << 1) | at(k, j);
        return d;
    }

    /// Column as a K-character bitstring, row 0 first (e.g. "1100").
    std::string column_bits(std::uint32_t j) const {
        std::string s(K, '0');
        for (std::uint32_t k = 0; k < K; ++k) s[k] = at(k, j) ? '1' : '0';
        return s;
    }
};

namespace detail {

inline void index_sets(FactorGraph& g) {
    g.rn_users.assign(g.K, {});
    g.un_resources.assign(g.J, {});
    for (std::uint32_t k = 0; k < g.K; ++k)
        for (std::uint32_t j = 0; j < g.J; ++j)
            if (g.at(k, j)) {
                g.rn_users[k].push_back(j);
                g.un_resources[j].push_back(k);
            }
}

}  // namespace detail

/// Builds the factor graph whose J columns are the weight-B binary K-vectors
/// with the largest decimal values, in strictly descending order. Throws if
/// the resulting rows are not all of equal weight d_f = J*B/K (reporting the
/// unbalanced rows), since silently substituting columns would change d_f.
inline FactorGraph design_factor_graph(std::uint32_t K, std::uint32_t J, std::uint32_t B) {
    if (K == 0 || J == 0 || B == 0) throw std::invalid_argument("K, J, B must be positive");
    if (B >= K) throw std::invalid_argument("B < K required");
    if (K > 62) throw std::invalid_argument("K too large for column enumeration");
    const std::uint64_t ncols = detail::binomial(K, B);
    if (J > ncols)
        throw std::invalid_argument("J = " + std::to_string(J) + " exceeds C(K,B) = " + std::to_string(ncols));
    if ((static_cast<std::uint64_t>(J) * B) % K != 0)
        throw std::invalid_argument("J*B must be divisible by K for a regular factor graph");

    // All weight-B masks over K bits; the mask value equals D(f_j) when bit
    // K-1-k carries row k.
    std::vector<std::uint64_t> masks;
    masks.reserve(ncols);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << K); ++m)
        if (static_cast<std::uint32_t>(std::popcount(m)) == B) masks.push_back(m);
    std::sort(masks.rbegin(), masks.rend());
    masks.resize(J);

    FactorGraph g;
    g.K = K;
    g.J = J;
    g.B = B;
    g.d_f = static_cast<std::uint32_t>(static_cast<std::uint64_t>(J) * B / K);
    g.f.assign(static_cast<std::size_t>(K) * J, 0);
    for (std::uint32_t j = 0; j < J; ++j)
        for (std::uint32_t k = 0; k < K; ++k)
            g.f[static_cast<std::size_t>(k) * J + j] = (masks[j] >> (K - 1 - k)) & 1u;

    std::string unbalanced;
    for (std::uint32_t k = 0; k < K; ++k) {
        std::uint32_t w = 0;
        for (std::uint32_t j = 0; j < J; ++j) w += g.at(k, j);
        if (w != g.d_f) unbalanced += (unbalanced.empty() ? "" : ", ") + std::to_string(k + 1) +
                                      " (weight " + std::to_string(w) + ")";
    }
    if (!unbalanced.empty())
        throw std::invalid_argument("top-" + std::to_string(J) +
                                    " columns are row-irregular; expected row weight " + std::to_string(g.d_f) +
                                    ", unbalanced rows: " + unbalanced);
    detail::index_sets(g);
    return g;
}

/// Rebuilds a factor graph from column bitstrings (row 0 = first character).
/// Used by codebook import; validates sizes and recomputes index sets.
inline FactorGraph factor_graph_from_columns(const std::vector<std::string>& cols) {
    if (cols.empty()) throw std::invalid_argument("factor graph needs at least one column");
    FactorGraph g;
    g.K = static_cast<std::uint32_t>(cols.front().size());
    g.J = static_cast<std::uint32_t>(cols.size());
    if (g.K == 0) throw std::invalid_argument("factor graph columns must be non-empty");
    g.f.assign(static_cast<std::size_t>(g.K) * g.J, 0);
    std::uint32_t wfirst = 0;
    for (std::uint32_t j = 0; j < g.J; ++j) {
        if (cols[j].size() != g.K) throw std::invalid_argument("factor graph columns differ in length");
        std::uint32_t w = 0;
        for (std::uint32_t k = 0; k < g.K; ++k) {
            const char c = cols[j][k];
            if (c != '0' && c != '1') throw std::invalid_argument("factor graph column must be binary");
            g.f[static_cast<std::size_t>(k) * g.J + j] = (c == '1');
            w += (c == '1');
        }
        if (j == 0) wfirst = w;
        if (w != wfirst) throw std::invalid_argument("factor graph columns differ in weight");
    }
    g.B = wfirst;
    // Imported graphs may be row-irregular; d_f is the largest row weight.
    for (std::uint32_t k = 0; k < g.K; ++k) {
        std::uint32_t w = 0;
        for (std::uint32_t j = 0; j < g.J; ++j) w += g.at(k, j);
        g.d_f = std::max(g.d_f, w);
    }
    detail::index_sets(g);
    return g;
}

}  // namespace scma
