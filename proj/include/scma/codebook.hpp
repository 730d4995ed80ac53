#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "scma/common.hpp"
#include "scma/design_params.hpp"
#include "scma/factor_graph.hpp"
#include "scma/udcg.hpp"

namespace scma {

/// Constellation assignment per (resource, user) edge of the factor graph.
/// entries[k*J+j] holds the constellation index n_kj, or -1 off the graph.
struct GenerationMatrix {
    std::uint32_t K = 0, J = 0, d_f = 0;
    std::vector<int> entries;

    int at(std::uint32_t k, std::uint32_t j) const { return entries[static_cast<std::size_t>(k) * J + j]; }
};

/// Latin allocation rule: n_kj = (k + u_j) mod d_f with 1-based k and
/// u_j the running count of ones in row k up to column j. Every resource
/// row then uses each constellation exactly once.
inline GenerationMatrix allocate_generation_matrix(const FactorGraph& graph) {
    GenerationMatrix gen;
    gen.K = graph.K;
    gen.J = graph.J;
    gen.d_f = graph.d_f;
    gen.entries.assign(static_cast<std::size_t>(graph.K) * graph.J, -1);
    for (std::uint32_t k = 0; k < graph.K; ++k) {
        std::uint32_t u = 0;
        for (std::uint32_t j = 0; j < graph.J; ++j) {
            if (!graph.at(k, j)) continue;
            ++u;  // u_j = sum_{i<=j} f_{k,i}
            gen.entries[static_cast<std::size_t>(k) * graph.J + j] =
                static_cast<int>(((k + 1) + u) % graph.d_f);
        }
    }
    return gen;
}

/// One user's K x M codebook, stored row-major.
struct Codebook {
    std::uint32_t K = 0, M = 0;
    std::vector<cplx> x;

    cplx& at(std::uint32_t k, std::uint32_t m) { return x[static_cast<std::size_t>(k) * M + m]; }
    const cplx& at(std::uint32_t k, std::uint32_t m) const { return x[static_cast<std::size_t>(k) * M + m]; }

    /// Sum of squared norms over all codewords.
    double sum_energy() const {
        double e = 0.0;
        for (const cplx& v : x) e += std::norm(v);
        return e;
    }
    double avg_codeword_energy() const { return sum_energy() / M; }
};

/// The J per-user codebooks plus the structures they were derived from.
/// `normalization` is the cumulative amplitude scale applied so far and
/// `params` is absent for sets imported from external files.
struct CodebookSet {
    std::vector<Codebook> books;
    FactorGraph graph;
    std::optional<DesignParams> params;
    double normalization = 1.0;
    bool interleaved = false;

    std::uint32_t K() const { return graph.K; }
    std::uint32_t J() const { return graph.J; }
    std::uint32_t M() const { return books.empty() ? 0 : books.front().M; }

    double mean_codeword_energy() const {
        double e = 0.0;
        for (const auto& b : books) e += b.avg_codeword_energy();
        return books.empty() ? 0.0 : e / books.size();
    }
};

/// Assembles codebooks from a generation matrix: row k of user j's codebook
/// carries constellation C_{n_kj} in canonical point order where f_{k,j}=1,
/// zeros elsewhere. Neither normalized nor interleaved yet.
inline CodebookSet build_codebook_set(const GenerationMatrix& gen, const ConstellationGroup& group,
                                      const FactorGraph& graph) {
    if (gen.K != graph.K || gen.J != graph.J)
        throw std::invalid_argument("generation matrix does not match factor graph dimensions");
    if (group.n_constellations() != graph.d_f)
        throw std::invalid_argument("constellation group has " + std::to_string(group.n_constellations()) +
                                    " constellations but the factor graph needs d_f = " +
                                    std::to_string(graph.d_f));
    CodebookSet set;
    set.graph = graph;
    set.books.resize(graph.J);
    for (std::uint32_t j = 0; j < graph.J; ++j) {
        Codebook& b = set.books[j];
        b.K = graph.K;
        b.M = group.M;
        b.x.assign(static_cast<std::size_t>(graph.K) * group.M, cplx{0.0, 0.0});
        for (std::uint32_t k = 0; k < graph.K; ++k) {
            if (!graph.at(k, j)) continue;
            const int n = gen.at(k, j);
            for (std::uint32_t m = 0; m < group.M; ++m) b.at(k, m) = group.points[static_cast<std::size_t>(n)][m];
        }
    }
    return set;
}

/// Product-distance interleaver. For each user, every second occupied row
/// (even running count mu^k down the user's column) has its constellation
/// relabeled: point (v, l) takes the value at (V - v, (l + 2^(r-1)) mod 2^r).
/// This permutes points within the row's constellation, so per-resource
/// symbol multisets, energies and MEDs are unchanged.
inline CodebookSet interleave_codebook_set(const CodebookSet& set) {
    if (set.interleaved) throw std::invalid_argument("codebook set is already interleaved");
    if (!set.params) throw std::invalid_argument("interleaving requires design parameters (ring layout)");
    const DesignParams& p = *set.params;
    if (p.r < 1) throw std::invalid_argument("interleaving requires r >= 1 (a phase ring to rotate)");
    const std::uint32_t Mr = p.ring_size();
    const std::uint32_t Mh = Mr / 2;
    const std::uint32_t V = p.V();

    CodebookSet out = set;
    out.interleaved = true;
    for (std::uint32_t j = 0; j < set.J(); ++j) {
        std::uint32_t mu = 0;
        for (std::uint32_t k = 0; k < set.K(); ++k) {
            if (!set.graph.at(k, j)) continue;
            ++mu;
            if (mu % 2 != 0) continue;
            Codebook& b = out.books[j];
            for (std::uint32_t v = 0; v <= V; ++v)
                for (std::uint32_t l = 0; l < Mr; ++l)
                    b.at(k, v * Mr + l) = set.books[j].at(k, (V - v) * Mr + ((l + Mh) % Mr));
        }
    }
    return out;
}

/// Scales every codebook by one common factor so the across-users average
/// of the per-codebook mean codeword energy becomes 1. Records the applied
/// amplitude scale. Idempotent: a normalized set gets factor 1.
inline CodebookSet normalize_codebook_set(const CodebookSet& set) {
    const double mean = set.mean_codeword_energy();
    if (!(mean > 0.0)) throw std::invalid_argument("cannot normalize a zero-energy codebook set");
    const double scale = 1.0 / std::sqrt(mean);
    CodebookSet out = set;
    for (auto& b : out.books)
        for (auto& v : b.x) v *= scale;
    out.normalization = set.normalization * scale;
    return out;
}

/// Latin property: within every codeword, the nonzero entries (one per
/// occupied resource) are pairwise distinct values.
inline bool has_latin_property(const CodebookSet& set, double tol = 1e-12) {
    for (std::uint32_t j = 0; j < set.J(); ++j) {
        const auto& rows = set.graph.un_resources[j];
        for (std::uint32_t m = 0; m < set.M(); ++m)
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t l = i + 1; l < rows.size(); ++l)
                    if (std::abs(set.books[j].at(rows[i], m) - set.books[j].at(rows[l], m)) <= tol)
                        return false;
    }
    return true;
}

/// All M^{|xi_k|} superpositions sum_{j in xi_k} x_{k,m_j} at resource k.
inline std::vector<cplx> resource_superpositions(const CodebookSet& set, std::uint32_t k,
                                                 std::size_t cap = kDefaultSuperposeCap) {
    const auto& users = set.graph.rn_users.at(k);
    const std::uint32_t M = set.M();
    std::size_t total = 1;
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (total > cap / M)
            throw std::invalid_argument("resource superposition size M^d_f exceeds cap of " +
                                        std::to_string(cap) + " points");
        total *= M;
    }
    std::vector<cplx> sums(1, cplx{0.0, 0.0});
    sums.reserve(total);
    for (const std::uint32_t j : users) {
        std::vector<cplx> next(sums.size() * M);
        std::size_t w = 0;
        for (const cplx base : sums)
            for (std::uint32_t m = 0; m < M; ++m) next[w++] = base + set.books[j].at(k, m);
        sums = std::move(next);
    }
    return sums;
}

}  // namespace scma
