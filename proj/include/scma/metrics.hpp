#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/common.hpp"
#include "scma/design_params.hpp"
#include "scma/udcg.hpp"

namespace scma {

/// Q-function via the complementary error function.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double coding_gain(double d_min, double e_avg) {
    if (!(e_avg > 0.0)) throw std::invalid_argument("average energy must be positive");
    return d_min * d_min / e_avg;
}

enum class EnergyMode { closed_form, brute_force };

/// Sum energy of the superimposed constellation, sum_p ||c_p||^2 over all
/// M^d_f points. The closed form is
///   E_c = d_f M^(d_f-1) 2^r [sum_v (a+vt)^2]
///       + 2 M^(d_f-2) [sum_q 2q cos(2 pi q / 2^r) - 2^r]
///         [sum_v (a+vt)]^2 [sum_{n<i} cos(theta_n - theta_i)],
/// whose phase-ring bracket vanishes identically; brute force enumerates the
/// superposition and must agree to 1e-9 relative.
inline double sum_energy_superimposed(const DesignParams& p, EnergyMode mode,
                                      std::size_t cap = kDefaultSuperposeCap) {
    if (mode == EnergyMode::brute_force) {
        const auto s = superimpose(build_udcg(p), cap);
        double e = 0.0;
        for (const cplx& c : s.points) e += std::norm(c);
        return e;
    }
    validate_constellation_params(p);
    const std::uint32_t V = p.V();
    const std::uint32_t ring = p.ring_size();
    const std::size_t df = p.d_f();
    double s1 = 0.0, s2 = 0.0;
    for (std::uint32_t v = 0; v <= V; ++v) {
        const double amp = p.a + v * p.t;
        s1 += amp;
        s2 += amp * amp;
    }
    double qsum = 0.0;
    for (std::uint32_t q = 1; q <= ring; ++q) qsum += 2.0 * q * std::cos(2.0 * kPi * q / ring);
    std::vector<double> th(df);
    th[0] = 0.0;
    for (std::size_t n = 1; n < df; ++n)
        th[n] = ((n % 2 == 1) ? -1.0 : 1.0) * kPi / std::pow(2.0, static_cast<double>(p.r) + p.epsilons[n - 1]);
    double theta_sum = 0.0;
    for (std::size_t n = 0; n < df; ++n)
        for (std::size_t i = n + 1; i < df; ++i) theta_sum += std::cos(th[n] - th[i]);
    const double first = df * std::pow(static_cast<double>(p.M), static_cast<double>(df - 1)) * ring * s2;
    const double second =
        2.0 * std::pow(static_cast<double>(p.M), static_cast<double>(df) - 2.0) * (qsum - ring) * s1 * s1 * theta_sum;
    return first + second;
}

/// Exact minimum Euclidean distance over all distinct superimposed pairs.
inline double med_superimposed(const SuperimposedConstellation& s) {
    if (s.points.empty()) throw std::invalid_argument("superimposed constellation is empty");
    if (s.points.size() < 2) return std::numeric_limits<double>::infinity();
    return std::sqrt(detail::min_pairwise(s.points).d2);
}

/// The two closed-form minimum-distance classes of superimposed pairs:
/// d1 covers opposite unit phase steps in two constellations, d2 covers
/// opposite unit amplitude steps (only defined when there are >= 2 rings).
struct ClosedCaseMed {
    double d1_min = 0.0;
    std::optional<double> d2_min;   ///< absent when V = 0
    double theta1_min = 0.0;
    double theta2_min = 0.0;
};

/// Evaluates the closed-form distance cases by exhaustive scan over the
/// phase-difference grid and all ordered constellation pairs:
///   d1^2 = 8 a^2 sin^2(pi/2^r) (1 - cos theta1_min),
///   theta1_min = min |2pi/2^r (l_n - l_i - 1) + theta_n - theta_i|
///   d2^2 = 2 t^2 (1 - cos theta2_min),
///   theta2_min = min |2pi/2^r (l_n - l_i) + theta_n - theta_i|.
/// This evaluates the formulas themselves, so t = 0 is allowed here (d2 = 0)
/// even though multi-ring groups require t > 0 to be constructed.
inline ClosedCaseMed med_closed_cases(const DesignParams& p) {
    DesignParams formula = p;
    if (formula.V() >= 1 && formula.t == 0.0) formula.t = 1.0;  // validate shape, not the step
    validate_constellation_params(formula);

    const std::uint32_t ring = p.ring_size();
    const std::size_t df = p.d_f();
    if (df < 2) throw std::invalid_argument("closed-form distance cases need at least two constellations");
    std::vector<double> th(df);
    th[0] = 0.0;
    for (std::size_t n = 1; n < df; ++n)
        th[n] = ((n % 2 == 1) ? -1.0 : 1.0) * kPi / std::pow(2.0, static_cast<double>(p.r) + p.epsilons[n - 1]);

    ClosedCaseMed out;
    double t1 = std::numeric_limits<double>::infinity();
    double t2 = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < df; ++n)
        for (std::size_t i = 0; i < df; ++i) {
            if (n == i) continue;
            for (std::uint32_t ln = 0; ln < ring; ++ln)
                for (std::uint32_t li = 0; li < ring; ++li) {
                    const double step = 2.0 * kPi / ring;
                    const double dth = th[n] - th[i];
                    t1 = std::min(t1, std::abs(step * (static_cast<double>(ln) - li - 1.0) + dth));
                    t2 = std::min(t2, std::abs(step * (static_cast<double>(ln) - static_cast<double>(li)) + dth));
                }
        }
    out.theta1_min = t1;
    out.theta2_min = t2;
    const double sin_r = std::sin(kPi / ring);
    out.d1_min = std::sqrt(8.0 * p.a * p.a * sin_r * sin_r * (1.0 - std::cos(t1)));
    if (p.V() >= 1) out.d2_min = std::sqrt(2.0 * p.t * p.t * (1.0 - std::cos(t2)));
    return out;
}

/// Closed-form codebook MED (generalized to B occupied resources):
/// sqrt(B) * 2a sin(pi/2^r) on a single ring or above the ring-gap
/// threshold, sqrt(B) * t below it. With multiple coincident rings (t = 0,
/// V >= 1) codewords repeat and the MED is zero.
inline double med_codebook_closed(const DesignParams& p, std::uint32_t B) {
    const double ring_dist = 2.0 * p.a * std::sin(kPi / p.ring_size());
    double d;
    if (p.V() == 0) d = ring_dist;
    else if (p.t == 0.0) d = 0.0;
    else d = std::min(ring_dist, p.t);
    return std::sqrt(static_cast<double>(B)) * d;
}

struct CodebookStats {
    double e_x_avg = 0.0;  ///< (1/M) sum_m ||x_m||^2
    double d_min_x = 0.0;  ///< exact min codeword-pair distance
};

inline CodebookStats codebook_stats(const CodebookSet& set, std::uint32_t j) {
    if (j >= set.books.size()) throw std::invalid_argument("user index out of range");
    const Codebook& b = set.books[j];
    if (b.M == 0) throw std::invalid_argument("empty codebook");
    CodebookStats out;
    out.e_x_avg = b.avg_codeword_energy();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t m1 = 0; m1 < b.M; ++m1)
        for (std::uint32_t m2 = m1 + 1; m2 < b.M; ++m2) {
            double d2 = 0.0;
            for (std::uint32_t k = 0; k < b.K; ++k) d2 += std::norm(b.at(k, m1) - b.at(k, m2));
            best = std::min(best, d2);
        }
    out.d_min_x = b.M < 2 ? std::numeric_limits<double>::infinity() : std::sqrt(best);
    return out;
}

/// Exact per-resource MEDs d_{k,min} of the superimposed constellations.
inline std::vector<double> per_rn_med(const CodebookSet& set, std::size_t cap = kDefaultSuperposeCap) {
    std::vector<double> out(set.K());
    for (std::uint32_t k = 0; k < set.K(); ++k) {
        const auto sums = resource_superpositions(set, k, cap);
        if (sums.size() < 2) {
            out[k] = std::numeric_limits<double>::infinity();
            continue;
        }
        out[k] = std::sqrt(detail::min_pairwise(sums).d2);
    }
    return out;
}

enum class MpdMode { exact, per_codebook };

inline constexpr std::size_t kDefaultExactMpdCap = std::size_t{1} << 16;

/// Minimum product distance. Exact mode enumerates the combination
/// constellation of all users (capped) and takes the product over all K
/// coordinates, zero factors included. Per-codebook mode restricts to each
/// user's own B occupied coordinates and minimizes across users; this is the
/// quantity the interleaver enlarges.
inline double min_product_distance(const CodebookSet& set, MpdMode mode,
                                   std::size_t cap = kDefaultExactMpdCap) {
    const std::uint32_t M = set.M();
    if (M == 0) throw std::invalid_argument("empty codebook set");
    if (mode == MpdMode::per_codebook) {
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t j = 0; j < set.J(); ++j) {
            const auto& rows = set.graph.un_resources[j];
            for (std::uint32_t m1 = 0; m1 < M; ++m1)
                for (std::uint32_t m2 = m1 + 1; m2 < M; ++m2) {
                    double prod = 1.0;
                    for (const std::uint32_t k : rows) prod *= std::abs(set.books[j].at(k, m1) - set.books[j].at(k, m2));
                    best = std::min(best, prod);
                }
        }
        return best;
    }

    std::size_t total = 1;
    for (std::uint32_t j = 0; j < set.J(); ++j) {
        if (total > cap / M)
            throw std::invalid_argument("combination constellation size M^J exceeds cap of " +
                                        std::to_string(cap) + " points");
        total *= M;
    }
    const std::uint32_t K = set.K();
    // Combination constellation, laid out K coordinates per vector.
    std::vector<cplx> comb(total * K, cplx{0.0, 0.0});
    std::size_t count = 1;
    for (std::uint32_t j = 0; j < set.J(); ++j) {
        const std::size_t next = count * M;
        for (std::size_t c = next; c-- > 0;) {
            const std::size_t base = c / M;
            const std::uint32_t m = static_cast<std::uint32_t>(c % M);
            for (std::uint32_t k = K; k-- > 0;)
                comb[c * K + k] = comb[base * K + k] + set.books[j].at(k, m);
        }
        count = next;
    }
    auto scan = [&](std::size_t b, std::size_t e) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i1 = b; i1 < e; ++i1)
            for (std::size_t i2 = i1 + 1; i2 < total; ++i2) {
                double prod = 1.0;
                for (std::uint32_t k = 0; k < K; ++k) prod *= std::abs(comb[i1 * K + k] - comb[i2 * K + k]);
                best = std::min(best, prod);
            }
        return best;
    };
    return parallel_chunked_reduce(total, std::numeric_limits<double>::infinity(), scan,
                                   [](double x, double y) { return std::min(x, y); });
}

struct RayleighConditioned {
    std::vector<double> h_abs2;  ///< |h_k|^2 per resource
};

/// Union bound on the per-vector error probability:
/// AWGN: (M^J - 1) Q(sqrt(K/(2 sigma^2)) d_min);
/// conditioned Rayleigh: (M^J - 1) Q(sqrt(sum_k |h_k|^2 / (2 sigma^2)) d_min).
inline double union_bound(double d_min, double sigma2, std::uint32_t K, std::uint32_t M, std::uint32_t J,
                          const std::optional<RayleighConditioned>& rayleigh = std::nullopt) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma^2 must be positive");
    double gain = static_cast<double>(K);
    if (rayleigh) {
        gain = 0.0;
        for (double v : rayleigh->h_abs2) gain += v;
    }
    const double pairs = std::pow(static_cast<double>(M), static_cast<double>(J)) - 1.0;
    return pairs * q_function(std::sqrt(gain / (2.0 * sigma2)) * d_min);
}

struct MpdReport {
    double value = 0.0;
    std::string mode;  ///< "exact" or "per_codebook"
};

/// Aggregate metric report for a codebook set. Superimposed-constellation
/// quantities are per-resource aggregates (mean energies, min MED); for
/// designed sets all resources carry the same constellation so the
/// aggregation is exact. per_rn_med_table applies the convention under which
/// published per-resource MED tables reproduce: Euclidean distances with
/// amplitudes scaled to unit codebook *sum* energy, i.e. d / sqrt(E_x).
struct MetricsReport {
    double e_c_sum = 0.0;
    double e_c_avg = 0.0;
    double d_min_c = 0.0;
    double gain_c = 0.0;
    double e_x_avg = 0.0;
    double d_min_x = 0.0;
    double gain_x = 0.0;
    std::vector<double> per_rn_med;
    std::vector<double> per_rn_med_table;
    std::optional<MpdReport> mpd;
    std::string distance_convention = "euclidean_distance";
    std::string table_normalization = "unit_sum_codeword_energy";
};

inline MetricsReport evaluate_codebook_set(const CodebookSet& set, bool exact_mpd = false,
                                           std::size_t cap = kDefaultSuperposeCap) {
    MetricsReport rep;
    const std::uint32_t K = set.K();
    rep.per_rn_med.resize(K);
    double ec_sum_acc = 0.0;
    std::size_t n_points = 0;
    for (std::uint32_t k = 0; k < K; ++k) {
        const auto sums = resource_superpositions(set, k, cap);
        n_points = sums.size();
        double e = 0.0;
        for (const cplx& c : sums) e += std::norm(c);
        ec_sum_acc += e;
        rep.per_rn_med[k] = sums.size() < 2 ? std::numeric_limits<double>::infinity()
                                            : std::sqrt(detail::min_pairwise(sums).d2);
    }
    rep.e_c_sum = ec_sum_acc / K;
    rep.e_c_avg = n_points ? rep.e_c_sum / n_points : 0.0;
    rep.d_min_c = *std::min_element(rep.per_rn_med.begin(), rep.per_rn_med.end());
    rep.gain_c = rep.e_c_avg > 0.0 ? coding_gain(rep.d_min_c, rep.e_c_avg) : 0.0;

    double ex_acc = 0.0;
    double dx_min = std::numeric_limits<double>::infinity();
    double ex_sum_total = 0.0;
    for (std::uint32_t j = 0; j < set.J(); ++j) {
        const auto st = codebook_stats(set, j);
        ex_acc += st.e_x_avg;
        ex_sum_total += st.e_x_avg * set.M();
        dx_min = std::min(dx_min, st.d_min_x);
    }
    rep.e_x_avg = ex_acc / set.J();
    rep.d_min_x = dx_min;
    rep.gain_x = rep.e_x_avg > 0.0 ? coding_gain(rep.d_min_x, rep.e_x_avg) : 0.0;

    const double mean_sum_energy = ex_sum_total / set.J();
    rep.per_rn_med_table.resize(K);
    for (std::uint32_t k = 0; k < K; ++k)
        rep.per_rn_med_table[k] = mean_sum_energy > 0.0 ? rep.per_rn_med[k] / std::sqrt(mean_sum_energy) : 0.0;

    rep.mpd = MpdReport{min_product_distance(set, exact_mpd ? MpdMode::exact : MpdMode::per_codebook),
                        exact_mpd ? "exact" : "per_codebook"};
    return rep;
}

}  // namespace scma
