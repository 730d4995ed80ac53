#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/common.hpp"
#include "scma/mpa.hpp"

namespace scma {

enum class Channel { awgn, rayleigh_iid };

struct SimConfig {
    std::vector<double> ebno_db_grid;
    Channel channel = Channel::awgn;
    std::uint32_t mpa_iterations = 10;
    std::uint64_t max_codewords = 100000;  ///< frame budget per Eb/N0 point
    std::uint64_t target_errors = 200;     ///< early-stop bit error threshold
    std::uint64_t seed = 1;
};

struct BerPoint {
    double ebno_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
};

struct BerCurve {
    std::vector<BerPoint> points;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    // Conventions pinned by this simulator; absolute dB alignment against
    // external curves depends on them.
    std::string ebno_convention = "unit_avg_codeword_energy; Eb=1/log2(M); sigma^2=N0 per resource sample";
    std::string bit_labeling = "binary_reflected_gray";
};

namespace detail {

/// Deterministic per-frame random stream. Gaussian variates are produced by
/// an explicit Box-Muller map over mt19937_64 output, so sequences are fully
/// specified and reproducible across standard library versions.
class FrameRng {
  public:
    explicit FrameRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits64() { return eng_(); }

    double uniform01() {  // in (0, 1]
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53;
    }

    cplx gaussian_pair() {  // two independent N(0,1) as real/imag
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        return {rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2)};
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace detail

/// Maps per-user bit rows (log2(M) bits each, MSB first) to the transmitted
/// K-vector: each user's bits form a Gray label selecting the codeword index
/// in canonical point order, and occupied resources superimpose.
inline std::vector<cplx> map_bits(const std::vector<std::vector<std::uint8_t>>& bits, const CodebookSet& set) {
    const std::uint32_t bps = int_log2(set.M());
    if (bits.size() != set.J()) throw std::invalid_argument("need one bit row per user");
    std::vector<cplx> x(set.K(), cplx{0.0, 0.0});
    for (std::uint32_t j = 0; j < set.J(); ++j) {
        if (bits[j].size() != bps) throw std::invalid_argument("bit row width must be log2(M)");
        std::uint32_t label = 0;
        for (const std::uint8_t b : bits[j]) label = (label << 1) | (b & 1u);
        const std::uint32_t m = gray_decode(label);
        for (const std::uint32_t k : set.graph.un_resources[j]) x[k] += set.books[j].at(k, m);
    }
    return x;
}

struct ChannelOutput {
    std::vector<cplx> y;
    std::vector<cplx> h;
};

/// y_k = h_k x_k + z_k with z_k complex Gaussian of total variance sigma^2.
/// AWGN: h_k = 1. Rayleigh: h_k iid CN(0,1), constant over the codeword and
/// known to the receiver.
template <typename Rng>
ChannelOutput apply_channel(const std::vector<cplx>& x, Channel channel, double sigma2, Rng& rng) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma^2 must be positive");
    ChannelOutput out;
    const std::size_t K = x.size();
    out.h.assign(K, cplx{1.0, 0.0});
    if (channel == Channel::rayleigh_iid) {
        for (auto& hk : out.h) hk = rng.gaussian_pair() * std::sqrt(0.5);
    }
    out.y.resize(K);
    const double nstd = std::sqrt(sigma2 / 2.0);
    for (std::size_t k = 0; k < K; ++k) out.y[k] = out.h[k] * x[k] + rng.gaussian_pair() * nstd;
    return out;
}

namespace detail {

struct FrameTally {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
};

inline std::uint64_t hash_sim_inputs(const CodebookSet& set, const SimConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& b : set.books) h = fnv1a(b.x.data(), b.x.size() * sizeof(cplx), h);
    h = fnv1a(set.graph.f.data(), set.graph.f.size(), h);
    for (const double v : cfg.ebno_db_grid) h = fnv1a(&v, sizeof(v), h);
    const std::uint32_t ch = static_cast<std::uint32_t>(cfg.channel);
    h = fnv1a(&ch, sizeof(ch), h);
    h = fnv1a(&cfg.mpa_iterations, sizeof(cfg.mpa_iterations), h);
    h = fnv1a(&cfg.max_codewords, sizeof(cfg.max_codewords), h);
    h = fnv1a(&cfg.target_errors, sizeof(cfg.target_errors), h);
    return h;
}

}  // namespace detail

/// Monte Carlo downlink BER simulation. Per Eb/N0 point, frames run until
/// target_errors or the frame budget; every frame draws its own RNG stream
/// from (seed, point index, frame index), so results are independent of
/// thread count and scheduling. Early stopping is checked at fixed-size
/// batch boundaries to keep the stopping point deterministic as well.
inline BerCurve simulate_ber(const CodebookSet& set, const SimConfig& cfg) {
    if (cfg.mpa_iterations < 1) throw std::invalid_argument("mpa_iterations must be >= 1");
    if (cfg.max_codewords < 1) throw std::invalid_argument("max_codewords must be >= 1");
    if (cfg.ebno_db_grid.empty()) throw std::invalid_argument("empty Eb/N0 grid");

    const MpaDetector detector(set);
    const std::uint32_t bps = detector.bits_per_symbol();
    const std::uint32_t J = set.J();
    const double eb = 1.0 / bps;  // unit average codeword energy per user

    BerCurve curve;
    curve.seed = cfg.seed;
    curve.config_hash = detail::hash_sim_inputs(set, cfg);

    constexpr std::uint64_t kBatch = 512;

    for (std::size_t e_idx = 0; e_idx < cfg.ebno_db_grid.size(); ++e_idx) {
        const double ebno_db = cfg.ebno_db_grid[e_idx];
        const double sigma2 = eb * std::pow(10.0, -ebno_db / 10.0);

        auto run_frame = [&](std::uint64_t f_idx) {
            detail::FrameRng rng(mix_seed(cfg.seed, e_idx, f_idx));
            std::vector<std::vector<std::uint8_t>> bits(J, std::vector<std::uint8_t>(bps));
            for (std::uint32_t j = 0; j < J; ++j) {
                std::uint64_t raw = rng.bits64();
                for (std::uint32_t i = 0; i < bps; ++i) {
                    bits[j][i] = raw & 1u;
                    raw >>= 1;
                }
            }
            const auto x = map_bits(bits, set);
            const auto ch = apply_channel(x, cfg.channel, sigma2, rng);
            const auto det = detector.detect(ch.y, ch.h, sigma2, cfg.mpa_iterations);
            detail::FrameTally tally;
            tally.bits = static_cast<std::uint64_t>(J) * bps;
            for (std::uint32_t j = 0; j < J; ++j)
                for (std::uint32_t i = 0; i < bps; ++i) {
                    const std::uint8_t decided = det.bit_llrs[j][i] < 0.0 ? 1u : 0u;
                    tally.errors += decided != bits[j][i];
                }
            return tally;
        };

        BerPoint pt;
        pt.ebno_db = ebno_db;
        std::uint64_t frame = 0;
        while (frame < cfg.max_codewords && pt.errors < cfg.target_errors) {
            const std::uint64_t batch = std::min<std::uint64_t>(kBatch, cfg.max_codewords - frame);
            const auto tally = parallel_chunked_reduce(
                static_cast<std::size_t>(batch), detail::FrameTally{},
                [&](std::size_t b, std::size_t e) {
                    detail::FrameTally acc;
                    for (std::size_t i = b; i < e; ++i) {
                        const auto t = run_frame(frame + i);
                        acc.bits += t.bits;
                        acc.errors += t.errors;
                    }
                    return acc;
                },
                [](detail::FrameTally a, detail::FrameTally b) {
                    return detail::FrameTally{a.bits + b.bits, a.errors + b.errors};
                });
            pt.bits += tally.bits;
            pt.errors += tally.errors;
            frame += batch;
        }
        pt.ber = pt.bits ? static_cast<double>(pt.errors) / static_cast<double>(pt.bits) : 0.0;
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace scma
