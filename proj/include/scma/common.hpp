#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace scma {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;

/// Binary-reflected Gray code of an index.
constexpr std::uint32_t gray_encode(std::uint32_t m) noexcept { return m ^ (m >> 1); }

/// Inverse of gray_encode: the point index carrying Gray label `g`.
constexpr std::uint32_t gray_decode(std::uint32_t g) noexcept {
    std::uint32_t m = g;
    for (std::uint32_t shift = 1; shift < 32; shift <<= 1) m ^= m >> shift;
    return m;
}

constexpr bool is_power_of_two(std::uint64_t x) noexcept { return x != 0 && (x & (x - 1)) == 0; }

constexpr unsigned int_log2(std::uint64_t x) noexcept {
    unsigned n = 0;
    while (x > 1) { x >>= 1; ++n; }
    return n;
}

/// Stateless 64-bit mixer; used to derive independent, schedule-free RNG streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) noexcept {
    return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

/// FNV-1a over raw bytes, for config digests.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Worker count: SCMA_THREADS overrides hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("SCMA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1u;
}

/// Runs fn(begin, end) over contiguous chunks of [0, n), possibly on several
/// threads. Each chunk's result is combined in chunk order, so reductions are
/// independent of the thread count as long as `combine` is associative over
/// adjacent ranges (exact for min/max and integer sums).
template <typename T, typename ChunkFn, typename Combine>
T parallel_chunked_reduce(std::size_t n, T init, ChunkFn fn, Combine combine) {
    const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n < 2048) {
        return n == 0 ? init : combine(init, fn(std::size_t{0}, n));
    }
    std::vector<T> partial(workers, init);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = std::min<std::size_t>(w * chunk, n);
        const std::size_t e = std::min<std::size_t>(b + chunk, n);
        pool.emplace_back([&, w, b, e] {
            if (b < e) partial[w] = fn(b, e);
        });
    }
    for (auto& th : pool) th.join();
    T out = init;
    for (unsigned w = 0; w < workers; ++w) out = combine(out, partial[w]);
    return out;
}

}  // namespace scma
