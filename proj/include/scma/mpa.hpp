#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/common.hpp"

namespace scma {

struct MpaResult {
    std::vector<std::uint32_t> symbols;           ///< max-belief codeword index per user
    std::vector<std::vector<double>> bit_llrs;    ///< per user, log P(bit=0)/P(bit=1), Gray labeling
    std::vector<std::vector<double>> beliefs;     ///< per user, posterior symbol probabilities
};

/// Log-domain sum-product multi-user detector on the SCMA factor graph.
///
/// Resource nodes marginalize exp(-|y_k - h_k sum_j x_{k,m_j}|^2 / sigma^2)
/// over their M^{d_f} local codeword combinations with exact log-sum-exp;
/// user nodes combine resource messages. Messages are max-normalized each
/// pass to prevent underflow. After a fixed iteration count the per-user
/// beliefs give max-belief symbol decisions and per-bit LLRs under the
/// binary-reflected Gray labeling of the codeword index.
class MpaDetector {
  public:
    explicit MpaDetector(const CodebookSet& set) : set_(&set), M_(set.M()), K_(set.K()), J_(set.J()) {
        if (M_ < 2 || !is_power_of_two(M_)) throw std::invalid_argument("codebook size M must be a power of two >= 2");
        bps_ = int_log2(M_);
        res_users_ = set.graph.rn_users;
        user_res_.resize(J_);
        edge_of_.assign(static_cast<std::size_t>(K_) * J_, -1);
        for (std::uint32_t k = 0; k < K_; ++k)
            for (std::size_t a = 0; a < res_users_[k].size(); ++a) {
                const std::uint32_t j = res_users_[k][a];
                user_res_[j].push_back(k);
                edge_of_[static_cast<std::size_t>(k) * J_ + j] = static_cast<int>(a);
            }
        // Per-resource symbol tables in resource-local user order.
        sym_.resize(K_);
        combos_.resize(K_);
        for (std::uint32_t k = 0; k < K_; ++k) {
            const auto& users = res_users_[k];
            sym_[k].resize(users.size() * M_);
            for (std::size_t a = 0; a < users.size(); ++a)
                for (std::uint32_t m = 0; m < M_; ++m) sym_[k][a * M_ + m] = set.books[users[a]].at(k, m);
            std::size_t c = 1;
            for (std::size_t a = 0; a < users.size(); ++a) c *= M_;
            combos_[k] = c;
        }
    }

    std::uint32_t bits_per_symbol() const noexcept { return bps_; }

    MpaResult detect(const std::vector<cplx>& y, const std::vector<cplx>& h, double sigma2,
                     std::uint32_t iterations) const {
        if (y.size() != K_ || h.size() != K_) throw std::invalid_argument("received vector length mismatch");
        if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma^2 must be positive");
        if (iterations < 1) throw std::invalid_argument("need at least one iteration");

        // Local channel metrics per resource combination.
        std::vector<std::vector<double>> metric(K_);
        for (std::uint32_t k = 0; k < K_; ++k) {
            const auto& users = res_users_[k];
            metric[k].resize(combos_[k]);
            for (std::size_t c = 0; c < combos_[k]; ++c) {
                cplx sum{0.0, 0.0};
                std::size_t rem = c;
                for (std::size_t a = 0; a < users.size(); ++a) {
                    sum += sym_[k][a * M_ + (rem % M_)];
                    rem /= M_;
                }
                metric[k][c] = -std::norm(y[k] - h[k] * sum) / sigma2;
            }
        }

        // Messages in log domain, flat [edge][m] layouts.
        std::vector<std::vector<double>> u2r(K_), r2u(K_);
        for (std::uint32_t k = 0; k < K_; ++k) {
            u2r[k].assign(res_users_[k].size() * M_, 0.0);
            r2u[k].assign(res_users_[k].size() * M_, 0.0);
        }

        std::vector<double> maxw, sums;
        for (std::uint32_t it = 0; it < iterations; ++it) {
            // Resource update: exact log-sum-exp marginalization.
            for (std::uint32_t k = 0; k < K_; ++k) {
                const auto& users = res_users_[k];
                const std::size_t deg = users.size();
                maxw.assign(deg * M_, -std::numeric_limits<double>::infinity());
                sums.assign(deg * M_, 0.0);
                std::vector<double> w(combos_[k]);
                for (std::size_t c = 0; c < combos_[k]; ++c) {
                    double acc = metric[k][c];
                    std::size_t rem = c;
                    for (std::size_t a = 0; a < deg; ++a) {
                        acc += u2r[k][a * M_ + (rem % M_)];
                        rem /= M_;
                    }
                    w[c] = acc;
                    rem = c;
                    for (std::size_t a = 0; a < deg; ++a) {
                        const std::uint32_t m = rem % M_;
                        rem /= M_;
                        const double v = acc - u2r[k][a * M_ + m];
                        if (v > maxw[a * M_ + m]) maxw[a * M_ + m] = v;
                    }
                }
                for (std::size_t c = 0; c < combos_[k]; ++c) {
                    std::size_t rem = c;
                    for (std::size_t a = 0; a < deg; ++a) {
                        const std::uint32_t m = rem % M_;
                        rem /= M_;
                        sums[a * M_ + m] += std::exp((w[c] - u2r[k][a * M_ + m]) - maxw[a * M_ + m]);
                    }
                }
                for (std::size_t a = 0; a < deg; ++a) {
                    double peak = -std::numeric_limits<double>::infinity();
                    for (std::uint32_t m = 0; m < M_; ++m) {
                        double& v = r2u[k][a * M_ + m];
                        v = maxw[a * M_ + m] + std::log(sums[a * M_ + m]);
                        peak = std::max(peak, v);
                    }
                    for (std::uint32_t m = 0; m < M_; ++m) r2u[k][a * M_ + m] -= peak;
                }
            }
            // User update: combine the other resources' messages.
            for (std::uint32_t j = 0; j < J_; ++j) {
                for (const std::uint32_t k : user_res_[j]) {
                    const int a = edge_of_[static_cast<std::size_t>(k) * J_ + j];
                    double peak = -std::numeric_limits<double>::infinity();
                    for (std::uint32_t m = 0; m < M_; ++m) {
                        double acc = 0.0;
                        for (const std::uint32_t k2 : user_res_[j]) {
                            if (k2 == k) continue;
                            const int a2 = edge_of_[static_cast<std::size_t>(k2) * J_ + j];
                            acc += r2u[k2][static_cast<std::size_t>(a2) * M_ + m];
                        }
                        u2r[k][static_cast<std::size_t>(a) * M_ + m] = acc;
                        peak = std::max(peak, acc);
                    }
                    for (std::uint32_t m = 0; m < M_; ++m) u2r[k][static_cast<std::size_t>(a) * M_ + m] -= peak;
                }
            }
        }

        MpaResult out;
        out.symbols.resize(J_);
        out.bit_llrs.assign(J_, std::vector<double>(bps_));
        out.beliefs.assign(J_, std::vector<double>(M_));
        for (std::uint32_t j = 0; j < J_; ++j) {
            std::vector<double> b(M_, 0.0);
            for (const std::uint32_t k : user_res_[j]) {
                const int a = edge_of_[static_cast<std::size_t>(k) * J_ + j];
                for (std::uint32_t m = 0; m < M_; ++m) b[m] += r2u[k][static_cast<std::size_t>(a) * M_ + m];
            }
            std::uint32_t best = 0;
            double peak = b[0];
            for (std::uint32_t m = 1; m < M_; ++m)
                if (b[m] > peak) {
                    peak = b[m];
                    best = m;
                }
            out.symbols[j] = best;
            double z = 0.0;
            for (std::uint32_t m = 0; m < M_; ++m) z += std::exp(b[m] - peak);
            const double logz = peak + std::log(z);
            for (std::uint32_t m = 0; m < M_; ++m) out.beliefs[j][m] = std::exp(b[m] - logz);
            for (std::uint32_t i = 0; i < bps_; ++i) {
                // Bit i (MSB first) of the Gray label of the point index.
                double max0 = -std::numeric_limits<double>::infinity();
                double max1 = max0;
                for (std::uint32_t m = 0; m < M_; ++m) {
                    const bool one = (gray_encode(m) >> (bps_ - 1 - i)) & 1u;
                    (one ? max1 : max0) = std::max(one ? max1 : max0, b[m]);
                }
                double s0 = 0.0, s1 = 0.0;
                for (std::uint32_t m = 0; m < M_; ++m) {
                    const bool one = (gray_encode(m) >> (bps_ - 1 - i)) & 1u;
                    if (one) s1 += std::exp(b[m] - max1);
                    else s0 += std::exp(b[m] - max0);
                }
                out.bit_llrs[j][i] = (max0 + std::log(s0)) - (max1 + std::log(s1));
            }
        }
        return out;
    }

  private:
    const CodebookSet* set_;
    std::uint32_t M_, K_, J_, bps_ = 0;
    std::vector<std::vector<std::uint32_t>> res_users_;
    std::vector<std::vector<std::uint32_t>> user_res_;
    std::vector<int> edge_of_;
    std::vector<std::vector<cplx>> sym_;
    std::vector<std::size_t> combos_;
};

}  // namespace scma
