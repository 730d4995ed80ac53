#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/common.hpp"
#include "scma/design_params.hpp"
#include "scma/metrics.hpp"
#include "scma/udcg.hpp"

namespace scma {

enum class GainCriterion { superimposed, codebook };

struct SearchConfig {
    double t_ini = 0.0;
    double t_end = 2.0;
    double grid_step = 0.05;
    GainCriterion criterion = GainCriterion::codebook;
};

inline void validate_search_config(const SearchConfig& c) {
    if (!(c.t_ini >= 0.0) || !(c.t_end > c.t_ini)) throw std::invalid_argument("need 0 <= t_ini < t_end");
    if (!(c.grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (c.t_ini + c.grid_step > c.t_end)
        throw std::invalid_argument("grid step must divide the range into at least 2 points");
}

struct StepSizeResult {
    double t_star = 0.0;
    double gain_star = 0.0;
    std::vector<std::pair<double, double>> trace;  ///< (t, gain), ordered by t
    bool searched = true;                          ///< false when V = 0 (no step to optimize)
    std::string note;
};

namespace detail {

/// Gain of one grid point. Both criteria are exact: the superimposed
/// criterion pairs the brute-force MED with the closed-form average energy;
/// the codebook criterion pairs the closed-form MED with the exact codebook
/// energy. A multi-ring group at t = 0 has coincident points, hence gain 0.
inline double grid_gain(DesignParams p, double t, GainCriterion crit, std::size_t cap) {
    p.t = t;
    const bool degenerate = p.V() >= 1 && t == 0.0;
    if (crit == GainCriterion::superimposed) {
        if (degenerate) return 0.0;
        const double d = med_superimposed(superimpose(build_udcg(p), cap));
        const double e_avg = sum_energy_superimposed(p, EnergyMode::closed_form) /
                             std::pow(static_cast<double>(p.M), static_cast<double>(p.d_f()));
        return coding_gain(d, e_avg);
    }
    const double d = med_codebook_closed(p, p.B);  // 0 when degenerate
    double s2 = 0.0;
    for (std::uint32_t v = 0; v <= p.V(); ++v) s2 += (p.a + v * t) * (p.a + v * t);
    const double e_avg = p.B * p.ring_size() * s2 / p.M;
    return coding_gain(d, e_avg);
}

}  // namespace detail

/// Exhaustive grid search for the coding-gain-maximizing amplitude step.
/// Evaluates the criterion on {t_ini, t_ini+step, ..., t_end}, returns the
/// argmax with ties broken toward smaller t, plus the full gain trace.
/// Single-ring layouts (V = 0) have no step to optimize: t_star = 0 with a
/// notice and a single-point trace.
inline StepSizeResult optimize_step_size(const DesignParams& params, const SearchConfig& cfg,
                                         std::size_t cap = kDefaultSuperposeCap) {
    validate_search_config(cfg);
    {
        DesignParams shape = params;
        shape.t = 1.0;  // validate everything except the step being searched
        validate_constellation_params(shape);
    }
    if (cfg.criterion == GainCriterion::codebook && params.B == 0)
        throw std::invalid_argument("codebook criterion needs B >= 1");
    StepSizeResult out;
    if (params.V() == 0) {
        out.searched = false;
        out.t_star = 0.0;
        out.note = "single amplitude ring (V = 0): step size has no effect, t fixed at 0";
        out.gain_star = detail::grid_gain(params, 0.0, cfg.criterion, cap);
        out.trace.emplace_back(0.0, out.gain_star);
        return out;
    }

    const auto n_steps = static_cast<std::size_t>(std::llround((cfg.t_end - cfg.t_ini) / cfg.grid_step));
    double best_gain = -1.0;
    double best_t = cfg.t_ini;
    for (std::size_t i = 0; i <= n_steps; ++i) {
        double t = cfg.t_ini + static_cast<double>(i) * cfg.grid_step;
        if (t > cfg.t_end) t = cfg.t_end;
        const double gain = detail::grid_gain(params, t, cfg.criterion, cap);
        out.trace.emplace_back(t, gain);
        if (gain > best_gain) {
            best_gain = gain;
            best_t = t;
        }
    }
    out.t_star = best_t;
    out.gain_star = best_gain;
    return out;
}

struct DesignOutput {
    CodebookSet set;
    MetricsReport report;
    StepSizeResult search;
};

/// End-to-end design: optimize the step size, build the group at t*, build
/// and allocate the factor graph, assemble codebooks, optionally interleave,
/// normalize, and attach a metrics report.
inline DesignOutput design_pipeline(const DesignParams& params, const SearchConfig& cfg, bool interleave,
                                    std::size_t cap = kDefaultSuperposeCap) {
    {
        DesignParams shape = params;
        shape.t = shape.V() >= 1 ? 1.0 : 0.0;
        validate_params(shape);
    }
    DesignOutput out;
    out.search = optimize_step_size(params, cfg, cap);

    DesignParams chosen = params;
    chosen.t = out.search.t_star;
    const ConstellationGroup group = build_udcg(chosen);
    const FactorGraph graph = design_factor_graph(params.K, params.J, params.B);
    const GenerationMatrix gen = allocate_generation_matrix(graph);
    CodebookSet set = build_codebook_set(gen, group, graph);
    set.params = chosen;
    if (interleave) set = interleave_codebook_set(set);
    out.set = normalize_codebook_set(set);
    out.report = evaluate_codebook_set(out.set, /*exact_mpd=*/false, cap);
    return out;
}

/// Fixed-step variant of the pipeline: skips the search and uses params.t.
inline DesignOutput design_with_fixed_step(const DesignParams& params, bool interleave,
                                           std::size_t cap = kDefaultSuperposeCap) {
    validate_params(params);
    DesignOutput out;
    out.search.searched = false;
    out.search.t_star = params.t;
    out.search.note = "step size fixed by caller";
    const ConstellationGroup group = build_udcg(params);
    const FactorGraph graph = design_factor_graph(params.K, params.J, params.B);
    const GenerationMatrix gen = allocate_generation_matrix(graph);
    CodebookSet set = build_codebook_set(gen, group, graph);
    set.params = params;
    if (interleave) set = interleave_codebook_set(set);
    out.set = normalize_codebook_set(set);
    out.report = evaluate_codebook_set(out.set, /*exact_mpd=*/false, cap);
    out.search.gain_star = out.report.gain_x;
    return out;
}

}  // namespace scma
