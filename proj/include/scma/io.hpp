#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scma/codebook.hpp"
#include "scma/common.hpp"
#include "scma/linksim.hpp"
#include "scma/metrics.hpp"
#include "scma/optimizer.hpp"

namespace scma {

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

/// Doubles in the codebook file are rendered with 17 significant digits,
/// which round-trips IEEE-754 binary64 exactly.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Serializes a codebook set to the interchange schema:
/// { "K", "J", "M", "factor_graph": [column bitstrings],
///   "codebooks": J x K x M x [re, im], "meta": {...} }.
/// `extra` (if non-empty) is embedded verbatim under the given key, which the
/// CLI uses for run manifests.
inline std::string codebook_to_json(const CodebookSet& set, const std::string& extra_key = "",
                                    const std::string& extra_json = "") {
    std::ostringstream os;
    os << "{\n";
    os << "  \"K\": " << set.K() << ",\n";
    os << "  \"J\": " << set.J() << ",\n";
    os << "  \"M\": " << set.M() << ",\n";
    os << "  \"factor_graph\": [";
    for (std::uint32_t j = 0; j < set.J(); ++j) os << (j ? ", " : "") << '"' << set.graph.column_bits(j) << '"';
    os << "],\n";
    os << "  \"codebooks\": [\n";
    for (std::uint32_t j = 0; j < set.J(); ++j) {
        os << "    [";
        for (std::uint32_t k = 0; k < set.K(); ++k) {
            os << (k ? ",\n     [" : "[");
            for (std::uint32_t m = 0; m < set.M(); ++m) {
                const cplx v = set.books[j].at(k, m);
                os << (m ? ", " : "") << '[' << detail::fmt_double(v.real()) << ", "
                   << detail::fmt_double(v.imag()) << ']';
            }
            os << ']';
        }
        os << (j + 1 < set.J() ? "],\n" : "]\n");
    }
    os << "  ],\n";
    os << "  \"meta\": {\n";
    if (set.params) {
        const DesignParams& p = *set.params;
        os << "    \"design_params\": {\"M\": " << p.M << ", \"r\": " << p.r << ", \"a\": " << detail::fmt_double(p.a)
           << ", \"t\": " << detail::fmt_double(p.t) << ", \"epsilons\": [";
        for (std::size_t i = 0; i < p.epsilons.size(); ++i)
            os << (i ? ", " : "") << detail::fmt_double(p.epsilons[i]);
        os << "], \"K\": " << p.K << ", \"J\": " << p.J << ", \"B\": " << p.B << "},\n";
    } else {
        os << "    \"design_params\": null,\n";
    }
    os << "    \"normalization\": " << detail::fmt_double(set.normalization) << ",\n";
    os << "    \"interleaved\": " << (set.interleaved ? "true" : "false") << "\n";
    os << "  }";
    if (!extra_key.empty()) os << ",\n  \"" << extra_key << "\": " << extra_json;
    os << "\n}\n";
    return os.str();
}

inline CodebookSet codebook_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    CodebookSet set;
    const auto K = doc.at("K").get<std::uint32_t>();
    const auto J = doc.at("J").get<std::uint32_t>();
    const auto M = doc.at("M").get<std::uint32_t>();
    std::vector<std::string> cols = doc.at("factor_graph").get<std::vector<std::string>>();
    if (cols.size() != J) throw std::invalid_argument("factor_graph must list J columns");
    set.graph = factor_graph_from_columns(cols);
    if (set.graph.K != K) throw std::invalid_argument("factor_graph column length must equal K");

    const auto& books = doc.at("codebooks");
    if (books.size() != J) throw std::invalid_argument("codebooks must hold J entries");
    set.books.resize(J);
    for (std::uint32_t j = 0; j < J; ++j) {
        Codebook& b = set.books[j];
        b.K = K;
        b.M = M;
        b.x.assign(static_cast<std::size_t>(K) * M, cplx{0.0, 0.0});
        const auto& rows = books.at(j);
        if (rows.size() != K) throw std::invalid_argument("each codebook must have K rows");
        for (std::uint32_t k = 0; k < K; ++k) {
            const auto& row = rows.at(k);
            if (row.size() != M) throw std::invalid_argument("each codebook row must have M entries");
            for (std::uint32_t m = 0; m < M; ++m) {
                const auto& pair = row.at(m);
                if (pair.size() != 2) throw std::invalid_argument("complex entries are [re, im] pairs");
                b.at(k, m) = cplx{pair.at(0).get<double>(), pair.at(1).get<double>()};
            }
        }
    }
    if (doc.contains("meta")) {
        const auto& meta = doc.at("meta");
        if (meta.contains("normalization")) set.normalization = meta.at("normalization").get<double>();
        if (meta.contains("interleaved")) set.interleaved = meta.at("interleaved").get<bool>();
        if (meta.contains("design_params") && !meta.at("design_params").is_null()) {
            const auto& dp = meta.at("design_params");
            DesignParams p;
            p.M = dp.at("M").get<std::uint32_t>();
            p.r = dp.at("r").get<std::uint32_t>();
            p.a = dp.at("a").get<double>();
            p.t = dp.at("t").get<double>();
            p.epsilons = dp.at("epsilons").get<std::vector<double>>();
            p.K = dp.at("K").get<std::uint32_t>();
            p.J = dp.at("J").get<std::uint32_t>();
            p.B = dp.at("B").get<std::uint32_t>();
            set.params = p;
        }
    }
    return set;
}

inline nlohmann::json metrics_report_to_json(const MetricsReport& rep) {
    nlohmann::json j;
    j["e_c_sum"] = rep.e_c_sum;
    j["e_c_avg"] = rep.e_c_avg;
    j["d_min_c"] = rep.d_min_c;
    j["gain_c"] = rep.gain_c;
    j["e_x_avg"] = rep.e_x_avg;
    j["d_min_x"] = rep.d_min_x;
    j["gain_x"] = rep.gain_x;
    j["per_rn_med"] = rep.per_rn_med;
    j["per_rn_med_table"] = rep.per_rn_med_table;
    if (rep.mpd) j["mpd"] = {{"value", rep.mpd->value}, {"mode", rep.mpd->mode}};
    else j["mpd"] = nullptr;
    j["distance_convention"] = rep.distance_convention;
    j["table_normalization"] = rep.table_normalization;
    return j;
}

inline std::string ber_curve_to_csv(const BerCurve& curve) {
    std::ostringstream os;
    os << "ebno_db,bits,errors,ber,seed\n";
    for (const auto& p : curve.points)
        os << detail::fmt_double(p.ebno_db) << ',' << p.bits << ',' << p.errors << ','
           << detail::fmt_double(p.ber) << ',' << curve.seed << '\n';
    return os.str();
}

inline std::string trace_to_csv(const StepSizeResult& res) {
    std::ostringstream os;
    os << "t,gain\n";
    for (const auto& [t, g] : res.trace) os << detail::fmt_double(t) << ',' << detail::fmt_double(g) << '\n';
    return os.str();
}

/// One row per scheme, slash-separated per-resource MEDs (table layout).
inline std::string per_rn_med_csv(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    std::ostringstream os;
    os << "scheme,d_k_min\n";
    for (const auto& [name, meds] : rows) {
        os << name << ',';
        for (std::size_t k = 0; k < meds.size(); ++k) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.4f", meds[k]);
            os << (k ? "/" : "") << buf;
        }
        os << '\n';
    }
    return os.str();
}

struct RunManifest {
    std::string command;
    std::string argv_line;
    nlohmann::json parameters;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    std::string timestamp;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["argv"] = m.argv_line;
    j["parameters"] = m.parameters;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["timestamp"] = m.timestamp;
    return j;
}

/// Write-then-rename so downstream readers never observe partial files.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        os << content;
        if (!os) throw std::runtime_error("failed writing " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("failed to move " + tmp + " into place");
}

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::invalid_argument("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace scma
