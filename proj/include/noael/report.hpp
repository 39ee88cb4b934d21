#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "noael/closure.hpp"
#include "noael/types.hpp"

namespace noael {

/// Serializable analysis report ("report-v1"). JSON and TSV carry the same
/// numbers: 6 significant digits by default, full precision on request.
struct ReportDocument {
    std::string dataset_id;
    AnalysisConfig config;
    AnalysisReport analysis;
    std::string input_sha256;  // optional provenance for file-loaded data
    bool full_precision = false;

    static constexpr const char* schema_id = "report-v1";
};

namespace detail {

inline double rounded(double x, bool full) {
    if (full) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    return back;
}

inline std::string num_str(double x, bool full) {
    char buf[40];
    std::snprintf(buf, sizeof buf, full ? "%.17g" : "%.6g", x);
    return buf;
}

}  // namespace detail

inline nlohmann::json to_json(const ReportDocument& doc) {
    nlohmann::json j;
    j["schema"] = ReportDocument::schema_id;

    nlohmann::json meta;
    meta["dataset"] = doc.dataset_id;
    meta["method"] = to_string(doc.config.method);
    meta["endpoint_direction"] = to_string(doc.config.direction);
    meta["alpha"] = doc.config.alpha;
    meta["hc"] = to_string(doc.config.hc_kind);
    meta["poly_k"] = doc.config.poly_k;
    meta["ratio_margin"] = doc.config.ratio_margin;
    meta["seed"] = doc.config.qmc_seed;
    meta["qmc_error_target"] = doc.config.qmc_error_target;
    meta["qmc_points_used"] = doc.analysis.closure.qmc_points;
    meta["tool_version"] = version_string;
    if (!doc.input_sha256.empty()) meta["input_sha256"] = doc.input_sha256;
    j["metadata"] = std::move(meta);

    const bool full = doc.full_precision;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : doc.analysis.closure.comparisons) {
        nlohmann::json r;
        r["comparison"] = row.label;
        r["statistic"] = detail::rounded(row.statistic, full);
        r["df"] = std::isinf(row.df) ? nlohmann::json("normal")
                                     : nlohmann::json(detail::rounded(row.df, full));
        r["raw_p"] = detail::rounded(row.p_raw, full);
        r["adjusted_p"] = detail::rounded(row.p_adjusted, full);
        if (row.p_error > 0.0) r["p_error_estimate"] = detail::rounded(row.p_error, full);
        r["significant"] = row.p_adjusted < doc.config.alpha;
        r["contributing"] = row.contributing;
        if (row.degenerate) r["degenerate"] = true;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);

    const NoaelDecision& d = doc.analysis.decision;
    nlohmann::json dec;
    switch (d.kind) {
        case NoaelDecision::Kind::dose: dec["kind"] = "dose"; break;
        case NoaelDecision::Kind::none_below_lowest: dec["kind"] = "none_below_lowest"; break;
        case NoaelDecision::Kind::top_dose_safe: dec["kind"] = "top_dose_safe"; break;
    }
    if (!d.noael_label.empty()) dec["noael"] = d.noael_label;
    if (d.med_label) dec["med"] = *d.med_label;
    dec["alpha"] = d.alpha;
    dec["direction"] = to_string(d.direction);
    if (!d.caveat.empty()) dec["caveat"] = d.caveat;
    j["decision"] = std::move(dec);

    j["warnings"] = doc.analysis.closure.warnings;
    return j;
}

inline std::string to_json_string(const ReportDocument& doc) {
    return to_json(doc).dump(2) + "\n";
}

inline std::string to_tsv(const ReportDocument& doc) {
    const bool full = doc.full_precision;
    std::ostringstream out;
    out << "# dataset=" << doc.dataset_id << " method=" << to_string(doc.config.method)
        << " direction=" << to_string(doc.config.direction)
        << " alpha=" << detail::num_str(doc.config.alpha, full)
        << " seed=" << doc.config.qmc_seed << " version=" << version_string << "\n";
    out << "comparison\tstatistic\tdf\traw_p\tadjusted_p\tsignificant\n";
    for (const auto& row : doc.analysis.closure.comparisons) {
        out << row.label << '\t' << detail::num_str(row.statistic, full) << '\t'
            << (std::isinf(row.df) ? std::string("normal") : detail::num_str(row.df, full))
            << '\t' << detail::num_str(row.p_raw, full) << '\t'
            << detail::num_str(row.p_adjusted, full) << '\t'
            << (row.p_adjusted < doc.config.alpha ? "yes" : "no") << '\n';
    }
    const NoaelDecision& d = doc.analysis.decision;
    out << "# NOAEL: " << d.describe();
    if (d.med_label) out << " (MED " << *d.med_label << ")";
    out << "\n";
    for (const auto& w : doc.analysis.closure.warnings) out << "# warning: " << w << "\n";
    return out.str();
}

}  // namespace noael
