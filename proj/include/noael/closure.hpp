#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "noael/contrasts.hpp"
#include "noael/dataset.hpp"
#include "noael/nonparametric.hpp"
#include "noael/parametric.hpp"
#include "noael/polyk.hpp"
#include "noael/qmc_mvt.hpp"
#include "noael/types.hpp"

namespace noael {

/// Closed testing over the hypothesis tree of comparisons against control.
/// Under the monotone dose-response restriction every intersection hypothesis
/// is covered by the pairwise test of its highest dose, so the adjusted
/// p-value of dose i is the maximum of the leaf p-values for doses >= i.
inline std::vector<double> ctp_adjust(const std::vector<double>& raw_p) {
    if (raw_p.empty()) throw usage_error("ctp_adjust needs at least one p-value");
    for (double p : raw_p)
        if (!(p >= 0.0 && p <= 1.0)) throw usage_error("p-values must lie in [0,1]");
    std::vector<double> adj(raw_p.size());
    double running = 0.0;
    for (std::size_t i = raw_p.size(); i-- > 0;) {
        running = std::max(running, raw_p[i]);
        adj[i] = running;
    }
    return adj;
}

/// Estimated NOAEL. `dose` carries the label of the highest non-significant
/// dose below the MED; the other kinds flag the two boundary situations.
struct NoaelDecision {
    enum class Kind { dose, none_below_lowest, top_dose_safe };

    Kind kind = Kind::top_dose_safe;
    std::string noael_label;              // set when kind == dose (or top_dose_safe)
    std::optional<std::string> med_label; // lowest significant dose
    double alpha = 0.05;
    Direction direction = Direction::greater;
    std::string caveat;

    std::string describe() const {
        switch (kind) {
            case Kind::dose: return noael_label;
            case Kind::none_below_lowest: return "none (below lowest dose)";
            case Kind::top_dose_safe: return noael_label + " (top dose)";
        }
        return {};
    }
};

/// NOAEL = dose immediately below the MED, where the MED is the lowest dose
/// significant at alpha (strict inequality). Requires a suffix-max adjusted
/// vector so that all doses above the MED are significant too.
inline NoaelDecision estimate_noael(const std::vector<double>& adjusted,
                                    const std::vector<std::string>& dose_labels,
                                    double alpha, Direction direction) {
    if (adjusted.empty() || adjusted.size() != dose_labels.size())
        throw usage_error("adjusted p-values and dose labels must align");
    for (std::size_t i = 1; i < adjusted.size(); ++i)
        if (adjusted[i] > adjusted[i - 1])
            throw usage_error("estimate_noael requires a monotone nonincreasing vector");

    NoaelDecision d;
    d.alpha = alpha;
    d.direction = direction;
    std::size_t med = adjusted.size();
    for (std::size_t i = 0; i < adjusted.size(); ++i) {
        if (adjusted[i] < alpha) {
            med = i;
            break;
        }
    }
    if (med == adjusted.size()) {
        d.kind = NoaelDecision::Kind::top_dose_safe;
        d.noael_label = dose_labels.back();
        d.caveat = "no dose reached significance; the NOAEL defaults to the top dose "
                   "and is limited by the tested dose range";
        return d;
    }
    d.med_label = dose_labels[med];
    if (med == 0) {
        d.kind = NoaelDecision::Kind::none_below_lowest;
        d.caveat = "the lowest dose is already significant; no NOAEL can be estimated";
        return d;
    }
    d.kind = NoaelDecision::Kind::dose;
    d.noael_label = dose_labels[med - 1];
    return d;
}

/// One row of a closure (or single-step) analysis.
struct ComparisonRow {
    std::string label;
    double p_raw = 0.0;        // leaf / per-subset p
    double p_adjusted = 0.0;
    double p_error = 0.0;      // QMC error estimate, 0 when deterministic
    double statistic = 0.0;
    double df = 0.0;
    std::vector<std::string> contributing;  // hypotheses feeding the adjusted max
    bool degenerate = false;
};

struct ClosureResult {
    std::vector<ComparisonRow> comparisons;  // ascending dose order
    Method method = Method::ctp_pairwise;
    double alpha = 0.05;
    Direction direction = Direction::greater;
    std::vector<std::string> warnings;
    std::int64_t qmc_points = 0;
};

namespace detail {

// suffix-max over leaf outcomes + provenance; flags non-monotone raw p's
inline void close_over_leaves(ClosureResult& res, const std::vector<TestOutcome>& leaves) {
    std::vector<double> raw;
    for (const auto& l : leaves) raw.push_back(l.p_raw);
    std::vector<double> adj = ctp_adjust(raw);
    std::vector<std::string> binds;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        ComparisonRow row;
        row.label = leaves[i].label;
        row.p_raw = leaves[i].p_raw;
        row.p_adjusted = adj[i];
        row.statistic = leaves[i].statistic;
        row.df = leaves[i].df;
        row.degenerate = leaves[i].degenerate;
        for (std::size_t j = i; j < leaves.size(); ++j)
            row.contributing.push_back(leaves[j].label);
        if (adj[i] != raw[i]) binds.push_back(leaves[i].label);
        res.comparisons.push_back(std::move(row));
        if (leaves[i].df_clamped)
            res.warnings.push_back("approximation df clamped to 1 for " + leaves[i].label);
        if (leaves[i].degenerate)
            res.warnings.push_back("degenerate variance for " + leaves[i].label);
    }
    if (!binds.empty()) {
        std::string w = "raw p-values are not monotone in dose; closure max binds at:";
        for (const auto& b : binds) w += " " + b;
        res.warnings.push_back(w);
    }
}

}  // namespace detail

/// Closure test with parametric pairwise leaf contrasts (deterministic).
inline ClosureResult ctp_pairwise(const CellMeansFit& fit, const CovarianceEstimate& cov,
                                  const std::vector<std::string>& group_labels,
                                  Direction direction, double alpha) {
    ClosureResult res;
    res.method = Method::ctp_pairwise;
    res.alpha = alpha;
    res.direction = direction;
    std::vector<TestOutcome> leaves;
    for (std::size_t d = 1; d < fit.means.size(); ++d)
        leaves.push_back(pairwise_p(fit, cov, static_cast<int>(d), direction,
                                    group_labels[d] + "-0"));
    detail::close_over_leaves(res, leaves);
    return res;
}

/// Single-step Dunnett procedure (no closure): simultaneous max-t adjusted
/// p-values over the plug-in correlation of the pairwise contrasts.
inline ClosureResult dunnett_single_step(const CellMeansFit& fit,
                                         const CovarianceEstimate& cov,
                                         const std::vector<std::string>& group_labels,
                                         Direction direction, double alpha,
                                         const QmcConfig& qmc) {
    ClosureResult res;
    res.method = Method::dunnett;
    res.alpha = alpha;
    res.direction = direction;
    ContrastMatrix cm = dunnett_matrix(fit.group_sizes, group_labels);
    ContrastTestResult ct = contrast_test(fit, cov, cm, direction, qmc);
    res.qmc_points = ct.qmc_points;
    for (std::size_t i = 0; i < ct.rows.size(); ++i) {
        ComparisonRow row;
        row.label = ct.rows[i].label;
        row.p_raw = ct.rows[i].p_raw;
        row.p_adjusted = ct.p_adjusted[i];
        row.p_error = ct.p_adjusted_error[i];
        row.statistic = ct.rows[i].statistic;
        row.df = ct.rows[i].df;
        row.contributing.push_back(ct.rows[i].label);
        res.comparisons.push_back(std::move(row));
    }
    return res;
}

/// Closure test over nested Williams-type subsets: for each subset {0..j} the
/// intersection hypothesis is tested by the simultaneous max-t Williams
/// contrast over that subset (padded with zeros to the full design), and the
/// adjusted p of dose i is the maximum over subsets j >= i. The two-group
/// subset reduces to the pairwise t test.
inline ClosureResult ctp_williams(const CellMeansFit& fit, const CovarianceEstimate& cov,
                                  const std::vector<std::string>& group_labels,
                                  Direction direction, double alpha,
                                  const QmcConfig& qmc) {
    ClosureResult res;
    res.method = Method::ctp_williams;
    res.alpha = alpha;
    res.direction = direction;
    const std::size_t k = fit.means.size() - 1;

    std::vector<double> subset_p(k + 1, 0.0);
    std::vector<double> subset_err(k + 1, 0.0);
    std::vector<std::string> subset_label(k + 1);
    std::vector<double> subset_stat(k + 1, 0.0);
    for (std::size_t j = 1; j <= k; ++j) {
        std::vector<int> sizes(fit.group_sizes.begin(), fit.group_sizes.begin() + j + 1);
        std::vector<std::string> labs(group_labels.begin(), group_labels.begin() + j + 1);
        ContrastMatrix cm = pad_subset(williams_matrix(sizes, labs), fit.means.size());
        ContrastTestResult ct = detail::contrast_stats(fit, cov, cm, direction);
        // the subset test rejects on its most extreme row; the simultaneous
        // p-value of that max-t statistic is the subset's intersection p
        std::size_t best = 0;
        for (std::size_t r = 1; r < ct.rows.size(); ++r) {
            if (direction == Direction::less
                    ? ct.rows[r].statistic < ct.rows[best].statistic
                    : ct.rows[r].statistic > ct.rows[best].statistic)
                best = r;
        }
        if (ct.rows.size() == 1) {
            subset_p[j] = ct.rows[0].p_raw;
        } else {
            QmcResult q = detail::max_t_adjusted(ct, best, fit.df_resid, direction, qmc);
            subset_p[j] = q.value;
            subset_err[j] = q.error_estimate;
            res.qmc_points += q.points_used;
        }
        subset_stat[j] = ct.rows[best].statistic;
        subset_label[j] = "W(0.." + group_labels[j] + ")";
    }

    for (std::size_t i = 1; i <= k; ++i) {
        ComparisonRow row;
        row.label = group_labels[i] + "-0";
        row.p_raw = subset_p[i];
        row.statistic = subset_stat[i];
        row.df = fit.df_resid;
        double adj = 0.0, err = 0.0;
        for (std::size_t j = i; j <= k; ++j) {
            if (subset_p[j] >= adj) {
                adj = subset_p[j];
                err = subset_err[j];
            }
            row.contributing.push_back(subset_label[j]);
        }
        row.p_adjusted = adj;
        row.p_error = err;
        res.comparisons.push_back(std::move(row));
    }
    return res;
}

/// Closure test with ratio-to-control Welch leaves (deterministic).
inline ClosureResult ctp_ratio(const ContinuousDataset& ds, double margin,
                               Direction direction, double alpha) {
    ClosureResult res;
    res.method = Method::ctp_ratio;
    res.alpha = alpha;
    res.direction = direction;
    std::vector<TestOutcome> leaves;
    for (std::size_t d = 1; d < ds.groups.size(); ++d)
        leaves.push_back(ratio_welch_test(ds, static_cast<int>(d), margin, direction));
    detail::close_over_leaves(res, leaves);
    return res;
}

/// Closure test with Brunner-Munzel relative-effect leaves (deterministic).
inline ClosureResult ctp_nonparametric(const ScoreDataset& ds, Direction direction,
                                       double alpha, BmScale scale = BmScale::identity) {
    ClosureResult res;
    res.method = Method::ctp_nonparametric;
    res.alpha = alpha;
    res.direction = direction;
    std::vector<TestOutcome> leaves;
    for (std::size_t d = 1; d < ds.groups.size(); ++d)
        leaves.push_back(bm_test(ds.observations[0], ds.observations[d], direction, scale,
                                 ds.groups[d].label + "-0"));
    detail::close_over_leaves(res, leaves);
    return res;
}

/// Closure test with poly-k weighted-proportion leaves (deterministic).
inline ClosureResult ctp_poly3(const IncidenceDataset& ds, double k, Direction direction,
                               double alpha) {
    ClosureResult res;
    res.method = Method::ctp_poly3;
    res.alpha = alpha;
    res.direction = direction;
    std::vector<PolykEstimate> est = polyk_estimates(ds, k);
    std::vector<TestOutcome> leaves;
    for (std::size_t d = 1; d < ds.groups.size(); ++d)
        leaves.push_back(polyk_contrast_test(est, static_cast<int>(d), direction,
                                             ds.groups[d].label + "-0"));
    detail::close_over_leaves(res, leaves);
    return res;
}

/// Full analysis report: the closure (or single-step) table plus the decision.
struct AnalysisReport {
    ClosureResult closure;
    NoaelDecision decision;
};

/// Dispatches the configured method over the endpoint, applies the closure
/// adjustment, and derives the NOAEL decision.
inline AnalysisReport run_analysis(const DoseResponseDataset& ds, const AnalysisConfig& cfg) {
    cfg.validate();
    validate(ds);
    const auto& groups = groups_of(ds);
    std::vector<std::string> labels;
    for (const auto& g : groups) labels.push_back(g.label);

    QmcConfig qmc{cfg.qmc_seed, cfg.qmc_error_target, cfg.qmc_max_points, 12};

    AnalysisReport rep;
    const EndpointKind kind = endpoint_of(ds);
    switch (cfg.method) {
        case Method::ctp_pairwise:
        case Method::dunnett:
        case Method::ctp_williams: {
            if (kind != EndpointKind::continuous)
                throw usage_error(to_string(cfg.method) + " requires a continuous endpoint");
            const auto& c = std::get<ContinuousDataset>(ds);
            CellMeansFit fit = fit_cell_means(c);
            CovarianceEstimate cov = hc_covariance(fit, cfg.hc_kind);
            if (cfg.method == Method::ctp_pairwise)
                rep.closure = ctp_pairwise(fit, cov, labels, cfg.direction, cfg.alpha);
            else if (cfg.method == Method::dunnett)
                rep.closure = dunnett_single_step(fit, cov, labels, cfg.direction,
                                                  cfg.alpha, qmc);
            else
                rep.closure = ctp_williams(fit, cov, labels, cfg.direction, cfg.alpha, qmc);
            break;
        }
        case Method::ctp_ratio: {
            if (kind != EndpointKind::continuous)
                throw usage_error("ctp-ratio requires a continuous endpoint");
            rep.closure = ctp_ratio(std::get<ContinuousDataset>(ds), cfg.ratio_margin,
                                    cfg.direction, cfg.alpha);
            break;
        }
        case Method::ctp_nonparametric: {
            if (kind != EndpointKind::score)
                throw usage_error("ctp-nonparametric requires a score endpoint");
            rep.closure = ctp_nonparametric(std::get<ScoreDataset>(ds), cfg.direction,
                                            cfg.alpha);
            break;
        }
        case Method::ctp_poly3: {
            if (kind != EndpointKind::incidence)
                throw usage_error("ctp-poly3 requires an incidence endpoint");
            rep.closure = ctp_poly3(std::get<IncidenceDataset>(ds), cfg.poly_k,
                                    cfg.direction, cfg.alpha);
            break;
        }
    }

    // The decision uses the monotone closure pattern. For the single-step
    // Dunnett the MED rule (lowest dose with all higher doses significant)
    // is applied through the same suffix max.
    std::vector<double> adj;
    for (const auto& row : rep.closure.comparisons) adj.push_back(row.p_adjusted);
    std::vector<double> pattern = ctp_adjust(adj);
    std::vector<std::string> dose_labels(labels.begin() + 1, labels.end());
    rep.decision = estimate_noael(pattern, dose_labels, cfg.alpha, cfg.direction);
    if (!rep.decision.caveat.empty())
        rep.closure.warnings.push_back(rep.decision.caveat);
    return rep;
}

}  // namespace noael
