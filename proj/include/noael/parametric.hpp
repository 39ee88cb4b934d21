#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "noael/contrasts.hpp"
#include "noael/dataset.hpp"
#include "noael/distributions.hpp"
#include "noael/qmc_mvt.hpp"
#include "noael/types.hpp"

namespace noael {

/// One-way cell-means fit: per-group arithmetic means and centered residuals.
struct CellMeansFit {
    std::vector<double> means;
    std::vector<std::vector<double>> residuals;  // per group, sum to 0 within group
    std::vector<int> group_sizes;
    int df_resid = 0;  // N - number of groups
};

inline CellMeansFit fit_cell_means(const ContinuousDataset& ds) {
    CellMeansFit fit;
    int total = 0;
    for (std::size_t g = 0; g < ds.groups.size(); ++g) {
        const auto& obs = ds.observations[g];
        if (obs.size() < 2)
            throw data_error("group \"" + ds.groups[g].label + "\" has n < 2");
        double mean = 0.0;
        for (double x : obs) mean += x;
        mean /= static_cast<double>(obs.size());
        std::vector<double> resid;
        resid.reserve(obs.size());
        for (double x : obs) resid.push_back(x - mean);
        fit.means.push_back(mean);
        fit.residuals.push_back(std::move(resid));
        fit.group_sizes.push_back(static_cast<int>(obs.size()));
        total += static_cast<int>(obs.size());
    }
    fit.df_resid = total - static_cast<int>(ds.groups.size());
    if (fit.df_resid < 1) throw data_error("no residual degrees of freedom");
    return fit;
}

/// Covariance of the group-mean estimates. For one-way cell means the
/// between-group covariances are exactly zero, so only the diagonal is kept.
struct CovarianceEstimate {
    std::vector<double> group_mean_variance;
    HcKind kind = HcKind::hc3;

    std::size_t dim() const { return group_mean_variance.size(); }
};

/// Heteroscedasticity-consistent (sandwich) covariance of the group means.
/// With leverage h = 1/n_g per observation:
///   HC0:  var_g = sum e_i^2 / n_g^2
///   HC1:  HC0 scaled by N / df_resid
///   HC2:  e_i^2 replaced by e_i^2 / (1-h)
///   HC3:  e_i^2 replaced by e_i^2 / (1-h)^2
/// `none` is the pooled-variance OLS covariance s^2 / n_g.
inline CovarianceEstimate hc_covariance(const CellMeansFit& fit, HcKind kind) {
    CovarianceEstimate cov;
    cov.kind = kind;
    const std::size_t g = fit.means.size();
    int total = 0;
    for (int n : fit.group_sizes) total += n;

    if (kind == HcKind::none) {
        double sse = 0.0;
        for (const auto& resid : fit.residuals)
            for (double e : resid) sse += e * e;
        double s2 = sse / fit.df_resid;
        for (std::size_t i = 0; i < g; ++i)
            cov.group_mean_variance.push_back(s2 / fit.group_sizes[i]);
        return cov;
    }

    for (std::size_t i = 0; i < g; ++i) {
        const int n = fit.group_sizes[i];
        if ((kind == HcKind::hc2 || kind == HcKind::hc3) && n < 2)
            throw numeric_error("HC2/HC3 undefined for a group of size 1");
        const double h = 1.0 / n;
        double sum = 0.0;
        for (double e : fit.residuals[i]) {
            double e2 = e * e;
            switch (kind) {
                case HcKind::hc0: break;
                case HcKind::hc1: e2 *= static_cast<double>(total) / fit.df_resid; break;
                case HcKind::hc2: e2 /= (1.0 - h); break;
                case HcKind::hc3: e2 /= (1.0 - h) * (1.0 - h); break;
                case HcKind::none: break;
            }
            sum += e2;
        }
        cov.group_mean_variance.push_back(sum / (static_cast<double>(n) * n));
    }
    return cov;
}

/// Univariate one-sided pairwise test of dose group `dose_index` against
/// control, using the fitted means, the chosen covariance, and df_resid.
inline TestOutcome pairwise_p(const CellMeansFit& fit, const CovarianceEstimate& cov,
                              int dose_index, Direction direction,
                              const std::string& label = {}) {
    if (dose_index < 1 || dose_index >= static_cast<int>(fit.means.size()))
        throw usage_error("dose index out of range");
    TestOutcome out;
    out.label = label.empty() ? std::to_string(dose_index) + "-0" : label;
    out.direction = direction;
    out.df = fit.df_resid;
    const double diff = fit.means[dose_index] - fit.means[0];
    const double var = cov.group_mean_variance[dose_index] + cov.group_mean_variance[0];
    if (var <= 0.0) {
        out.degenerate = true;
        if (diff == 0.0) {
            out.statistic = 0.0;
            out.p_raw = 0.5;
        } else {
            out.statistic = diff > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
            out.p_raw = one_sided_p(out.statistic, out.df, direction);
        }
        return out;
    }
    out.statistic = diff / std::sqrt(var);
    out.p_raw = one_sided_p(out.statistic, out.df, direction);
    return out;
}

/// Rows of a simultaneous max-t contrast test: raw one-sided p per row plus
/// single-step adjusted p from the multivariate t over the plug-in
/// correlation R = D^{-1/2} (C V C') D^{-1/2}.
struct ContrastTestResult {
    std::vector<TestOutcome> rows;       // raw one-sided outcomes
    std::vector<double> p_adjusted;
    std::vector<double> p_adjusted_error;
    CorrelationMatrix correlation;
    std::int64_t qmc_points = 0;
};

namespace detail {

// statistics and plug-in correlation of a contrast family, no adjustment yet
inline ContrastTestResult contrast_stats(const CellMeansFit& fit,
                                         const CovarianceEstimate& cov,
                                         const ContrastMatrix& cm, Direction direction) {
    cm.validate();
    if (cm.n_groups() != fit.means.size())
        throw usage_error("contrast width does not match group count");
    const std::size_t m = cm.n_rows();
    ContrastTestResult res;

    std::vector<double> cvc(m);  // contrast variances
    for (std::size_t r = 0; r < m; ++r) {
        double est = 0.0, var = 0.0;
        for (std::size_t g = 0; g < cm.n_groups(); ++g) {
            est += cm.rows[r][g] * fit.means[g];
            var += cm.rows[r][g] * cm.rows[r][g] * cov.group_mean_variance[g];
        }
        if (var <= 0.0)
            throw numeric_error("zero variance for contrast \"" + cm.row_labels[r] + "\"");
        cvc[r] = var;
        TestOutcome out;
        out.label = cm.row_labels[r];
        out.direction = direction;
        out.df = fit.df_resid;
        out.statistic = est / std::sqrt(var);
        out.p_raw = one_sided_p(out.statistic, out.df, direction);
        res.rows.push_back(std::move(out));
    }

    if (m == 1) {
        res.correlation = CorrelationMatrix::identity(1);
        return res;
    }
    std::vector<double> entries(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        entries[r * m + r] = 1.0;
        for (std::size_t s = 0; s < r; ++s) {
            double cross = 0.0;
            for (std::size_t g = 0; g < cm.n_groups(); ++g)
                cross += cm.rows[r][g] * cm.rows[s][g] * cov.group_mean_variance[g];
            double rho = std::clamp(cross / std::sqrt(cvc[r] * cvc[s]), -1.0, 1.0);
            entries[r * m + s] = rho;
            entries[s * m + r] = rho;
        }
    }
    res.correlation = CorrelationMatrix(static_cast<int>(m), std::move(entries));
    return res;
}

// single-step adjusted p of one row: P(min_j T_j <= t) resp. P(max_j T_j >= t)
inline QmcResult max_t_adjusted(const ContrastTestResult& stats, std::size_t row,
                                int df, Direction direction, const QmcConfig& qmc) {
    const std::size_t m = stats.rows.size();
    double bound = direction == Direction::less ? -stats.rows[row].statistic
                                                : stats.rows[row].statistic;
    std::vector<double> upper(m, bound);
    QmcResult q = mvt_cdf(upper, stats.correlation, df, qmc);
    q.value = std::clamp(1.0 - q.value, 0.0, 1.0);
    return q;
}

}  // namespace detail

inline ContrastTestResult contrast_test(const CellMeansFit& fit,
                                        const CovarianceEstimate& cov,
                                        const ContrastMatrix& cm, Direction direction,
                                        const QmcConfig& qmc = {}) {
    ContrastTestResult res = detail::contrast_stats(fit, cov, cm, direction);
    if (res.rows.size() == 1) {
        res.p_adjusted.push_back(res.rows[0].p_raw);
        res.p_adjusted_error.push_back(0.0);
        return res;
    }
    for (std::size_t r = 0; r < res.rows.size(); ++r) {
        QmcResult q = detail::max_t_adjusted(res, r, fit.df_resid, direction, qmc);
        res.p_adjusted.push_back(q.value);
        res.p_adjusted_error.push_back(q.error_estimate);
        res.qmc_points += q.points_used;
    }
    return res;
}

/// Welch-type one-sided test of H0: mean_d / mean_0 <= margin (direction
/// greater; reversed for less) under variance heterogeneity:
///   T = (m_d - rho0 m_0) / sqrt(s_d^2/n_d + rho0^2 s_0^2/n_0)
/// with Satterthwaite degrees of freedom over the two variance components.
inline TestOutcome ratio_welch_test(const ContinuousDataset& ds, int dose_index,
                                    double margin, Direction direction) {
    if (dose_index < 1 || dose_index >= static_cast<int>(ds.groups.size()))
        throw usage_error("dose index out of range");
    if (!(margin > 0.0)) throw numeric_error("ratio margin must be > 0");

    auto moments = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair<double, double>(mean, ss / (static_cast<double>(v.size()) - 1));
    };
    const auto& y0 = ds.observations[0];
    const auto& yd = ds.observations[dose_index];
    auto [m0, s20] = moments(y0);
    auto [md, s2d] = moments(yd);

    const double a = s2d / static_cast<double>(yd.size());
    const double b = margin * margin * s20 / static_cast<double>(y0.size());
    if (a + b <= 0.0) throw numeric_error("zero variance in ratio test");

    TestOutcome out;
    out.label = ds.groups[dose_index].label + "/0";
    out.direction = direction;
    out.statistic = (md - margin * m0) / std::sqrt(a + b);
    double denom = a * a / (static_cast<double>(yd.size()) - 1) +
                   b * b / (static_cast<double>(y0.size()) - 1);
    out.df = (a + b) * (a + b) / denom;
    out.p_raw = one_sided_p(out.statistic, out.df, direction);
    return out;
}

/// Simultaneous version of the ratio-to-control tests: plug-in correlation
/// over the margin-adjusted coefficients, each row evaluated at its own
/// Satterthwaite df.
inline ContrastTestResult ratio_contrast_test(const ContinuousDataset& ds,
                                              const RatioContrastPair& rp,
                                              Direction direction,
                                              const QmcConfig& qmc = {}) {
    const std::size_t g = ds.groups.size();
    const std::size_t m = rp.numerator.size();
    ContrastTestResult res;

    std::vector<double> mean(g), var_of_mean(g), nsz(g);
    for (std::size_t i = 0; i < g; ++i) {
        const auto& v = ds.observations[i];
        double mu = 0.0;
        for (double x : v) mu += x;
        mu /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mu) * (x - mu);
        mean[i] = mu;
        nsz[i] = static_cast<double>(v.size());
        var_of_mean[i] = ss / (nsz[i] - 1) / nsz[i];
    }

    std::vector<std::vector<double>> eff(m, std::vector<double>(g));
    std::vector<double> rowvar(m), dfs(m);
    for (std::size_t r = 0; r < m; ++r) {
        double est = 0.0, var = 0.0, dfden = 0.0;
        for (std::size_t i = 0; i < g; ++i) {
            eff[r][i] = rp.numerator[r][i] - rp.margin * rp.denominator[r][i];
            est += eff[r][i] * mean[i];
            double term = eff[r][i] * eff[r][i] * var_of_mean[i];
            var += term;
            dfden += term * term / (nsz[i] - 1);
        }
        if (var <= 0.0)
            throw numeric_error("zero variance for ratio contrast \"" + rp.row_labels[r] + "\"");
        rowvar[r] = var;
        dfs[r] = var * var / dfden;
        TestOutcome out;
        out.label = rp.row_labels[r];
        out.direction = direction;
        out.statistic = est / std::sqrt(var);
        out.df = dfs[r];
        out.p_raw = one_sided_p(out.statistic, out.df, direction);
        res.rows.push_back(std::move(out));
    }

    if (m == 1) {
        res.p_adjusted.push_back(res.rows[0].p_raw);
        res.p_adjusted_error.push_back(0.0);
        res.correlation = CorrelationMatrix::identity(1);
        return res;
    }

    std::vector<double> entries(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        entries[r * m + r] = 1.0;
        for (std::size_t s = 0; s < r; ++s) {
            double cross = 0.0;
            for (std::size_t i = 0; i < g; ++i)
                cross += eff[r][i] * eff[s][i] * var_of_mean[i];
            double rho = std::clamp(cross / std::sqrt(rowvar[r] * rowvar[s]), -1.0, 1.0);
            entries[r * m + s] = rho;
            entries[s * m + r] = rho;
        }
    }
    res.correlation = CorrelationMatrix(static_cast<int>(m), std::move(entries));

    for (std::size_t r = 0; r < m; ++r) {
        double bound = direction == Direction::less ? -res.rows[r].statistic
                                                    : res.rows[r].statistic;
        std::vector<double> upper(m, bound);
        QmcResult q = mvt_cdf(upper, res.correlation,
                              static_cast<int>(std::lround(dfs[r])), qmc);
        res.p_adjusted.push_back(std::clamp(1.0 - q.value, 0.0, 1.0));
        res.p_adjusted_error.push_back(q.error_estimate);
        res.qmc_points += q.points_used;
    }
    return res;
}

}  // namespace noael
