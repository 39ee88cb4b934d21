#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "noael/distributions.hpp"
#include "noael/types.hpp"

namespace noael {

/// Symmetric positive-semidefinite matrix with unit diagonal.
class CorrelationMatrix {
public:
    CorrelationMatrix() : dim_(1), entries_{1.0} {}

    /// entries is row-major dim x dim. Throws numeric_error when the matrix
    /// is asymmetric, has off-unit diagonal, or fails a pivoted Cholesky.
    CorrelationMatrix(int dim, std::vector<double> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim_ < 1) throw numeric_error("correlation dimension must be >= 1");
        if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
            throw numeric_error("correlation entries do not match dimension");
        const double tol = 1e-10;
        for (int i = 0; i < dim_; ++i) {
            if (std::abs(at(i, i) - 1.0) > tol)
                throw numeric_error("correlation diagonal must be 1");
            entries_[static_cast<std::size_t>(i) * dim_ + i] = 1.0;
            for (int j = 0; j < i; ++j) {
                if (std::abs(at(i, j) - at(j, i)) > tol)
                    throw numeric_error("correlation matrix must be symmetric");
                double v = 0.5 * (at(i, j) + at(j, i));
                if (std::abs(v) > 1.0 + tol)
                    throw numeric_error("correlation entries must lie in [-1,1]");
                v = std::clamp(v, -1.0, 1.0);
                entries_[static_cast<std::size_t>(i) * dim_ + j] = v;
                entries_[static_cast<std::size_t>(j) * dim_ + i] = v;
            }
        }
        check_psd();
    }

    static CorrelationMatrix identity(int dim) {
        std::vector<double> e(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i) * dim + i] = 1.0;
        return CorrelationMatrix(dim, std::move(e));
    }

    static CorrelationMatrix equicorrelated(int dim, double rho) {
        std::vector<double> e(static_cast<std::size_t>(dim) * dim, rho);
        for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i) * dim + i] = 1.0;
        return CorrelationMatrix(dim, std::move(e));
    }

    int dim() const { return dim_; }
    double at(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * dim_ + j];
    }
    const std::vector<double>& entries() const { return entries_; }

private:
    // Pivoted Cholesky; PSD iff all pivots are >= -tol.
    void check_psd() const {
        std::vector<double> a = entries_;
        auto A = [&](int i, int j) -> double& {
            return a[static_cast<std::size_t>(i) * dim_ + j];
        };
        std::vector<int> perm(dim_);
        for (int i = 0; i < dim_; ++i) perm[i] = i;
        for (int i = 0; i < dim_; ++i) {
            int piv = i;
            for (int j = i + 1; j < dim_; ++j)
                if (A(j, j) > A(piv, piv)) piv = j;
            if (piv != i) {
                for (int c = 0; c < dim_; ++c) std::swap(A(i, c), A(piv, c));
                for (int r = 0; r < dim_; ++r) std::swap(A(r, i), A(r, piv));
            }
            double d = A(i, i);
            if (d < -1e-8) throw numeric_error("correlation matrix is not positive semidefinite");
            if (d <= 1e-12) continue;  // remaining block must be ~0 for PSD
            double root = std::sqrt(d);
            for (int j = i + 1; j < dim_; ++j) {
                double f = A(j, i) / d;
                for (int c = i + 1; c < dim_; ++c) A(j, c) -= f * A(i, c);
                A(j, i) = f * root;
            }
            A(i, i) = root;
        }
    }

    int dim_;
    std::vector<double> entries_;
};

struct QmcConfig {
    std::uint64_t seed = 20230101;
    double error_target = 1e-5;
    std::int64_t max_points = 8388608;
    int replicates = 12;
};

struct QmcResult {
    double value = 0.0;
    double error_estimate = 0.0;  // ~99% confidence half-width (3 x SE over shifts)
    std::int64_t points_used = 0;
    bool target_met = true;

    bool operator==(const QmcResult&) const = default;
};

namespace detail {

inline constexpr double kPrimes[] = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229};

// sqrt(quantile(chi^2_df, w) / df), tabulated on a 1/1024 grid with cubic
// Hermite interpolation; exact evaluation in the outermost grid cells where
// the quantile curve is steep.
class ChiScale {
public:
    explicit ChiScale(int df) : df_(df) {
        r_.resize(kNodes + 1);
        dr_.resize(kNodes + 1);
        for (int i = 1; i < kNodes; ++i) {
            double w = static_cast<double>(i) / kNodes;
            double q = chi_squared_quantile(w, df_);
            double r = std::sqrt(q / df_);
            r_[i] = r;
            // dr/dw = (dq/dw) * dr/dq = 1/pdf(q) * 1/(2*sqrt(q*df))
            dr_[i] = 1.0 / (chi_squared_pdf(q, df_) * 2.0 * std::sqrt(q * df_));
        }
    }

    double operator()(double w) const {
        double scaled = w * kNodes;
        int seg = static_cast<int>(scaled);
        if (seg < 1 || seg >= kNodes - 1)
            return std::sqrt(chi_squared_quantile(w, df_) / df_);
        double t = scaled - seg;
        double h = 1.0 / kNodes;
        double t2 = t * t, t3 = t2 * t;
        double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * r_[seg] + h10 * h * dr_[seg] +
               h01 * r_[seg + 1] + h11 * h * dr_[seg + 1];
    }

private:
    static constexpr int kNodes = 1024;
    int df_;
    std::vector<double> r_, dr_;
};

// Cholesky factor with greedy variable ordering: at each stage pick the
// variable whose conditional probability is smallest, substituting truncated
// expectations for the integration variables (Genz-Bretz reordering).
struct SovFactor {
    int dim = 0;
    std::vector<double> lower;  // row-major dim x dim
    std::vector<double> bounds; // permuted upper bounds

    double l(int i, int j) const { return lower[static_cast<std::size_t>(i) * dim + j]; }
};

inline SovFactor reorder_cholesky(std::span<const double> upper,
                                  const CorrelationMatrix& corr) {
    const int m = corr.dim();
    const double tiny = 1e-12;
    std::vector<double> c = corr.entries();
    auto C = [&](int i, int j) -> double& {
        return c[static_cast<std::size_t>(i) * m + j];
    };
    SovFactor f;
    f.dim = m;
    f.lower.assign(static_cast<std::size_t>(m) * m, 0.0);
    f.bounds.assign(upper.begin(), upper.end());
    auto L = [&](int i, int j) -> double& {
        return f.lower[static_cast<std::size_t>(i) * m + j];
    };
    std::vector<double> y(m, 0.0);

    for (int i = 0; i < m; ++i) {
        // pick the tightest remaining bound, conditionally on y so far
        int best = i;
        double best_p = std::numeric_limits<double>::infinity();
        for (int j = i; j < m; ++j) {
            double var = C(j, j);
            double num = f.bounds[j];
            for (int k = 0; k < i; ++k) {
                var -= L(j, k) * L(j, k);
                num -= L(j, k) * y[k];
            }
            double p;
            if (var > tiny)
                p = normal_cdf(num / std::sqrt(var));
            else
                p = num >= 0 ? 1.0 : 0.0;
            if (p < best_p) {
                best_p = p;
                best = j;
            }
        }
        if (best != i) {
            std::swap(f.bounds[best], f.bounds[i]);
            for (int k = 0; k < i; ++k) std::swap(L(best, k), L(i, k));
            for (int col = 0; col < m; ++col) std::swap(C(i, col), C(best, col));
            for (int row = 0; row < m; ++row) std::swap(C(row, i), C(row, best));
        }
        double var = C(i, i);
        double num = f.bounds[i];
        for (int k = 0; k < i; ++k) {
            var -= L(i, k) * L(i, k);
            num -= L(i, k) * y[k];
        }
        if (var < -1e-8) throw numeric_error("correlation matrix is not positive semidefinite");
        double lii = std::sqrt(std::max(var, 0.0));
        L(i, i) = lii;
        if (lii > tiny) {
            for (int j = i + 1; j < m; ++j) {
                double v = C(j, i);
                for (int k = 0; k < i; ++k) v -= L(j, k) * L(i, k);
                L(j, i) = v / lii;
            }
            double d = num / lii;
            double e = normal_cdf(d);
            if (e > 1e-10)
                y[i] = -normal_pdf(d) / e;        // mean of N(0,1) truncated to (-inf, d]
            else
                y[i] = d < 0 ? d - 1.0 / d : 0.0; // deep-tail asymptote
        } else {
            // singular direction: a.s. determined by earlier variables
            y[i] = 0.0;
        }
    }
    return f;
}

inline double frac(double x) { return x - std::floor(x); }

}  // namespace detail

/// P(T_1 <= upper_1, ..., T_m <= upper_m) for a central multivariate t with
/// the given correlation matrix and df degrees of freedom (df = 0 selects the
/// multivariate normal). Separation-of-variables transform integrated with a
/// randomly shifted Richtmyer lattice; the error estimate comes from the
/// spread over the random shifts. Deterministic for a fixed seed.
inline QmcResult mvt_cdf(std::span<const double> upper, const CorrelationMatrix& corr,
                         int df, const QmcConfig& cfg = {}) {
    const int m = corr.dim();
    if (static_cast<int>(upper.size()) != m)
        throw numeric_error("bounds do not match correlation dimension");
    if (df < 0) throw numeric_error("df must be >= 0 (0 = normal)");

    const double inf = std::numeric_limits<double>::infinity();
    for (double b : upper)
        if (std::isnan(b)) throw numeric_error("bound is NaN");

    QmcResult res;
    // exact shortcuts
    for (double b : upper) {
        if (b == -inf) return {0.0, 0.0, 0, true};
    }
    if (m == 1) {
        double v = df == 0 ? normal_cdf(upper[0]) : t_cdf(upper[0], df);
        return {v, 0.0, 0, true};
    }
    bool all_inf = true;
    for (double b : upper) all_inf = all_inf && b == inf;
    if (all_inf) return {1.0, 0.0, 0, true};

    detail::SovFactor f = detail::reorder_cholesky(upper, corr);

    const bool is_t = df > 0;
    const int qdim = (is_t ? 1 : 0) + (m - 1);
    std::unique_ptr<detail::ChiScale> chi;
    if (is_t) chi = std::make_unique<detail::ChiScale>(df);

    std::vector<double> gen(qdim);
    for (int j = 0; j < qdim; ++j) gen[j] = std::sqrt(detail::kPrimes[j]);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const int ns = std::max(cfg.replicates, 2);
    std::vector<double> shift(qdim), y(m), rep_mean(ns);

    std::int64_t n = 2048;
    const double tiny = 1e-12;
    while (true) {
        std::int64_t remaining = cfg.max_points - res.points_used;
        if (remaining < static_cast<std::int64_t>(ns) * 64) {
            if (res.points_used > 0) {
                res.target_met = false;
                break;
            }
            remaining = static_cast<std::int64_t>(ns) * 64;
        }
        const bool budget_bound = static_cast<std::int64_t>(ns) * n >= remaining;
        if (budget_bound) n = std::max<std::int64_t>(remaining / ns, 64);
        for (int rep = 0; rep < ns; ++rep) {
            for (int j = 0; j < qdim; ++j) shift[j] = unif(rng);
            double acc = 0.0;
            for (std::int64_t k = 1; k <= n; ++k) {
                int uidx = 0;
                double r = 1.0;
                if (is_t) {
                    double w = std::abs(2.0 * detail::frac(k * gen[0] + shift[0]) - 1.0);
                    w = std::clamp(w, 1e-16, 1.0 - 1e-16);
                    r = (*chi)(w);
                    uidx = 1;
                }
                double val = 1.0;
                for (int i = 0; i < m; ++i) {
                    double num = r * f.bounds[i];
                    for (int k2 = 0; k2 < i; ++k2) num -= f.l(i, k2) * y[k2];
                    double lii = f.l(i, i);
                    double e;
                    if (lii > tiny)
                        e = normal_cdf(num / lii);
                    else
                        e = num >= 0 ? 1.0 : 0.0;
                    val *= e;
                    if (val <= 0.0) break;
                    if (i < m - 1) {
                        double u = std::abs(2.0 * detail::frac(k * gen[uidx] + shift[uidx]) - 1.0);
                        ++uidx;
                        double t = std::clamp(u * e, 1e-300, 1.0 - 1e-16);
                        y[i] = normal_quantile(t);
                    }
                }
                acc += val;
            }
            rep_mean[rep] = acc / static_cast<double>(n);
        }
        double mean = 0.0;
        for (double v : rep_mean) mean += v;
        mean /= ns;
        double var = 0.0;
        for (double v : rep_mean) var += (v - mean) * (v - mean);
        var /= (ns - 1);
        res.value = std::clamp(mean, 0.0, 1.0);
        res.error_estimate = 3.0 * std::sqrt(var / ns);
        res.points_used += static_cast<std::int64_t>(ns) * n;
        if (res.error_estimate <= cfg.error_target) {
            res.target_met = true;
            break;
        }
        if (budget_bound) {
            res.target_met = false;
            break;
        }
        n *= 4;
    }
    return res;
}

inline QmcResult mvt_cdf(const std::vector<double>& upper, const CorrelationMatrix& corr,
                         int df, const QmcConfig& cfg = {}) {
    return mvt_cdf(std::span<const double>(upper), corr, df, cfg);
}

}  // namespace noael
