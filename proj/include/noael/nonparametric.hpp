#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "noael/distributions.hpp"
#include "noael/types.hpp"

namespace noael {

/// Estimated relative effect P(X_control < X_dose) + 1/2 P(=) with the
/// Brunner-Munzel placement variance and Satterthwaite-type df.
struct RelativeEffectEstimate {
    double p_hat = 0.5;
    double variance = 0.0;
    int n0 = 0;
    int n1 = 0;
    double df = 1.0;
    bool df_clamped = false;
};

namespace detail {

// placement of each value of `a` within `b`: #(b < a_i) + 1/2 #(b == a_i),
// computed against a sorted copy of b.
inline std::vector<double> placements(std::span<const double> a,
                                      std::span<const double> b) {
    std::vector<double> sorted(b.begin(), b.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(a.size());
    for (double x : a) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), x);
        double below = static_cast<double>(lo - sorted.begin());
        double ties = static_cast<double>(hi - lo);
        out.push_back(below + 0.5 * ties);
    }
    return out;
}

inline double sample_variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return v.size() > 1 ? ss / (static_cast<double>(v.size()) - 1) : 0.0;
}

}  // namespace detail

inline RelativeEffectEstimate relative_effect(std::span<const double> control,
                                              std::span<const double> dose) {
    if (control.empty() || dose.empty())
        throw data_error("relative effect needs two nonempty samples");
    const double n0 = static_cast<double>(control.size());
    const double n1 = static_cast<double>(dose.size());

    std::vector<double> place_dose = detail::placements(dose, control);     // vs control
    std::vector<double> place_ctrl = detail::placements(control, dose);     // vs dose

    RelativeEffectEstimate est;
    est.n0 = static_cast<int>(control.size());
    est.n1 = static_cast<int>(dose.size());

    double mean_pd = 0.0;
    for (double p : place_dose) mean_pd += p;
    est.p_hat = mean_pd / (n0 * n1);

    for (auto& p : place_dose) p /= n0;
    for (auto& p : place_ctrl) p /= n1;
    const double s1 = detail::sample_variance(place_ctrl);  // within control
    const double sd = detail::sample_variance(place_dose);  // within dose
    const double a = s1 / n0;
    const double b = sd / n1;
    est.variance = a + b;

    if (est.variance > 0.0) {
        est.df = (a + b) * (a + b) / (a * a / (n0 - 1.0) + b * b / (n1 - 1.0));
        if (!(est.df >= 1.0)) {  // catches NaN and tiny values
            est.df = 1.0;
            est.df_clamped = true;
        }
    } else {
        est.df = 1.0;
        est.df_clamped = true;
    }
    return est;
}

enum class BmScale { identity, logit };

/// One-sided Brunner-Munzel test of H0: relative effect = 1/2.
/// Degenerate variance never throws: fully tied data yields p = 0.5 and a
/// separated sample yields a boundary p, both flagged.
inline TestOutcome bm_test(std::span<const double> control, std::span<const double> dose,
                           Direction direction, BmScale scale = BmScale::identity,
                           const std::string& label = {}) {
    RelativeEffectEstimate est = relative_effect(control, dose);
    TestOutcome out;
    out.label = label;
    out.direction = direction;
    out.df = est.df;
    out.df_clamped = est.df_clamped;

    if (est.variance <= 0.0) {
        out.degenerate = true;
        if (est.p_hat == 0.5) {
            out.statistic = 0.0;
            out.p_raw = 0.5;
        } else {
            out.statistic = est.p_hat > 0.5 ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
            out.p_raw = (est.p_hat > 0.5) == (direction == Direction::greater) ? 0.0 : 1.0;
        }
        return out;
    }

    const double se = std::sqrt(est.variance);
    if (scale == BmScale::identity) {
        out.statistic = (est.p_hat - 0.5) / se;
    } else {
        if (est.p_hat <= 0.0 || est.p_hat >= 1.0) {
            out.degenerate = true;
            out.statistic = est.p_hat >= 1.0 ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity();
            out.p_raw = (est.p_hat >= 1.0) == (direction == Direction::greater) ? 0.0 : 1.0;
            return out;
        }
        // delta method on logit(p): se_logit = se / (p (1-p))
        out.statistic = std::log(est.p_hat / (1.0 - est.p_hat)) * est.p_hat *
                        (1.0 - est.p_hat) / se;
    }
    out.p_raw = one_sided_p(out.statistic, out.df, direction);
    return out;
}

inline TestOutcome bm_test(const std::vector<int>& control, const std::vector<int>& dose,
                           Direction direction, BmScale scale = BmScale::identity,
                           const std::string& label = {}) {
    std::vector<double> c(control.begin(), control.end());
    std::vector<double> d(dose.begin(), dose.end());
    return bm_test(std::span<const double>(c), std::span<const double>(d),
                   direction, scale, label);
}

}  // namespace noael
