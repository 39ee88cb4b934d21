#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "noael/dataset.hpp"
#include "noael/distributions.hpp"
#include "noael/types.hpp"

namespace noael {

/// Survival-adjusted tumor-rate estimate for one group.
struct PolykEstimate {
    std::vector<double> weights;  // 1 for tumor bearers, (t/t_max)^k otherwise
    double n_star = 0.0;          // sum of weights (adjusted group size)
    double p_star = 0.0;          // tumors / n_star, in [0,1]
    double variance = 0.0;        // Bieler-Williams ratio delta method
    int n = 0;
    int tumors = 0;
};

/// poly-k weight per animal: w = 1 if the animal bears a tumor, otherwise
/// (time / t_max)^k.
inline std::vector<double> polyk_weights(const std::vector<AnimalRecord>& group,
                                         double k, double t_max) {
    if (!(t_max > 0.0)) throw numeric_error("t_max must be > 0");
    std::vector<double> w;
    w.reserve(group.size());
    for (const auto& a : group) {
        if (a.time > t_max) throw data_error("animal time exceeds t_max");
        w.push_back(a.status == 1 ? 1.0 : std::pow(a.time / t_max, k));
    }
    return w;
}

/// Per-group poly-k estimates with t_max taken as the study-wide maximum time.
/// Variance follows the Bieler-Williams ratio delta method with residuals
/// r_j = status_j - p_star * w_j:
///   var = [n/(n-1)] * sum(r_j^2) / n_star^2
inline std::vector<PolykEstimate> polyk_estimates(const IncidenceDataset& ds, double k) {
    const double t_max = ds.study_max_time();
    std::vector<PolykEstimate> out;
    for (std::size_t g = 0; g < ds.groups.size(); ++g) {
        const auto& animals = ds.animals[g];
        if (animals.size() < 2)
            throw data_error("group \"" + ds.groups[g].label + "\" has fewer than 2 animals");
        PolykEstimate est;
        est.n = static_cast<int>(animals.size());
        est.weights = polyk_weights(animals, k, t_max);
        for (std::size_t j = 0; j < animals.size(); ++j) {
            est.n_star += est.weights[j];
            est.tumors += animals[j].status;
        }
        est.p_star = static_cast<double>(est.tumors) / est.n_star;
        double ss = 0.0;
        for (std::size_t j = 0; j < animals.size(); ++j) {
            double r = static_cast<double>(animals[j].status) - est.p_star * est.weights[j];
            ss += r * r;
        }
        est.variance = static_cast<double>(est.n) / (est.n - 1.0) * ss / (est.n_star * est.n_star);
        out.push_back(std::move(est));
    }
    return out;
}

/// One-sided Z test of the weighted-proportion difference p*_d - p*_0 against
/// a standard normal reference.
inline TestOutcome polyk_contrast_test(const std::vector<PolykEstimate>& est,
                                       int dose_index, Direction direction,
                                       const std::string& label = {}) {
    if (dose_index < 1 || dose_index >= static_cast<int>(est.size()))
        throw usage_error("dose index out of range");
    TestOutcome out;
    out.label = label.empty() ? std::to_string(dose_index) + "-0" : label;
    out.direction = direction;
    out.df = std::numeric_limits<double>::infinity();
    const double diff = est[dose_index].p_star - est[0].p_star;
    const double var = est[dose_index].variance + est[0].variance;
    if (var <= 0.0) {
        out.degenerate = true;
        if (diff == 0.0) {
            out.statistic = 0.0;
            out.p_raw = 0.5;
        } else {
            out.statistic = diff > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
            out.p_raw = (diff > 0) == (direction == Direction::greater) ? 0.0 : 1.0;
        }
        return out;
    }
    out.statistic = diff / std::sqrt(var);
    out.p_raw = one_sided_p(out.statistic, out.df, direction);
    return out;
}

}  // namespace noael
