#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "noael/types.hpp"

namespace noael {

/// Rows of contrast coefficients over group means. Every row sums to zero and
/// mixes at least one negative and one positive coefficient.
struct ContrastMatrix {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_labels;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_groups() const { return rows.empty() ? 0 : rows.front().size(); }

    void validate() const {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != n_groups())
                throw numeric_error("contrast rows have unequal lengths");
            double sum = 0.0;
            bool pos = false, neg = false;
            for (double c : rows[r]) {
                sum += c;
                pos = pos || c > 0.0;
                neg = neg || c < 0.0;
            }
            double tol = 1e-14 * static_cast<double>(rows[r].size());
            if (std::abs(sum) > tol)
                throw numeric_error("contrast row \"" + row_labels[r] + "\" does not sum to 0");
            if (!pos || !neg)
                throw numeric_error("contrast row \"" + row_labels[r] +
                                    "\" needs both signs");
        }
    }
};

/// Numerator/denominator selection rows for ratio-to-control comparisons,
/// plus the ratio margin under test (1 = equality of means).
struct RatioContrastPair {
    std::vector<std::vector<double>> numerator;    // nonnegative, each row sums to 1
    std::vector<std::vector<double>> denominator;  // nonnegative, each row sums to 1
    std::vector<std::string> row_labels;
    double margin = 1.0;
};

/// Pairwise comparisons of each dose group against control:
/// row j is -1 at control, +1 at dose j.
inline ContrastMatrix dunnett_matrix(const std::vector<int>& group_sizes,
                                     const std::vector<std::string>& labels = {}) {
    const std::size_t g = group_sizes.size();
    if (g < 2) throw numeric_error("need at least 2 groups for contrasts");
    ContrastMatrix cm;
    for (std::size_t j = 1; j < g; ++j) {
        std::vector<double> row(g, 0.0);
        row[0] = -1.0;
        row[j] = 1.0;
        cm.rows.push_back(std::move(row));
        std::string lab = labels.size() == g ? labels[j] : std::to_string(j);
        cm.row_labels.push_back(lab + "-0");
    }
    cm.validate();
    return cm;
}

/// Williams-type trend contrasts: row j compares control against the
/// sample-size-weighted mean of the j highest dose groups.  Row 1 therefore
/// equals the top-dose pairwise contrast and row k pools every dose.
inline ContrastMatrix williams_matrix(const std::vector<int>& group_sizes,
                                      const std::vector<std::string>& labels = {}) {
    const std::size_t g = group_sizes.size();
    if (g < 2) throw numeric_error("need at least 2 groups for contrasts");
    ContrastMatrix cm;
    for (std::size_t j = 1; j < g; ++j) {
        std::vector<double> row(g, 0.0);
        row[0] = -1.0;
        int total = 0;
        for (std::size_t t = g - j; t < g; ++t) total += group_sizes[t];
        for (std::size_t t = g - j; t < g; ++t)
            row[t] = static_cast<double>(group_sizes[t]) / total;
        cm.rows.push_back(std::move(row));
        std::string top = labels.size() == g ? labels[g - j] : std::to_string(g - j);
        cm.row_labels.push_back("C" + std::to_string(j) + ">=" + top);
    }
    cm.validate();
    return cm;
}

/// Extends contrast rows with zero coefficients on the right, for subset
/// contrasts embedded in the full design.
inline ContrastMatrix pad_subset(const ContrastMatrix& cm, std::size_t total_groups) {
    if (total_groups < cm.n_groups())
        throw numeric_error("cannot pad contrasts to fewer groups");
    ContrastMatrix out;
    out.row_labels = cm.row_labels;
    for (const auto& row : cm.rows) {
        std::vector<double> r = row;
        r.resize(total_groups, 0.0);
        out.rows.push_back(std::move(r));
    }
    out.validate();
    return out;
}

/// Dunnett-type ratio comparisons: numerator selects dose j, denominator
/// selects control, with a common margin.
inline RatioContrastPair ratio_dunnett(const std::vector<int>& group_sizes,
                                       double margin = 1.0,
                                       const std::vector<std::string>& labels = {}) {
    const std::size_t g = group_sizes.size();
    if (g < 2) throw numeric_error("need at least 2 groups for contrasts");
    if (!(margin > 0.0)) throw numeric_error("ratio margin must be > 0");
    RatioContrastPair rp;
    rp.margin = margin;
    for (std::size_t j = 1; j < g; ++j) {
        std::vector<double> num(g, 0.0), den(g, 0.0);
        num[j] = 1.0;
        den[0] = 1.0;
        rp.numerator.push_back(std::move(num));
        rp.denominator.push_back(std::move(den));
        std::string lab = labels.size() == g ? labels[j] : std::to_string(j);
        rp.row_labels.push_back(lab + "/0");
    }
    return rp;
}

}  // namespace noael
