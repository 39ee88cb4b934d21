#pragma once

#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "noael/types.hpp"

namespace noael {

inline constexpr double inv_sqrt2 = 0.70710678118654752440;
inline constexpr double inv_sqrt2pi = 0.39894228040143267794;

inline double normal_pdf(double x) {
    return inv_sqrt2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

inline double normal_quantile(double p) {
    static const boost::math::normal_distribution<double> norm;
    return boost::math::quantile(norm, p);
}

/// Lower-tail CDF of Student's t with df > 0 degrees of freedom.
/// df = +inf is accepted and means the standard normal.
inline double t_cdf(double x, double df) {
    if (std::isinf(df)) return normal_cdf(x);
    if (!(df > 0.0)) throw numeric_error("t_cdf requires df > 0");
    boost::math::students_t_distribution<double> dist(df);
    return boost::math::cdf(dist, x);
}

inline double chi_squared_quantile(double p, double df) {
    if (!(df > 0.0)) throw numeric_error("chi-squared quantile requires df > 0");
    boost::math::chi_squared_distribution<double> dist(df);
    return boost::math::quantile(dist, p);
}

inline double chi_squared_pdf(double x, double df) {
    boost::math::chi_squared_distribution<double> dist(df);
    return boost::math::pdf(dist, x);
}

/// One-sided p-value of a t (or normal, df = +inf) statistic.
inline double one_sided_p(double statistic, double df, Direction direction) {
    if (direction == Direction::less) return t_cdf(statistic, df);
    return t_cdf(-statistic, df);
}

}  // namespace noael
