#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace noael {

inline constexpr const char* version_string = "0.1.0";

/// Input data is malformed or violates a dataset invariant.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric computation cannot proceed (zero variance, non-PSD matrix, ...).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A method was combined with an endpoint it does not apply to.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EndpointKind { continuous, score, incidence };

/// One-sided alternative. `greater` means an increase with dose is adverse,
/// `less` means a decrease is adverse.
enum class Direction { greater, less };

enum class HcKind { none, hc0, hc1, hc2, hc3 };

enum class Method {
    ctp_pairwise,
    dunnett,
    ctp_williams,
    ctp_ratio,
    ctp_nonparametric,
    ctp_poly3,
};

inline std::string to_string(Direction d) {
    return d == Direction::greater ? "greater" : "less";
}

inline std::string to_string(HcKind k) {
    switch (k) {
        case HcKind::none: return "none";
        case HcKind::hc0: return "hc0";
        case HcKind::hc1: return "hc1";
        case HcKind::hc2: return "hc2";
        case HcKind::hc3: return "hc3";
    }
    return "hc3";
}

inline std::string to_string(Method m) {
    switch (m) {
        case Method::ctp_pairwise: return "ctp-pairwise";
        case Method::dunnett: return "dunnett";
        case Method::ctp_williams: return "ctp-williams";
        case Method::ctp_ratio: return "ctp-ratio";
        case Method::ctp_nonparametric: return "ctp-nonparametric";
        case Method::ctp_poly3: return "ctp-poly3";
    }
    return "?";
}

inline std::string to_string(EndpointKind k) {
    switch (k) {
        case EndpointKind::continuous: return "continuous";
        case EndpointKind::score: return "score";
        case EndpointKind::incidence: return "incidence";
    }
    return "?";
}

/// Result of a single one-sided comparison test.
struct TestOutcome {
    std::string label;            // e.g. "200-0" or "2/0"
    double statistic = 0.0;
    double df = 0.0;              // +inf for a standard-normal reference
    double p_raw = 0.0;           // one-sided p-value in [0,1]
    double p_error_estimate = 0.0;  // 0 for deterministic paths
    Direction direction = Direction::greater;
    bool degenerate = false;      // zero-variance convention applied
    bool df_clamped = false;      // approximation df was clamped to 1
};

/// Per-analysis settings. Immutable once an analysis starts.
struct AnalysisConfig {
    double alpha = 0.05;
    Direction direction = Direction::greater;
    Method method = Method::ctp_pairwise;
    HcKind hc_kind = HcKind::hc3;
    double poly_k = 3.0;
    double ratio_margin = 1.0;
    std::uint64_t qmc_seed = 20230101;
    double qmc_error_target = 1e-5;
    std::int64_t qmc_max_points = 8388608;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw usage_error("alpha must lie in (0,1)");
        if (!(qmc_error_target > 0.0))
            throw usage_error("qmc error target must be positive");
        if (!(poly_k > 0.0))
            throw usage_error("poly-k exponent must be positive");
        if (!(ratio_margin > 0.0))
            throw usage_error("ratio margin must be positive");
    }
};

}  // namespace noael
