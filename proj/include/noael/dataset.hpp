#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "noael/types.hpp"

namespace noael {

/// One dose group of a designed bioassay. Index 0 is always the control,
/// and dose_value increases strictly with index.
struct DoseGroup {
    std::string label;   // original dose coding, e.g. "0", "100"
    double dose_value = 0.0;
    int index = 0;
    int n = 0;

    bool operator==(const DoseGroup&) const = default;
};

struct ContinuousDataset {
    std::vector<DoseGroup> groups;
    std::vector<std::vector<double>> observations;  // one vector per group

    bool operator==(const ContinuousDataset&) const = default;
};

struct ScoreDataset {
    std::vector<DoseGroup> groups;
    std::vector<std::vector<int>> observations;  // integer severity scores >= 0

    bool operator==(const ScoreDataset&) const = default;
};

/// Per-animal record for long-term tumor-incidence studies.
struct AnimalRecord {
    double time = 0.0;  // time on study, same units study-wide
    int status = 0;     // 1 = tumor present at death/sacrifice

    bool operator==(const AnimalRecord&) const = default;
};

struct IncidenceDataset {
    std::vector<DoseGroup> groups;
    std::vector<std::vector<AnimalRecord>> animals;

    bool operator==(const IncidenceDataset&) const = default;

    double study_max_time() const {
        double t = 0.0;
        for (const auto& g : animals)
            for (const auto& a : g) t = std::max(t, a.time);
        return t;
    }
};

using DoseResponseDataset =
    std::variant<ContinuousDataset, ScoreDataset, IncidenceDataset>;

namespace detail {

inline void validate_groups(const std::vector<DoseGroup>& groups,
                            const std::vector<std::size_t>& counts) {
    if (groups.size() < 2)
        throw data_error("need a control plus at least one dose group");
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const DoseGroup& g = groups[i];
        if (g.index != static_cast<int>(i))
            throw data_error("group indices must be 0..k in order");
        if (g.dose_value < 0.0)
            throw data_error("dose values must be nonnegative");
        if (i > 0 && !(groups[i - 1].dose_value < g.dose_value))
            throw data_error("tied or non-increasing dose values: group \"" +
                             groups[i - 1].label + "\" vs \"" + g.label + "\"");
        if (g.n < 2)
            throw data_error("group \"" + g.label + "\" has n < 2");
        if (counts[i] != static_cast<std::size_t>(g.n))
            throw data_error("observation count does not match n for group \"" +
                             g.label + "\"");
    }
}

}  // namespace detail

inline void validate(const ContinuousDataset& ds) {
    std::vector<std::size_t> counts;
    for (const auto& v : ds.observations) counts.push_back(v.size());
    if (counts.size() != ds.groups.size())
        throw data_error("per-group observation lists do not match group list");
    detail::validate_groups(ds.groups, counts);
}

inline void validate(const ScoreDataset& ds) {
    std::vector<std::size_t> counts;
    for (const auto& v : ds.observations) counts.push_back(v.size());
    if (counts.size() != ds.groups.size())
        throw data_error("per-group observation lists do not match group list");
    detail::validate_groups(ds.groups, counts);
    for (const auto& v : ds.observations)
        for (int s : v)
            if (s < 0) throw data_error("severity scores must be >= 0");
}

inline void validate(const IncidenceDataset& ds) {
    std::vector<std::size_t> counts;
    for (const auto& v : ds.animals) counts.push_back(v.size());
    if (counts.size() != ds.groups.size())
        throw data_error("per-group animal lists do not match group list");
    detail::validate_groups(ds.groups, counts);
    for (const auto& g : ds.animals)
        for (const auto& a : g) {
            if (!(a.time > 0.0)) throw data_error("animal time must be > 0");
            if (a.status != 0 && a.status != 1)
                throw data_error("tumor status must be 0 or 1");
        }
}

inline void validate(const DoseResponseDataset& ds) {
    std::visit([](const auto& d) { validate(d); }, ds);
}

inline const std::vector<DoseGroup>& groups_of(const DoseResponseDataset& ds) {
    return std::visit([](const auto& d) -> const std::vector<DoseGroup>& {
        return d.groups;
    }, ds);
}

inline EndpointKind endpoint_of(const DoseResponseDataset& ds) {
    if (std::holds_alternative<ContinuousDataset>(ds)) return EndpointKind::continuous;
    if (std::holds_alternative<ScoreDataset>(ds)) return EndpointKind::score;
    return EndpointKind::incidence;
}

/// Row of the per-group descriptive summary.
struct GroupSummary {
    std::string label;
    double dose_value = 0.0;
    int n = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample sd (n-1 divisor)
    double min = 0.0;
    double max = 0.0;
    double tumor_proportion = std::numeric_limits<double>::quiet_NaN();  // incidence only
};

namespace detail {

inline GroupSummary summarize_values(const DoseGroup& g,
                                     const std::vector<double>& v) {
    GroupSummary s;
    s.label = g.label;
    s.dose_value = g.dose_value;
    s.n = g.n;
    double sum = 0.0;
    s.min = v.front();
    s.max = v.front();
    for (double x : v) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return s;
}

}  // namespace detail

inline std::vector<GroupSummary> summarize(const ContinuousDataset& ds) {
    std::vector<GroupSummary> out;
    for (std::size_t i = 0; i < ds.groups.size(); ++i)
        out.push_back(detail::summarize_values(ds.groups[i], ds.observations[i]));
    return out;
}

inline std::vector<GroupSummary> summarize(const ScoreDataset& ds) {
    std::vector<GroupSummary> out;
    for (std::size_t i = 0; i < ds.groups.size(); ++i) {
        std::vector<double> v(ds.observations[i].begin(), ds.observations[i].end());
        out.push_back(detail::summarize_values(ds.groups[i], v));
    }
    return out;
}

inline std::vector<GroupSummary> summarize(const IncidenceDataset& ds) {
    std::vector<GroupSummary> out;
    for (std::size_t i = 0; i < ds.groups.size(); ++i) {
        std::vector<double> times;
        int tumors = 0;
        for (const auto& a : ds.animals[i]) {
            times.push_back(a.time);
            tumors += a.status;
        }
        GroupSummary s = detail::summarize_values(ds.groups[i], times);
        s.tumor_proportion = static_cast<double>(tumors) / static_cast<double>(times.size());
        out.push_back(s);
    }
    return out;
}

inline std::vector<GroupSummary> summarize(const DoseResponseDataset& ds) {
    return std::visit([](const auto& d) { return summarize(d); }, ds);
}

}  // namespace noael
