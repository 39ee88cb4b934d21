#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noael/dataset.hpp"
#include "noael/types.hpp"

namespace noael {
namespace builtin {

// Body-weight gain (g) of rats after 14 days at 0/100/200/500/750 mg/kg;
// five groups of ten animals.
inline ContinuousDataset wes() {
    auto mk = [](std::string label, double dose, int idx,
                 std::vector<double> obs) {
        return std::pair<DoseGroup, std::vector<double>>{
            DoseGroup{std::move(label), dose, idx, static_cast<int>(obs.size())},
            std::move(obs)};
    };
    std::vector<std::pair<DoseGroup, std::vector<double>>> raw;
    raw.push_back(mk("0", 0, 0,
        {5.7, 10.2, 13.9, 10.3, 1.3, 12, 14, 15.1, 8.8, 12.7}));
    raw.push_back(mk("100", 100, 1,
        {8.3, 12.3, 6.1, 10.1, 6.3, 12, 13, 13.4, 11.9, 9.9}));
    raw.push_back(mk("200", 200, 2,
        {9.5, 8.1, 7, 7.8, 9.3, 12.2, 6.7, 10.6, 6.6, 7}));
    raw.push_back(mk("500", 500, 3,
        {2.9, 5.6, -3.5, 9.5, 5.7, 4.9, 3.8, 5.6, 5.6, 4.2}));
    raw.push_back(mk("750", 750, 4,
        {-8.6, 0.1, -3.9, -4, -7.3, -2.2, -5.2, -1, -8.1, -4.8}));
    ContinuousDataset ds;
    for (auto& [g, obs] : raw) {
        ds.groups.push_back(g);
        ds.observations.push_back(std::move(obs));
    }
    validate(ds);
    return ds;
}

// Relative kidney weights from a feeding study with dose levels coded 0-3;
// group sizes 18/20/19/18.
inline ContinuousDataset tamh() {
    ContinuousDataset ds;
    ds.groups = {DoseGroup{"0", 0, 0, 18}, DoseGroup{"1", 1, 1, 20},
                 DoseGroup{"2", 2, 2, 19}, DoseGroup{"3", 3, 3, 18}};
    ds.observations = {
        {6.593, 7.48, 6.93, 5.662, 6.789, 7.268, 6.647, 6.443, 6.713,
         6.057, 6.253, 7.045, 6.552, 5.668, 6.354, 6.511, 7.111, 6.015},
        {7.062, 7.347, 7.733, 7.396, 8.173, 6.938, 6.988, 6.621, 7.508, 6.657,
         7.787, 6.537, 7.369, 6.623, 6.456, 6.507, 6.154, 5.934, 6.909, 7.252},
        {7.006, 8.706, 7.257, 7.743, 7.026, 8.561, 7.674, 7.45, 8.188, 8.15,
         7.619, 8.722, 7.387, 6.798, 7.617, 8.071, 7.02, 7.821, 7.063},
        {9.569, 9.362, 10.911, 9.961, 9.497, 9.911, 8.544, 10.404, 10.421,
         10.065, 9.67, 8.194, 8.989, 7.347, 7.26, 9.017, 8.847, 8.723}};
    validate(ds);
    return ds;
}

// Severity scores (0-4) of epithelial lesions after exposure at 0/2/6/15 ppm;
// group sizes 29/25/27/5.
inline ScoreDataset epi() {
    ScoreDataset ds;
    ds.groups = {DoseGroup{"0", 0, 0, 29}, DoseGroup{"2", 2, 1, 25},
                 DoseGroup{"6", 6, 2, 27}, DoseGroup{"15", 15, 3, 5}};
    ds.observations = {
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         2, 2, 3, 3, 3, 3, 3, 3},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         2, 2, 2, 2, 2, 2, 3},
        {0, 0, 0, 0, 0, 1, 2, 2, 2, 2, 2, 2, 2, 2,
         3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3},
        {3, 3, 3, 4, 4}};
    validate(ds);
    return ds;
}

struct DatasetInfo {
    std::string name;
    EndpointKind endpoint;
    int rows;
    std::string note;
    bool bundled;
};

inline std::vector<DatasetInfo> catalogue() {
    return {
        {"wes", EndpointKind::continuous, 50,
         "body-weight gain, 14-day study, 5 dose groups of 10", true},
        {"tamh", EndpointKind::continuous, 75,
         "relative kidney weight, feeding study, 4 dose groups", true},
        {"epi", EndpointKind::score, 86,
         "epithelial lesion severity scores, 4 dose groups", true},
        {"bronch", EndpointKind::incidence, 0,
         "alveolar/bronchiolar tumor incidence; supply as data/bronch.csv "
         "(dose,time,status)", false},
    };
}

/// Bundled datasets by name. `bronch` is not embedded: the per-animal records
/// are loaded from <data_dir>/bronch.csv when present.
inline std::optional<DoseResponseDataset> load(const std::string& name) {
    if (name == "wes") return DoseResponseDataset{wes()};
    if (name == "tamh") return DoseResponseDataset{tamh()};
    if (name == "epi") return DoseResponseDataset{epi()};
    return std::nullopt;
}

inline std::optional<EndpointKind> endpoint_for(const std::string& name) {
    for (const auto& d : catalogue())
        if (d.name == name) return d.endpoint;
    return std::nullopt;
}

}  // namespace builtin
}  // namespace noael
