#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "noael/csv.hpp"
#include "noael/distributions.hpp"
#include "noael/polyk.hpp"

using namespace noael;

namespace {

IncidenceDataset make_incidence(const std::vector<std::vector<AnimalRecord>>& groups) {
    IncidenceDataset ds;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        ds.groups.push_back(DoseGroup{std::to_string(g * 25), static_cast<double>(g * 25),
                                      static_cast<int>(g), static_cast<int>(groups[g].size())});
        ds.animals.push_back(groups[g]);
    }
    validate(ds);
    return ds;
}

}  // namespace

TEST_CASE("polyk_weights conventions") {
    std::vector<AnimalRecord> g = {{50.0, 1}, {104.0, 0}, {52.0, 0}};
    auto w = polyk_weights(g, 3.0, 104.0);
    CHECK(w[0] == 1.0);                 // tumor bearer
    CHECK(w[1] == 1.0);                 // full-study survivor
    CHECK_THAT(w[2], Catch::Matchers::WithinAbs(0.125, 1e-12));  // (1/2)^3
    CHECK_THROWS_AS(polyk_weights(g, 3.0, 0.0), numeric_error);
    CHECK_THROWS_AS(polyk_weights(g, 3.0, 100.0), data_error);  // time exceeds t_max
}

TEST_CASE("polyk_estimates reduces to the crude proportion when all survive") {
    std::vector<AnimalRecord> grp;
    for (int i = 0; i < 10; ++i) grp.push_back({104.0, i < 3 ? 1 : 0});
    auto ds = make_incidence({grp, grp});
    auto est = polyk_estimates(ds, 3.0);
    CHECK(est[0].n_star == 10.0);
    CHECK_THAT(est[0].p_star, Catch::Matchers::WithinAbs(0.3, 1e-15));
    // BW variance collapses to p(1-p)/(n-1) here
    CHECK_THAT(est[0].variance, Catch::Matchers::WithinAbs(0.3 * 0.7 / 9.0, 1e-15));
}

TEST_CASE("no tumors anywhere: p* = 0 with zero variance") {
    std::vector<AnimalRecord> grp;
    for (int i = 0; i < 8; ++i) grp.push_back({80.0 + i, 0});
    auto ds = make_incidence({grp, grp});
    auto est = polyk_estimates(ds, 3.0);
    for (const auto& e : est) {
        CHECK(e.p_star == 0.0);
        CHECK(e.variance == 0.0);
        CHECK(e.tumors == 0);
    }
    auto out = polyk_contrast_test(est, 1, Direction::greater);
    CHECK(out.p_raw == 0.5);
    CHECK(out.degenerate);
}

TEST_CASE("polyk_estimates matches an independently coded evaluation") {
    // staggered deaths, worked through the defining formulas step by step
    std::vector<AnimalRecord> g0 = {{104, 0}, {104, 0}, {78, 1}, {52, 0}, {91, 0}};
    std::vector<AnimalRecord> g1 = {{104, 1}, {65, 1}, {104, 0}, {40, 0}, {88, 0}};
    auto ds = make_incidence({g0, g1});
    auto est = polyk_estimates(ds, 3.0);

    const double tmax = 104.0;
    // group 0: weights 1, 1, 1(tumor), (52/104)^3, (91/104)^3
    double w3 = std::pow(52.0 / tmax, 3), w4 = std::pow(91.0 / tmax, 3);
    double nstar0 = 1 + 1 + 1 + w3 + w4;
    double p0 = 1.0 / nstar0;
    CHECK_THAT(est[0].n_star, Catch::Matchers::WithinAbs(nstar0, 1e-12));
    CHECK_THAT(est[0].p_star, Catch::Matchers::WithinAbs(p0, 1e-12));
    double ss0 = 0.0;
    double w0s[5] = {1, 1, 1, w3, w4};
    int y0s[5] = {0, 0, 1, 0, 0};
    for (int i = 0; i < 5; ++i) {
        double r = y0s[i] - p0 * w0s[i];
        ss0 += r * r;
    }
    CHECK_THAT(est[0].variance,
               Catch::Matchers::WithinAbs(5.0 / 4.0 * ss0 / (nstar0 * nstar0), 1e-14));

    // group 1
    double v2 = std::pow(40.0 / tmax, 3), v3 = std::pow(88.0 / tmax, 3);
    double nstar1 = 1 + 1 + 1 + v2 + v3;
    double p1 = 2.0 / nstar1;
    CHECK_THAT(est[1].p_star, Catch::Matchers::WithinAbs(p1, 1e-12));
}

TEST_CASE("weights are monotone in time and scale invariant") {
    std::vector<AnimalRecord> grp;
    for (int i = 1; i <= 20; ++i) grp.push_back({i * 5.0, 0});
    auto w = polyk_weights(grp, 3.0, 100.0);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] >= w[i - 1]);

    std::vector<AnimalRecord> scaled = grp;
    for (auto& a : scaled) a.time *= 7.0;
    auto w2 = polyk_weights(scaled, 3.0, 700.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK_THAT(w2[i], Catch::Matchers::WithinAbs(w[i], 1e-12));
}

TEST_CASE("time rescaling leaves the test unchanged") {
    std::vector<AnimalRecord> g0 = {{104, 0}, {80, 1}, {104, 0}, {60, 0}};
    std::vector<AnimalRecord> g1 = {{104, 1}, {70, 1}, {90, 0}, {104, 1}};
    auto t1 = polyk_contrast_test(polyk_estimates(make_incidence({g0, g1}), 3.0), 1,
                                  Direction::greater);
    for (auto* g : {&g0, &g1})
        for (auto& a : *g) a.time *= 3.25;
    auto t2 = polyk_contrast_test(polyk_estimates(make_incidence({g0, g1}), 3.0), 1,
                                  Direction::greater);
    CHECK_THAT(t1.statistic, Catch::Matchers::WithinAbs(t2.statistic, 1e-12));
    CHECK(t1.p_raw == t2.p_raw);
}

TEST_CASE("synthetic normal reference value") {
    // p* = (0.1, 0.5), var = (0.01, 0.03) -> Z = 2, p = 1 - Phi(2)
    std::vector<PolykEstimate> est(2);
    est[0].p_star = 0.1;
    est[0].variance = 0.01;
    est[1].p_star = 0.5;
    est[1].variance = 0.03;
    auto out = polyk_contrast_test(est, 1, Direction::greater);
    CHECK_THAT(out.statistic, Catch::Matchers::WithinAbs(2.0, 1e-12));
    CHECK_THAT(out.p_raw, Catch::Matchers::WithinAbs(0.0227501, 1e-6));
    CHECK(std::isinf(out.df));
}

TEST_CASE("boundary conventions for zero variance") {
    std::vector<PolykEstimate> est(2);
    est[0].p_star = 0.1;
    est[1].p_star = 0.4;
    auto out = polyk_contrast_test(est, 1, Direction::greater);
    CHECK(out.p_raw == 0.0);
    CHECK(out.degenerate);
    CHECK(polyk_contrast_test(est, 1, Direction::less).p_raw == 1.0);
}

TEST_CASE("group of size one is rejected") {
    std::vector<AnimalRecord> solo = {{104, 0}};
    std::vector<AnimalRecord> pair = {{104, 0}, {104, 1}};
    IncidenceDataset ds;
    ds.groups = {DoseGroup{"0", 0, 0, 1}, DoseGroup{"25", 25, 1, 2}};
    ds.animals = {solo, pair};
    CHECK_THROWS_AS(polyk_estimates(ds, 3.0), data_error);
}
