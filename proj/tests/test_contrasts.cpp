#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "noael/contrasts.hpp"

using namespace noael;

TEST_CASE("dunnett_matrix pairwise rows") {
    auto cm = dunnett_matrix({10, 10, 10, 10, 10}, {"0", "100", "200", "500", "750"});
    REQUIRE(cm.n_rows() == 4);
    CHECK(cm.rows[3] == std::vector<double>{-1, 0, 0, 0, 1});
    CHECK(cm.row_labels[3] == "750-0");
    CHECK(cm.row_labels[0] == "100-0");

    auto two = dunnett_matrix({5, 5});
    REQUIRE(two.n_rows() == 1);
    CHECK(two.rows[0] == std::vector<double>{-1, 1});

    CHECK_THROWS_AS(dunnett_matrix({3}), numeric_error);
}

TEST_CASE("dunnett_matrix coefficients do not depend on group sizes") {
    auto a = dunnett_matrix({10, 10, 10});
    auto b = dunnett_matrix({3, 17, 50});
    CHECK(a.rows == b.rows);
}

TEST_CASE("williams_matrix pools the highest doses by sample size") {
    auto cm = williams_matrix({10, 10, 10, 10, 10});
    REQUIRE(cm.n_rows() == 4);
    CHECK(cm.rows[0] == std::vector<double>{-1, 0, 0, 0, 1});
    // row 2 pools the two highest groups with equal weights
    CHECK_THAT(cm.rows[1][3], Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(cm.rows[1][4], Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK(cm.rows[1][1] == 0.0);

    auto uneq = williams_matrix({20, 10});
    CHECK(uneq.rows[0] == std::vector<double>{-1, 1});

    // final row: dose coefficients proportional to group sizes, summing to 1
    auto w = williams_matrix({8, 4, 12, 24});
    const auto& last = w.rows[2];
    CHECK_THAT(last[1], Catch::Matchers::WithinAbs(4.0 / 40.0, 1e-15));
    CHECK_THAT(last[2], Catch::Matchers::WithinAbs(12.0 / 40.0, 1e-15));
    CHECK_THAT(last[3], Catch::Matchers::WithinAbs(24.0 / 40.0, 1e-15));
    double dose_sum = last[1] + last[2] + last[3];
    CHECK_THAT(dose_sum, Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("pad_subset appends zero columns and keeps labels") {
    auto cm = williams_matrix({10, 10, 10, 10}, {"0", "100", "200", "500"});
    auto padded = pad_subset(cm, 5);
    REQUIRE(padded.n_groups() == 5);
    for (const auto& row : padded.rows) CHECK(row.back() == 0.0);
    CHECK(padded.row_labels == cm.row_labels);

    CHECK(pad_subset(cm, 4).rows == cm.rows);  // same width: identity
    auto pair = pad_subset(dunnett_matrix({5, 5}), 5);
    CHECK(pair.rows[0] == std::vector<double>{-1, 1, 0, 0, 0});
    CHECK_THROWS_AS(pad_subset(cm, 3), numeric_error);
}

TEST_CASE("ratio_dunnett structure") {
    auto rp = ratio_dunnett({10, 10, 10, 10}, 1.0, {"0", "1", "2", "3"});
    REQUIRE(rp.row_labels.size() == 3);
    CHECK(rp.row_labels == std::vector<std::string>{"1/0", "2/0", "3/0"});
    CHECK(rp.numerator[1] == std::vector<double>{0, 0, 1, 0});
    CHECK(rp.denominator[1] == std::vector<double>{1, 0, 0, 0});

    auto two = ratio_dunnett({5, 5});
    CHECK(two.numerator[0] == std::vector<double>{0, 1});
    CHECK(two.denominator[0] == std::vector<double>{1, 0});

    CHECK_THROWS_AS(ratio_dunnett({5, 5}, 0.0), numeric_error);
}

TEST_CASE("every contrast row sums to zero (property)") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> n_groups(2, 8);
    std::uniform_int_distribution<int> size(2, 40);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> sizes(n_groups(rng));
        for (auto& s : sizes) s = size(rng);
        for (const auto& cm : {dunnett_matrix(sizes), williams_matrix(sizes)}) {
            for (const auto& row : cm.rows) {
                double sum = 0.0;
                for (double c : row) sum += c;
                CHECK(std::abs(sum) <= 1e-14 * static_cast<double>(row.size()));
            }
            CHECK_NOTHROW(cm.validate());
        }
    }
}
