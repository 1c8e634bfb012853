#include <doctest.h>

#include "adscreen/common/rng.hpp"
#include "adscreen/statlab/country.hpp"

#include "support/ols_oracle.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <sstream>

using namespace adscreen;
using namespace adscreen::statlab;

namespace {

Matrix design(const std::vector<std::vector<double>>& rows) {
    Matrix X(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) X(i, j) = rows[i][j];
    return X;
}

} // namespace

TEST_CASE("t distribution against tabulated values") {
    CHECK(student_t_cdf(2.0281, 36) == doctest::Approx(0.975).epsilon(1e-3));
    CHECK(student_t_cdf(1.6883, 36) == doctest::Approx(0.95).epsilon(1e-3));
    CHECK(student_t_cdf(12.706, 1) == doctest::Approx(0.975).epsilon(1e-3));
    CHECK(student_t_cdf(2.086, 20) == doctest::Approx(0.975).epsilon(1e-3));
    CHECK(student_t_cdf(0.0, 7) == 0.5);
    CHECK(student_t_cdf(-2.0281, 36) == doctest::Approx(0.025).epsilon(1e-3));
    CHECK(two_sided_p(2.0281, 36) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), StatError);
}

TEST_CASE("t distribution against an independent implementation") {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const double df = std::uniform_real_distribution<double>(0.5, 200.0)(rng);
        const double t = std::uniform_real_distribution<double>(-8.0, 8.0)(rng);
        const boost::math::students_t dist(df);
        CHECK(std::abs(student_t_cdf(t, df) - boost::math::cdf(dist, t)) < 1e-9);
    }
}

TEST_CASE("incomplete beta edge cases") {
    CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
    // I_x(1, 1) = x
    CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(incomplete_beta(0, 1, 0.5), StatError);
    CHECK_THROWS_AS(incomplete_beta(1, 1, 1.5), StatError);
}

TEST_CASE("ols on exact linear data") {
    const auto r = ols_fit(std::vector<double>{1, 3, 5, 7}, design({{1, 0}, {1, 1}, {1, 2}, {1, 3}}));
    CHECK(r.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.coefficients[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.r_squared == doctest::Approx(1.0));
    CHECK(r.rss < 1e-20);

    std::vector<double> y;
    std::vector<std::vector<double>> rows;
    for (int x = -3; x < 7; ++x) {
        rows.push_back({1.0, double(x)});
        y.push_back(3 + 2 * x);
    }
    const auto r2 = ols_fit(y, design(rows));
    CHECK(r2.coefficients[0] == doctest::Approx(3.0));
    CHECK(r2.coefficients[1] == doctest::Approx(2.0));
    CHECK(r2.r_squared == doctest::Approx(1.0));
}

TEST_CASE("ols errors") {
    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 2}, design({{1, 0}, {1, 1}})), StatError);
    try {
        ols_fit(std::vector<double>{1, 2, 4, 5}, design({{1, 1}, {1, 1}, {1, 1}, {1, 1}}));
        FAIL("expected rank deficiency");
    } catch (const StatError& e) {
        CHECK(e.code() == "rank_deficient");
    }
    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 2, 3}, design({{1, 0}, {1, 1}})), StatError);
    CHECK_THROWS_AS(ols_fit(std::vector<double>{2, 2, 2, 2}, design({{1, 0}, {1, 1}, {1, 2}, {1, 4}})), StatError);
}

TEST_CASE("ols matches the normal-equations oracle") {
    Rng rng(2016);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = std::uniform_int_distribution<std::size_t>(8, 1000)(rng);
        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row{1.0, normal(rng), 5.0 + 2.0 * normal(rng), normal(rng) * 0.5 - 1.0};
            y.push_back(0.3 + 0.8 * row[1] - 0.1 * row[2] + 2.0 * row[3] + normal(rng));
            rows.push_back(std::move(row));
        }
        const auto r = ols_fit(y, design(rows));
        const auto oracle = testing::normal_equations(rows, y);
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(r.coefficients[j] - oracle[j]) <= 1e-9 * std::abs(oracle[j]));
        CHECK(r.r_squared >= 0.0);
        CHECK(r.r_squared <= 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(r.p_values[j] >= 0.0);
            CHECK(r.p_values[j] <= 1.0);
            CHECK(r.p_values[j] == doctest::Approx(2.0 * (1.0 - student_t_cdf(std::abs(r.t_stats[j]), r.df()))));
        }
    }
}

TEST_CASE("affine rescaling of one regressor") {
    Rng rng(4);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> rows, scaled;
    std::vector<double> y;
    for (int i = 0; i < 60; ++i) {
        rows.push_back({1.0, normal(rng), normal(rng)});
        scaled.push_back({1.0, 10.0 * rows.back()[1] + 3.0, rows.back()[2]});
        y.push_back(1.0 + rows.back()[1] + normal(rng));
    }
    const auto a = ols_fit(y, design(rows));
    const auto b = ols_fit(y, design(scaled));
    CHECK(b.r_squared == doctest::Approx(a.r_squared).epsilon(1e-12));
    CHECK(b.coefficients[1] == doctest::Approx(a.coefficients[1] / 10.0).epsilon(1e-10));
    CHECK(b.coefficients[2] == doctest::Approx(a.coefficients[2]).epsilon(1e-10));
    CHECK(b.p_values[1] == doctest::Approx(a.p_values[1]).epsilon(1e-8));
}

TEST_CASE("null model coefficients stay within four standard errors") {
    Rng rng(12);
    std::normal_distribution<double> normal(0.0, 1.0);
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        for (int i = 0; i < 40; ++i) {
            rows.push_back({1.0, normal(rng), normal(rng), normal(rng)});
            y.push_back(normal(rng));
        }
        const auto r = ols_fit(y, design(rows));
        bool all = true;
        for (std::size_t j = 0; j < 4; ++j) all = all && std::abs(r.coefficients[j]) <= 4.0 * r.std_errors[j];
        if (all) ++ok;
        CHECK(r.r_squared < 0.5);
    }
    CHECK(ok >= 95);
}

TEST_CASE("filter_countries threshold is inclusive") {
    std::vector<CountryStats> rows{{"A", 149, 10, 1000, 0.5, 70}, {"B", 150, 10, 1000, 0.5, 70}};
    const auto kept = filter_countries(rows);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].code == "B");
    CHECK(filter_countries({}).empty());

    CountryGenerator g;
    g.seed = 5;
    const auto table = generate_countries(g);
    const auto above = std::count_if(table.begin(), table.end(), [](const auto& c) { return c.impressions >= 150; });
    CHECK(filter_countries(table).size() == static_cast<std::size_t>(above));
}

TEST_CASE("country model recovers generator slopes") {
    int within = 0, signs = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CountryGenerator g;
        g.n_countries = 40;
        g.min_impressions = 150;
        g.seed = seed;
        const auto r = country_ctr_model(generate_countries(g));
        CHECK(r.n == 40);
        const double bi = r.coefficients[2], bl = r.coefficients[3];
        if (bi > 0 && bl < 0) ++signs;
        if (std::abs(bi - 0.001) <= 0.0005 && std::abs(bl + 0.002) <= 0.001) ++within;
    }
    CHECK(signs >= 19);
    CHECK(within >= 16);
}

TEST_CASE("country model errors") {
    std::vector<CountryStats> same(12, CountryStats{"X", 1000, 100, 5000, 0.6, 72});
    for (std::size_t i = 0; i < same.size(); ++i) same[i].clicks = 90 + static_cast<std::int64_t>(i);
    try {
        country_ctr_model(same);
        FAIL("expected rank deficiency");
    } catch (const StatError& e) {
        CHECK(e.code() == "rank_deficient");
    }

    CountryGenerator g;
    g.n_countries = 12;
    auto rows = generate_countries(g);
    rows[4].gdp_per_capita = 0.0;
    try {
        country_ctr_model(rows);
        FAIL("expected a rejected row");
    } catch (const StatError& e) {
        CHECK(e.subject() == rows[4].code);
    }
    rows.resize(5);
    CHECK_THROWS_AS(country_ctr_model(rows), StatError);
}

TEST_CASE("country csv") {
    std::istringstream in("country,impressions,clicks,gdp_per_capita,internet_penetration_pct,life_expectancy_yrs\n"
                          "GB,2000,210,39000,90.5,81\n"
                          "IN,900,120,1600,\"26\",68\n");
    const auto rows = read_country_csv(in, "t.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].internet_penetration == doctest::Approx(0.905));
    CHECK(rows[1].ctr() == doctest::Approx(120.0 / 900.0));

    std::ostringstream out;
    write_country_csv(out, rows);
    std::istringstream again(out.str());
    CHECK(read_country_csv(again).size() == 2);

    std::istringstream bad("country,impressions,clicks,gdp_per_capita,internet_penetration_pct,life_expectancy_yrs\n"
                           "GB,2000,210,39000,90,81\n"
                           "FR,abc,1,1,1,1\n");
    try {
        read_country_csv(bad, "t.csv");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.subject() == "t.csv:3");
    }
}

TEST_CASE("spearman and trend") {
    const std::vector<double> x{1, 2, 3, 4, 5, 6};
    const auto perfect = spearman(x, std::vector<double>{2, 4, 6, 8, 10, 12});
    CHECK(perfect.rho == doctest::Approx(1.0));
    CHECK(perfect.p_value == 0.0);
    const auto tied = spearman(x, std::vector<double>{1, 1, 2, 2, 3, 3});
    CHECK(tied.rho > 0.9);
    // rho = 1 - 6 sum d^2 / (n (n^2 - 1)) without ties
    const auto r = spearman(x, std::vector<double>{3, 1, 2, 6, 4, 5});
    CHECK(r.rho == doctest::Approx(1.0 - 6.0 * (4 + 1 + 1 + 4 + 1 + 1) / (6.0 * 35.0)));
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), StatError);

    const auto t = linear_trend(std::vector<double>{1, 3, 5, 7.5, 9});
    CHECK(t.slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(t.p_value < 0.01);
    CHECK(linear_trend(std::vector<double>{4, 4, 4}).p_value == 1.0);
}
