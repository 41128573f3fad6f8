#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "los/diagnostics.hpp"
#include "los/errors.hpp"
#include "los/special.hpp"
#include "oracles.hpp"

using namespace los;

namespace {

const Family kPoisson{FamilyKind::PoissonLog};

Column int_col(std::string name, std::vector<long long> values) {
    Column c;
    c.schema = {std::move(name), ColumnKind::CountInteger, std::nullopt, false};
    c.missing.assign(values.size(), 0);
    c.ints = std::move(values);
    return c;
}

Column cat_col(std::string name, std::vector<std::string> values) {
    Column c;
    c.schema = {std::move(name), ColumnKind::Categorical, std::nullopt, false};
    c.missing.assign(values.size(), 0);
    c.cats = std::move(values);
    return c;
}

}  // namespace

TEST_CASE("pearson statistic: trivial evaluations") {
    Eigen::VectorXd y(2), mu(2);
    y << 1, 3;
    mu << 2, 2;
    CHECK(pearson_statistic(y, mu, kPoisson) == doctest::Approx(0.5));
    CHECK(pearson_statistic(mu, mu, kPoisson) == doctest::Approx(0.0));
    Eigen::VectorXd bad(2);
    bad << 1, 0;
    CHECK_THROWS_AS(pearson_statistic(y, bad, kPoisson), NumericError);
}

TEST_CASE("pearson statistic is invariant under observation duplication") {
    std::mt19937_64 rng(12);
    auto inst = oracle::random_poisson_instance(rng, 30, 2);
    Eigen::VectorXd mu = (inst.X * inst.beta_true).array().exp();
    double base = pearson_statistic(inst.y, mu, kPoisson);
    Eigen::VectorXd y2(60), mu2(60);
    y2 << inst.y, inst.y;
    mu2 << mu, mu;
    CHECK(pearson_statistic(y2, mu2, kPoisson) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("fit_metrics: forced arithmetic and degenerate R^2") {
    Eigen::VectorXd y(2), mu(2);
    y << 4, 4;
    mu << 3, 5;
    MetricsReport rep = fit_metrics(y, mu);
    CHECK(rep.mae == doctest::Approx(1.0));
    CHECK(rep.rmse == doctest::Approx(1.0));
    CHECK_FALSE(rep.r_squared.has_value());  // constant y, denominator zero

    MetricsReport perfect = fit_metrics(mu, mu);
    CHECK(perfect.mae == doctest::Approx(0.0));
    CHECK(perfect.rmse == doctest::Approx(0.0));
    REQUIRE(perfect.r_squared.has_value());
    CHECK(*perfect.r_squared == doctest::Approx(1.0));
}

TEST_CASE("property: RMSE >= MAE") {
    std::mt19937_64 rng(44);
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 2 + static_cast<int>(rng() % 50);
        Eigen::VectorXd y(n), mu(n);
        for (int i = 0; i < n; ++i) {
            y(i) = noise(rng);
            mu(i) = noise(rng);
        }
        MetricsReport m = fit_metrics(y, mu);
        CHECK(m.rmse >= m.mae - 1e-12);
    }
}

TEST_CASE("deviance residuals: zeros at a perfect fit, known single value") {
    Eigen::VectorXd y(3), mu(3);
    y << 1, 2, 3;
    mu = y;
    CHECK(deviance_residuals(y, mu, kPoisson).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0));
    Eigen::VectorXd y1(1), mu1(1);
    y1 << 2;
    mu1 << 1;
    CHECK(deviance_residuals(y1, mu1, kPoisson)(0) ==
          doctest::Approx(0.878971).epsilon(1e-6));
}

TEST_CASE("sum of squared deviance residuals equals the deviance") {
    std::mt19937_64 rng(66);
    for (int rep = 0; rep < 20; ++rep) {
        auto inst = oracle::random_poisson_instance(rng, 50, 3);
        Eigen::VectorXd mu = (inst.X * inst.beta_true).array().exp();
        double dev = poisson_deviance(inst.y, mu);
        double ssr = deviance_residuals(inst.y, mu, kPoisson).squaredNorm();
        CHECK(std::fabs(ssr - dev) <= 1e-9 * std::max(1.0, std::fabs(dev)));
    }
}

TEST_CASE("qq_data: symmetric two-point case and precondition") {
    Eigen::VectorXd r(2);
    r << 1, -1;
    auto [theoretical, sample] = qq_data(r);
    CHECK(theoretical(0) == doctest::Approx(-0.67449).epsilon(1e-4));
    CHECK(theoretical(1) == doctest::Approx(0.67449).epsilon(1e-4));
    CHECK(sample(0) == -1.0);
    CHECK(sample(1) == 1.0);
    Eigen::VectorXd one(1);
    one << 0.5;
    CHECK_THROWS_AS(qq_data(one), ValidationError);
}

TEST_CASE("qq_data stays within the Monte Carlo band for normal samples") {
    // Oracle calibration: for n = 10000 standard-normal draws, the pointwise
    // quantile deviation over the central 98% of plotting positions stays
    // below 0.1 in the vast majority of seeds, and the KS-style deviation on
    // the probability scale stays below 0.1 everywhere. (Raw quantile
    // deviations at the extreme order statistics are O(0.3) and excluded.)
    int within = 0;
    const int n = 10000;
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) r(i) = normal(rng);
        auto [theoretical, sample] = qq_data(r);
        double max_central = 0.0;
        for (int i = n / 100; i < n - n / 100; ++i)
            max_central = std::max(max_central, std::fabs(sample(i) - theoretical(i)));
        double ks = 0.0;
        for (int i = 0; i < n; ++i)
            ks = std::max(ks, std::fabs(normal_cdf(sample(i)) -
                                        (static_cast<double>(i) + 0.5) / n));
        if (max_central < 0.1 && ks < 0.1) ++within;
    }
    CHECK(within >= 19);
}

TEST_CASE("group_means per-level stats and count conservation") {
    RawTable t({cat_col("g", {"a", "b", "a", "b", "b"}),
                int_col("days", {1, 2, 3, 4, 6})});
    auto groups = group_means(t, "g", "days");
    REQUIRE(groups.size() == 2);
    // "b" is most frequent, listed first.
    CHECK(groups[0].first == "b");
    CHECK(groups[0].second.mean == doctest::Approx(4.0));
    CHECK(groups[0].second.median == doctest::Approx(4.0));
    CHECK(groups[0].second.n == 3);
    CHECK(groups[1].second.mean == doctest::Approx(2.0));
    std::size_t total = 0;
    for (const auto& [level, st] : groups) total += st.n;
    CHECK(total == t.n_rows());
}

TEST_CASE("group_means on a single-level factor returns the column mean") {
    RawTable t({cat_col("g", {"only", "only"}), int_col("days", {2, 4})});
    auto groups = group_means(t, "g", "days");
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].second.mean == doctest::Approx(3.0));
}

TEST_CASE("correlation: identities and errors") {
    Eigen::VectorXd x(4);
    x << 1, 2, 3, 7;
    CHECK(correlation(x, x) == doctest::Approx(1.0));
    CHECK(correlation(x, -x) == doctest::Approx(-1.0));
    Eigen::VectorXd c = Eigen::VectorXd::Constant(4, 2.0);
    CHECK_THROWS_AS(correlation(x, c), NumericError);
}
