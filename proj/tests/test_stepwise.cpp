#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "los/design.hpp"
#include "los/errors.hpp"
#include "los/stepwise.hpp"

using namespace los;

namespace {

Column int_col(std::string name, std::vector<long long> values) {
    Column c;
    c.schema = {std::move(name), ColumnKind::CountInteger, std::nullopt, false};
    c.missing.assign(values.size(), 0);
    c.ints = std::move(values);
    return c;
}

// Synthetic table: days driven by x1, optionally noise columns.
RawTable synth_table(std::mt19937_64& rng, int n, int n_noise, bool with_signal) {
    std::vector<long long> x1(static_cast<std::size_t>(n)), days(x1.size());
    std::vector<std::vector<long long>> noise(static_cast<std::size_t>(n_noise),
                                              std::vector<long long>(x1.size()));
    for (int i = 0; i < n; ++i) {
        x1[static_cast<std::size_t>(i)] = static_cast<long long>(rng() % 10);
        for (auto& col : noise)
            col[static_cast<std::size_t>(i)] = static_cast<long long>(rng() % 10);
        double mu = with_signal
                        ? std::exp(0.3 + 0.15 * static_cast<double>(
                                                   x1[static_cast<std::size_t>(i)]))
                        : 3.0;
        std::poisson_distribution<long> draw(mu);
        days[static_cast<std::size_t>(i)] = draw(rng);
    }
    std::vector<Column> cols{int_col("days", days), int_col("x1", x1)};
    for (int k = 0; k < n_noise; ++k)
        cols.push_back(int_col("n" + std::to_string(k),
                               noise[static_cast<std::size_t>(k)]));
    return RawTable(std::move(cols));
}

// Exhaustive best-subset criterion over all subsets of the candidates.
double exhaustive_best(const RawTable& table,
                       const std::vector<std::string>& candidates,
                       Criterion criterion) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t m = candidates.size();
    for (std::size_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<std::string> terms;
        for (std::size_t k = 0; k < m; ++k)
            if (mask & (1u << k)) terms.push_back(candidates[k]);
        auto [X, y] = encode(table, {}, terms, "days");
        GlmFit f = fit(X, y, Family{FamilyKind::PoissonLog});
        best = std::min(best, criterion_value(f, criterion));
    }
    return best;
}

}  // namespace

TEST_CASE("criterion_value dispatches and aic/bic differ by p(ln n - 2)") {
    std::mt19937_64 rng(1);
    RawTable t = synth_table(rng, 60, 0, true);
    auto [X, y] = encode(t, {}, {"x1"}, "days");
    GlmFit f = fit(X, y, Family{FamilyKind::PoissonLog});
    CHECK(criterion_value(f, Criterion::Aic) == f.aic);
    CHECK(criterion_value(f, Criterion::Bic) == f.bic);
    CHECK(f.bic - f.aic ==
          doctest::Approx(2.0 * (std::log(60.0) - 2.0)).epsilon(1e-12));
}

TEST_CASE("single improving candidate: one step, then stop") {
    std::mt19937_64 rng(2);
    RawTable t = synth_table(rng, 200, 0, true);
    SelectionTrace trace = forward_select(t, {}, {"x1"}, "days",
                                          Family{FamilyKind::PoissonLog},
                                          Criterion::Bic);
    CHECK(trace.final_terms == std::vector<std::string>{"x1"});
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].chosen == "x1");
}

TEST_CASE("pure-noise candidates leave the intercept-only model (most seeds)") {
    int intercept_only = 0;
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        RawTable t = synth_table(rng, 150, 3, false);
        SelectionTrace trace = forward_select(
            t, {}, {"n0", "n1", "n2"}, "days", Family{FamilyKind::PoissonLog},
            Criterion::Bic);
        if (trace.final_terms.empty()) ++intercept_only;
    }
    CHECK(intercept_only >= 16);
}

TEST_CASE("forward selection never beats the exhaustive best subset") {
    for (unsigned seed = 10; seed < 30; ++seed) {
        std::mt19937_64 rng(seed);
        RawTable t = synth_table(rng, 80, 4, true);
        std::vector<std::string> candidates{"x1", "n0", "n1", "n2", "n3"};
        SelectionTrace trace = forward_select(t, {}, candidates, "days",
                                              Family{FamilyKind::PoissonLog},
                                              Criterion::Bic);
        double forward = criterion_value(trace.final_fit, Criterion::Bic);
        double best = exhaustive_best(t, candidates, Criterion::Bic);
        CHECK(forward >= best - 1e-9);
        // Accepted steps strictly decrease the criterion.
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& step : trace.steps) {
            if (!step.chosen) continue;
            CHECK(step.criterion_after < step.no_change_criterion);
            CHECK(step.criterion_after < prev);
            prev = step.criterion_after;
        }
        // Final model cannot be worse than intercept-only.
        CHECK(forward <= trace.steps[0].no_change_criterion + 1e-9);
    }
}

TEST_CASE("serial and parallel candidate evaluation give the identical trace") {
    std::mt19937_64 rng(50);
    RawTable t = synth_table(rng, 120, 4, true);
    std::vector<std::string> candidates{"x1", "n0", "n1", "n2", "n3"};
    SelectOptions serial;
    serial.jobs = 1;
    SelectOptions parallel;
    parallel.jobs = 8;
    SelectionTrace a = forward_select(t, {}, candidates, "days",
                                      Family{FamilyKind::PoissonLog}, Criterion::Bic,
                                      serial);
    SelectionTrace b = forward_select(t, {}, candidates, "days",
                                      Family{FamilyKind::PoissonLog}, Criterion::Bic,
                                      parallel);
    CHECK(trace_to_json(a, Criterion::Bic) == trace_to_json(b, Criterion::Bic));
}

TEST_CASE("ties break toward the earlier candidate") {
    std::mt19937_64 rng(60);
    RawTable t = synth_table(rng, 100, 0, true);
    // Duplicate predictor under two names: identical criterion at step one.
    Column dup = t.column("x1");
    dup.schema.name = "x1_copy";
    RawTable t2 = t;
    t2.add_column(dup);
    SelectionTrace trace = forward_select(t2, {}, {"x1_copy", "x1"}, "days",
                                          Family{FamilyKind::PoissonLog},
                                          Criterion::Bic);
    REQUIRE(!trace.steps.empty());
    CHECK(trace.steps[0].chosen == "x1_copy");
    // The second copy is collinear once the first is in; it must be scored
    // +inf with a warning rather than aborting the search.
    CHECK(trace.final_terms == std::vector<std::string>{"x1_copy"});
    CHECK(!trace.warnings.empty());
}

TEST_CASE("empty candidate list is rejected") {
    std::mt19937_64 rng(70);
    RawTable t = synth_table(rng, 50, 0, true);
    CHECK_THROWS_AS(forward_select(t, {}, {}, "days", Family{FamilyKind::PoissonLog},
                                   Criterion::Bic),
                    ValidationError);
}

TEST_CASE("trace text shows steps, candidates and the no-change row") {
    std::mt19937_64 rng(80);
    RawTable t = synth_table(rng, 150, 1, true);
    SelectionTrace trace = forward_select(t, {}, {"x1", "n0"}, "days",
                                          Family{FamilyKind::PoissonLog},
                                          Criterion::Bic);
    std::string text = format_trace_text(trace, Criterion::Bic, "days");
    CHECK(text.find("Start:  BIC=") != std::string::npos);
    CHECK(text.find("days ~ 1") != std::string::npos);
    CHECK(text.find("+ x1") != std::string::npos);
    CHECK(text.find("<none>") != std::string::npos);
}
