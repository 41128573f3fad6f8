#include "los/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "los/errors.hpp"
#include "los/special.hpp"

namespace los {

namespace {

double variance_function(Family family, double mu) {
    return family.kind == FamilyKind::PoissonLog ? mu : 1.0;
}

}  // namespace

double pearson_statistic(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                         Family family) {
    if (y.size() != mu.size()) throw NumericError("pearson_statistic: length mismatch");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (family.kind == FamilyKind::PoissonLog && !(mu(i) > 0.0))
            throw NumericError("pearson_statistic: nonpositive mu");
        double r = y(i) - mu(i);
        sum += r * r / variance_function(family, mu(i));
    }
    return sum / static_cast<double>(y.size());
}

PearsonReport pearson_report(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                             Family family, long df_residual) {
    PearsonReport rep;
    rep.per_observation = pearson_statistic(y, mu, family);
    rep.sum = rep.per_observation * static_cast<double>(y.size());
    rep.per_df = df_residual > 0 ? rep.sum / static_cast<double>(df_residual) : 0.0;
    return rep;
}

MetricsReport fit_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    if (y.size() != mu.size() || y.size() < 2)
        throw ValidationError("fit_metrics: need equal lengths, n >= 2");
    MetricsReport rep;
    rep.n = static_cast<std::size_t>(y.size());
    const auto n = static_cast<double>(y.size());
    rep.mae = (y - mu).cwiseAbs().sum() / n;
    const double sse = (y - mu).squaredNorm();
    rep.rmse = std::sqrt(sse / n);
    const double ybar = y.mean();
    const double sst = (y.array() - ybar).matrix().squaredNorm();
    if (sst > 0.0) rep.r_squared = 1.0 - sse / sst;
    return rep;
}

Eigen::VectorXd deviance_residuals(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                                   Family family) {
    if (y.size() != mu.size())
        throw NumericError("deviance_residuals: length mismatch");
    Eigen::VectorXd r(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double d;
        if (family.kind == FamilyKind::PoissonLog) {
            if (!(mu(i) > 0.0))
                throw NumericError("deviance_residuals: nonpositive mu");
            d = -(y(i) - mu(i));
            if (y(i) > 0.0) d += y(i) * std::log(y(i) / mu(i));
            d *= 2.0;
            d = std::max(d, 0.0);  // clip tiny negative round-off
        } else {
            double e = y(i) - mu(i);
            d = e * e;
        }
        r(i) = std::copysign(std::sqrt(d), y(i) - mu(i));
    }
    return r;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> qq_data(const Eigen::VectorXd& residuals) {
    const Eigen::Index n = residuals.size();
    if (n < 2) throw ValidationError("qq_data: need at least 2 residuals");
    std::vector<double> sorted(residuals.data(), residuals.data() + n);
    std::sort(sorted.begin(), sorted.end());
    Eigen::VectorXd theoretical(n), sample(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        theoretical(i) = normal_quantile((static_cast<double>(i) + 0.5) /
                                         static_cast<double>(n));
        sample(i) = sorted[static_cast<std::size_t>(i)];
    }
    return {std::move(theoretical), std::move(sample)};
}

std::vector<std::pair<std::string, GroupStats>> group_means(const RawTable& table,
                                                            const std::string& by,
                                                            const std::string& target) {
    const Column& groups = table.column(by);
    const Column& values = table.column(target);
    if (groups.schema.kind != ColumnKind::Categorical)
        throw ValidationError("group_means: '" + by + "' is not categorical");
    if (values.schema.kind != ColumnKind::CountInteger)
        throw ValidationError("group_means: '" + target + "' is not numeric");

    std::vector<std::pair<std::string, GroupStats>> out;
    for (const auto& [level, count] : level_counts(groups)) {
        std::vector<double> vals;
        vals.reserve(count);
        for (std::size_t i = 0; i < table.n_rows(); ++i)
            if (!groups.missing[i] && groups.cats[i] == level)
                vals.push_back(static_cast<double>(values.ints[i]));
        GroupStats s;
        s.n = vals.size();
        double sum = 0.0;
        for (double v : vals) sum += v;
        s.mean = sum / static_cast<double>(vals.size());
        s.median = quantile_type7(vals, 0.5);
        out.emplace_back(level, s);
    }
    return out;
}

double correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("correlation: need equal lengths, n >= 2");
    const double mx = x.mean(), my = y.mean();
    Eigen::ArrayXd dx = x.array() - mx, dy = y.array() - my;
    const double sx = std::sqrt((dx * dx).sum());
    const double sy = std::sqrt((dy * dy).sum());
    if (!(sx > 0.0) || !(sy > 0.0))
        throw NumericError("correlation: zero variance input");
    return (dx * dy).sum() / (sx * sy);
}

FiveNumber five_number_summary(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw ValidationError("five_number_summary: empty input");
    std::vector<double> vals(v.data(), v.data() + v.size());
    FiveNumber f;
    f.min = *std::min_element(vals.begin(), vals.end());
    f.max = *std::max_element(vals.begin(), vals.end());
    f.q1 = quantile_type7(vals, 0.25);
    f.median = quantile_type7(vals, 0.5);
    f.q3 = quantile_type7(vals, 0.75);
    return f;
}

}  // namespace los
