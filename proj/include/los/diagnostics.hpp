#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>

#include "los/glm.hpp"
#include "los/table.hpp"

namespace los {

struct MetricsReport {
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> r_squared;  // missing when var(y) = 0
    std::size_t n = 0;
};

struct PearsonReport {
    double per_observation = 0.0;  // headline: sum / n
    double sum = 0.0;
    double per_df = 0.0;  // sum / df_residual; 0 when df unknown
};

// Per-observation mean Pearson contribution (1/n) sum (y-mu)^2 / V(mu).
double pearson_statistic(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                         Family family);

PearsonReport pearson_report(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                             Family family, long df_residual);

MetricsReport fit_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& mu);

// r_i = sign(y_i - mu_i) * sqrt(d_i), d_i = observation i's deviance share.
Eigen::VectorXd deviance_residuals(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                                   Family family);

// theoretical_i = Phi^-1((i - 0.5)/n) against the sorted residuals.
std::pair<Eigen::VectorXd, Eigen::VectorXd> qq_data(const Eigen::VectorXd& residuals);

struct GroupStats {
    double mean = 0.0;
    double median = 0.0;
    std::size_t n = 0;
};

// Insertion order follows descending level frequency.
std::vector<std::pair<std::string, GroupStats>> group_means(const RawTable& table,
                                                            const std::string& by,
                                                            const std::string& target);

double correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct FiveNumber {
    double min, q1, median, q3, max;
};

FiveNumber five_number_summary(const Eigen::VectorXd& v);

}  // namespace los
