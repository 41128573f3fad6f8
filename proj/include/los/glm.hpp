#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "los/design.hpp"

namespace los {

enum class FamilyKind { PoissonLog, GaussianIdentity };

struct Family {
    FamilyKind kind = FamilyKind::PoissonLog;
};

struct FitOptions {
    int max_iterations = 25;
    double tolerance = 1e-8;  // relative deviance-change threshold
};

struct GlmFit {
    Family family;
    std::vector<std::string> column_names;
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;  // (X'WX)^-1 at convergence
    double deviance = 0.0;
    double null_deviance = 0.0;
    long df_null = 0;      // n - 1
    long df_residual = 0;  // n - p
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    long n = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> deviance_path;  // per-iteration deviance
};

// Fit by iteratively reweighted least squares; inner solve is a Householder
// QR of sqrt(W) X. Rank-deficient X is a hard error.
GlmFit fit(const DesignMatrix& X, const Eigen::VectorXd& y, Family family,
           const FitOptions& opts = {});

// mu_i = exp(x_i' beta) for poisson-log, x_i' beta for gaussian-identity.
// Column names of X_new must match the fit exactly.
Eigen::VectorXd predict(const GlmFit& fit, const DesignMatrix& X_new);

Eigen::VectorXd predict_mu(Family family, const Eigen::MatrixXd& X,
                           const Eigen::VectorXd& beta);

// D = 2 sum[ y ln(y/mu) - (y - mu) ], with y ln(y/mu) := 0 when y = 0.
double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu);

double deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, Family family);

double log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                      Family family);

double aic(const GlmFit& fit);
double bic(const GlmFit& fit);

struct WaldRow {
    std::string name;
    double estimate;
    double std_error;
    double z;
    double p_value;
};

std::vector<WaldRow> wald_inference(const GlmFit& fit);

}  // namespace los
