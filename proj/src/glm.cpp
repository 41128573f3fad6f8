#include "los/glm.hpp"

#include <cmath>

#include "los/errors.hpp"
#include "los/special.hpp"

namespace los {

namespace {

void check_poisson_response(const Eigen::VectorXd& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) < 0.0)
            throw NumericError("poisson-log response must be nonnegative");
        if (y(i) != std::floor(y(i)))
            throw NumericError("poisson-log response must be integer-valued");
    }
}

double null_deviance_of(const Eigen::VectorXd& y, Family family) {
    const double ybar = y.mean();
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(y.size(), ybar);
    return deviance(y, mu, family);
}

}  // namespace

Eigen::VectorXd predict_mu(Family family, const Eigen::MatrixXd& X,
                           const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = X * beta;
    if (family.kind == FamilyKind::PoissonLog) return eta.array().exp();
    return eta;
}

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    if (y.size() != mu.size()) throw NumericError("poisson_deviance: length mismatch");
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!(mu(i) > 0.0)) throw NumericError("poisson_deviance: nonpositive mu");
        if (y(i) < 0.0) throw NumericError("poisson_deviance: negative y");
        double term = -(y(i) - mu(i));
        if (y(i) > 0.0) term += y(i) * std::log(y(i) / mu(i));
        dev += term;
    }
    return 2.0 * dev;
}

double deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, Family family) {
    if (family.kind == FamilyKind::PoissonLog) return poisson_deviance(y, mu);
    return (y - mu).squaredNorm();
}

double log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                      Family family) {
    if (y.size() != mu.size()) throw NumericError("log_likelihood: length mismatch");
    const auto n = y.size();
    if (family.kind == FamilyKind::PoissonLog) {
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(mu(i) > 0.0)) throw NumericError("log_likelihood: nonpositive mu");
            ll += (y(i) > 0.0 ? y(i) * std::log(mu(i)) : 0.0) - mu(i) -
                  log_factorial(y(i));
        }
        return ll;
    }
    const double rss = (y - mu).squaredNorm();
    const double s2 = rss / static_cast<double>(n);
    return -0.5 * static_cast<double>(n) *
           (std::log(2.0 * M_PI * s2) + 1.0);
}

double aic(const GlmFit& fit) {
    return -2.0 * fit.log_likelihood + 2.0 * static_cast<double>(fit.beta.size());
}

double bic(const GlmFit& fit) {
    return -2.0 * fit.log_likelihood +
           static_cast<double>(fit.beta.size()) * std::log(static_cast<double>(fit.n));
}

GlmFit fit(const DesignMatrix& X, const Eigen::VectorXd& y, Family family,
           const FitOptions& opts) {
    const Eigen::Index n = X.n();
    const Eigen::Index p = X.p();
    if (n != y.size()) throw ValidationError("fit: X and y row counts differ");
    if (n <= p) throw ValidationError("fit: need n > p");
    if (opts.max_iterations < 1 || !(opts.tolerance > 0.0))
        throw ValidationError("fit: invalid options");
    if (family.kind == FamilyKind::PoissonLog) check_poisson_response(y);

    GlmFit result;
    result.family = family;
    result.column_names = X.column_names;
    result.n = static_cast<long>(n);
    result.df_null = static_cast<long>(n) - 1;
    result.df_residual = static_cast<long>(n - p);

    // Start: mu0 = y + 0.1 (guards y = 0), eta0 = link(mu0).
    Eigen::VectorXd mu(n), eta(n);
    if (family.kind == FamilyKind::PoissonLog) {
        mu = y.array() + 0.1;
        eta = mu.array().log();
    } else {
        mu = y;
        eta = mu;
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    double dev_prev = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    int iter = 0;

    while (iter < opts.max_iterations) {
        ++iter;
        Eigen::VectorXd w, z;
        if (family.kind == FamilyKind::PoissonLog) {
            w = mu;  // V(mu) = mu, weight = mu for the log link
            z = eta + ((y - mu).array() / mu.array()).matrix();
        } else {
            w = Eigen::VectorXd::Ones(n);
            z = y;
        }
        Eigen::VectorXd sw = w.array().sqrt();
        Eigen::MatrixXd wx = sw.asDiagonal() * X.values;
        qr.compute(wx);
        if (qr.rank() < p)
            throw NumericError("fit: design matrix is rank deficient (rank " +
                               std::to_string(qr.rank()) + " < " + std::to_string(p) +
                               ")");
        beta = qr.solve((sw.array() * z.array()).matrix());
        eta = X.values * beta;
        mu = family.kind == FamilyKind::PoissonLog
                 ? Eigen::VectorXd(eta.array().exp())
                 : eta;
        const double dev = deviance(y, mu, family);
        result.deviance_path.push_back(dev);
        if (iter > 1 &&
            std::fabs(dev - dev_prev) / (std::fabs(dev) + 0.1) < opts.tolerance) {
            converged = true;
            dev_prev = dev;
            break;
        }
        dev_prev = dev;
    }

    result.beta = beta;
    result.iterations = iter;
    result.converged = converged || family.kind == FamilyKind::GaussianIdentity;
    result.deviance = dev_prev;
    result.null_deviance = null_deviance_of(y, family);
    result.log_likelihood = log_likelihood(y, mu, family);
    result.aic = aic(result);
    result.bic = bic(result);

    // Covariance (X'WX)^-1 at the converged coefficients: refactor with the
    // weights evaluated at the final mu, then A P = Q R gives
    // (A'A)^-1 = P R^-1 R^-T P'.
    {
        Eigen::VectorXd w_final = family.kind == FamilyKind::PoissonLog
                                      ? mu
                                      : Eigen::VectorXd::Ones(n);
        Eigen::MatrixXd wx = w_final.array().sqrt().matrix().asDiagonal() * X.values;
        qr.compute(wx);
        if (qr.rank() < p)
            throw NumericError("fit: design matrix is rank deficient at convergence");
    }
    Eigen::MatrixXd R = qr.matrixR()
                            .topLeftCorner(p, p)
                            .triangularView<Eigen::Upper>();
    Eigen::MatrixXd rinv = R.triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd inner = rinv * rinv.transpose();
    const auto& perm = qr.colsPermutation();
    result.covariance = perm * inner * perm.transpose();
    // Enforce exact symmetry against round-off.
    result.covariance = 0.5 * (result.covariance + result.covariance.transpose()).eval();
    return result;
}

Eigen::VectorXd predict(const GlmFit& fit, const DesignMatrix& X_new) {
    if (X_new.column_names != fit.column_names)
        throw SchemaError("predict: design matrix columns do not match the fit");
    return predict_mu(fit.family, X_new.values, fit.beta);
}

std::vector<WaldRow> wald_inference(const GlmFit& fit) {
    const Eigen::Index p = fit.beta.size();
    Eigen::LLT<Eigen::MatrixXd> llt(fit.covariance);
    if (llt.info() != Eigen::Success)
        throw NumericError("wald_inference: covariance is not positive definite");
    std::vector<WaldRow> rows;
    rows.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        WaldRow r;
        r.name = fit.column_names[static_cast<std::size_t>(j)];
        r.estimate = fit.beta(j);
        r.std_error = std::sqrt(fit.covariance(j, j));
        r.z = r.estimate / r.std_error;
        r.p_value = std::erfc(std::fabs(r.z) * 0.70710678118654752440);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace los
