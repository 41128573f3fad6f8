// Independent oracles used by the test suites. Nothing here calls into the
// IRLS path it checks: the Poisson maximizer is a damped Newton iteration on
// the log-likelihood, the least-squares oracle solves the normal equations,
// and Hessians come from central finite differences.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oracle {

inline double poisson_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        ll += y(i) * eta(i) - std::exp(eta(i));  // log(y!) constant dropped
    return ll;
}

// Damped Newton maximization of the Poisson log-likelihood. Halves the step
// until the likelihood does not decrease.
inline Eigen::VectorXd poisson_mle_newton(const Eigen::MatrixXd& X,
                                          const Eigen::VectorXd& y,
                                          int max_iter = 200, double tol = 1e-12) {
    const Eigen::Index p = X.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    beta(0) = std::log(std::max(y.mean(), 1e-8));
    double ll = poisson_loglik(X, y, beta);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd mu = (X * beta).array().exp();
        Eigen::VectorXd grad = X.transpose() * (y - mu);
        Eigen::MatrixXd hess = X.transpose() * mu.asDiagonal() * X;
        Eigen::VectorXd step = hess.ldlt().solve(grad);
        double t = 1.0;
        Eigen::VectorXd cand;
        double ll_new;
        for (int h = 0; h < 60; ++h) {
            cand = beta + t * step;
            ll_new = poisson_loglik(X, y, cand);
            if (ll_new >= ll - 1e-14) break;
            t *= 0.5;
        }
        double change = (cand - beta).cwiseAbs().maxCoeff();
        beta = cand;
        ll = ll_new;
        if (change < tol) break;
    }
    return beta;
}

// Central finite-difference Hessian of the negative Poisson log-likelihood.
inline Eigen::MatrixXd poisson_fd_information(const Eigen::MatrixXd& X,
                                              const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& beta,
                                              double h = 1e-5) {
    const Eigen::Index p = beta.size();
    Eigen::MatrixXd hess(p, p);
    auto f = [&](const Eigen::VectorXd& b) { return -poisson_loglik(X, y, b); };
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            Eigen::VectorXd bpp = beta, bpm = beta, bmp = beta, bmm = beta;
            bpp(i) += h; bpp(j) += h;
            bpm(i) += h; bpm(j) -= h;
            bmp(i) -= h; bmp(j) += h;
            bmm(i) -= h; bmm(j) -= h;
            hess(i, j) = (f(bpp) - f(bpm) - f(bmp) + f(bmm)) / (4.0 * h * h);
        }
    }
    return 0.5 * (hess + hess.transpose());
}

// Ordinary least squares via the normal equations.
inline Eigen::VectorXd ols_normal_equations(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& y) {
    return (X.transpose() * X).ldlt().solve(X.transpose() * y);
}

// Two-pass mean: sum then mean, no incremental update.
inline double two_pass_mean(const std::vector<double>& v) {
    long double sum = 0.0L;
    for (double x : v) sum += x;
    return static_cast<double>(sum / static_cast<long double>(v.size()));
}

// Random full-rank Poisson regression instance with known coefficients.
struct PoissonInstance {
    Eigen::MatrixXd X;  // includes intercept column
    Eigen::VectorXd y;
    Eigen::VectorXd beta_true;
};

inline PoissonInstance random_poisson_instance(std::mt19937_64& rng, int n, int p) {
    std::normal_distribution<double> covar(0.0, 1.0);
    std::uniform_real_distribution<double> coef(-0.4, 0.4);
    PoissonInstance inst;
    inst.X = Eigen::MatrixXd::Ones(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < p; ++j) inst.X(i, j) = covar(rng);
    inst.beta_true = Eigen::VectorXd(p);
    inst.beta_true(0) = 1.0 + coef(rng);
    for (int j = 1; j < p; ++j) inst.beta_true(j) = coef(rng);
    inst.y = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
        double mu = std::exp(inst.X.row(i) * inst.beta_true);
        std::poisson_distribution<long> draw(mu);
        inst.y(i) = static_cast<double>(draw(rng));
    }
    return inst;
}

}  // namespace oracle
