#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace los {

// ln Gamma(x) for x > 0, Lanczos approximation (g = 607/128, 15 terms).
// Relative error below 1e-14 over the domain used here (x >= 1).
double log_gamma(double x);

// ln(n!) = log_gamma(n + 1).
double log_factorial(double n);

// Standard normal CDF via erfc; accurate to full double precision.
double normal_cdf(double x);

// Standard normal quantile (inverse CDF), Wichura's AS 241 rational
// approximations. Absolute error well below 1e-9 for p in (0,1).
double normal_quantile(double p);

// Type-7 quantile (linear interpolation between order statistics) of a
// sample. The input need not be sorted; p in [0,1].
double quantile_type7(std::vector<double> values, double p);

// splitmix64 step: advances the state and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state);

}  // namespace los
