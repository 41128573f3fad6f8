#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "los/preprocess.hpp"
#include "los/table.hpp"

namespace los {

struct DesignMatrix {
    std::vector<std::string> column_names;  // first = "(Intercept)"
    Eigen::MatrixXd values;                 // n x p

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index p() const { return values.cols(); }
};

// Dummy-encode `terms` of a cleaned table. Numeric terms contribute one
// column; a k-level factor contributes k-1 columns named variable+level
// in spec level order (reference level encoded as all zeros).
std::pair<DesignMatrix, Eigen::VectorXd> encode(const RawTable& table,
                                                const std::vector<FactorSpec>& specs,
                                                const std::vector<std::string>& terms,
                                                const std::string& response);

struct SplitSpec {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
    // 0 = derive as round-half-up(n * train_fraction).
    std::size_t train_size = 0;
};

// Deterministic Fisher-Yates shuffle driven by splitmix64(seed); the first
// train_size shuffled indices form the train set.
std::pair<RawTable, RawTable> split(const RawTable& table, const SplitSpec& spec);

// The shuffled index order itself (train indices first). Exposed for
// reproducibility checks.
std::vector<std::size_t> split_order(std::size_t n, std::uint64_t seed);

std::size_t resolve_train_size(std::size_t n, const SplitSpec& spec);

void write_design_csv(const DesignMatrix& mat, const std::string& path);

}  // namespace los
