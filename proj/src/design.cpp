#include "los/design.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "los/errors.hpp"
#include "los/special.hpp"

namespace los {

namespace {

const FactorSpec* find_spec(const std::vector<FactorSpec>& specs,
                            const std::string& name) {
    for (const auto& s : specs)
        if (s.variable == name) return &s;
    return nullptr;
}

}  // namespace

std::pair<DesignMatrix, Eigen::VectorXd> encode(const RawTable& table,
                                                const std::vector<FactorSpec>& specs,
                                                const std::vector<std::string>& terms,
                                                const std::string& response) {
    const Column& ycol = table.column(response);
    if (ycol.schema.kind != ColumnKind::CountInteger)
        throw ValidationError("response '" + response + "' must be a count column");

    const auto n = static_cast<Eigen::Index>(table.n_rows());

    DesignMatrix mat;
    mat.column_names.push_back("(Intercept)");

    struct Encoder {
        const Column* col;
        // For factors: level -> dummy column index (reference maps to -1).
        std::vector<std::pair<std::string, Eigen::Index>> level_cols;
        bool numeric;
        Eigen::Index col_index;  // numeric term's column
    };
    std::vector<Encoder> encoders;

    for (const auto& term : terms) {
        const Column& col = table.column(term);
        if (col.schema.kind == ColumnKind::CountInteger) {
            Encoder e{&col, {}, true, static_cast<Eigen::Index>(mat.column_names.size())};
            mat.column_names.push_back(term);
            encoders.push_back(std::move(e));
        } else {
            const FactorSpec* spec = find_spec(specs, term);
            if (!spec)
                throw SchemaError("no factor spec for categorical term '" + term + "'");
            Encoder e{&col, {}, false, -1};
            e.level_cols.emplace_back(spec->levels.front(), -1);
            for (std::size_t k = 1; k < spec->levels.size(); ++k) {
                e.level_cols.emplace_back(
                    spec->levels[k], static_cast<Eigen::Index>(mat.column_names.size()));
                mat.column_names.push_back(term + spec->levels[k]);
            }
            encoders.push_back(std::move(e));
        }
    }

    const auto p = static_cast<Eigen::Index>(mat.column_names.size());
    mat.values = Eigen::MatrixXd::Zero(n, p);
    mat.values.col(0).setOnes();

    for (const auto& e : encoders) {
        if (e.numeric) {
            for (Eigen::Index i = 0; i < n; ++i)
                mat.values(i, e.col_index) = static_cast<double>(e.col->ints[i]);
            continue;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::string& level = e.col->cats[static_cast<std::size_t>(i)];
            auto it = std::find_if(e.level_cols.begin(), e.level_cols.end(),
                                   [&](const auto& lc) { return lc.first == level; });
            if (it == e.level_cols.end())
                throw SchemaError("level '" + level + "' of factor '" +
                                  e.col->schema.name + "' is absent from its spec");
            if (it->second >= 0) mat.values(i, it->second) = 1.0;
        }
    }

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
        y(i) = static_cast<double>(ycol.ints[static_cast<std::size_t>(i)]);
    return {std::move(mat), std::move(y)};
}

std::size_t resolve_train_size(std::size_t n, const SplitSpec& spec) {
    std::size_t train_size = spec.train_size;
    if (train_size == 0) {
        if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
            throw ValidationError("train_fraction must lie in (0,1)");
        train_size = static_cast<std::size_t>(
            std::floor(static_cast<double>(n) * spec.train_fraction + 0.5));
    }
    if (train_size == 0 || train_size >= n)
        throw ValidationError("train_size " + std::to_string(train_size) +
                              " out of range for n=" + std::to_string(n));
    return train_size;
}

std::vector<std::size_t> split_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::uint64_t state = seed;
    for (std::size_t i = n; i-- > 1;) {
        std::size_t j = static_cast<std::size_t>(splitmix64_next(state) % (i + 1));
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

std::pair<RawTable, RawTable> split(const RawTable& table, const SplitSpec& spec) {
    const std::size_t n = table.n_rows();
    const std::size_t train_size = resolve_train_size(n, spec);
    std::vector<std::size_t> order = split_order(n, spec.seed);
    std::vector<std::size_t> train_idx(order.begin(),
                                       order.begin() + static_cast<long>(train_size));
    std::vector<std::size_t> test_idx(order.begin() + static_cast<long>(train_size),
                                      order.end());
    return {table.select_rows(train_idx), table.select_rows(test_idx)};
}

void write_design_csv(const DesignMatrix& mat, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    for (std::size_t k = 0; k < mat.column_names.size(); ++k) {
        if (k) out << ',';
        out << mat.column_names[k];
    }
    out << '\n';
    out.precision(17);
    for (Eigen::Index i = 0; i < mat.n(); ++i) {
        for (Eigen::Index j = 0; j < mat.p(); ++j) {
            if (j) out << ',';
            out << mat.values(i, j);
        }
        out << '\n';
    }
}

}  // namespace los
