#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace los {

enum class ColumnKind { CountInteger, Categorical };

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    std::optional<std::vector<std::string>> allowed_levels;  // categorical only
    bool allow_missing = false;

    bool operator==(const ColumnSchema&) const = default;
};

// One typed column. Count columns fill `ints`, categorical columns fill
// `cats`; `missing` flags are explicit, no sentinel strings leak into levels.
struct Column {
    ColumnSchema schema;
    std::vector<long long> ints;
    std::vector<std::string> cats;
    std::vector<char> missing;

    bool operator==(const Column&) const = default;

    std::size_t size() const {
        return schema.kind == ColumnKind::CountInteger ? ints.size() : cats.size();
    }
};

class RawTable {
public:
    RawTable() = default;
    explicit RawTable(std::vector<Column> columns);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return columns_.size(); }
    const std::vector<Column>& columns() const { return columns_; }

    bool has_column(const std::string& name) const;
    const Column& column(const std::string& name) const;  // LookupError if absent
    Column& column(const std::string& name);

    void add_column(Column col);  // ValidationError on size/name clash
    RawTable without_column(const std::string& name) const;
    RawTable select_rows(const std::vector<std::size_t>& indices) const;

    bool operator==(const RawTable&) const = default;

private:
    std::vector<Column> columns_;
    std::size_t n_rows_ = 0;
};

struct LoadOptions {
    std::vector<std::string> missing_tokens{"?", ""};
};

RawTable load_csv(const std::string& path, const std::vector<ColumnSchema>& schema,
                  const LoadOptions& opts = {},
                  std::vector<std::string>* warnings = nullptr);

void write_csv(const RawTable& table, const std::string& path,
               const std::string& missing_token = "?");

struct NumericSummary {
    double min, q1, median, mean, q3, max;
    std::size_t n = 0;
    std::size_t n_missing = 0;
};

// Level counts in descending frequency, ties broken lexicographically.
using LevelCounts = std::vector<std::pair<std::string, std::size_t>>;

struct ColumnSummary {
    std::optional<NumericSummary> numeric;
    std::optional<LevelCounts> levels;
    std::size_t n_missing = 0;
};

ColumnSummary column_summary(const RawTable& table, const std::string& name);

// Count a categorical column's observed levels, most frequent first.
LevelCounts level_counts(const Column& col);

// The 13-column study schema (days .. num_diags, weight included).
std::vector<ColumnSchema> study_schema();

// Schema of the table the cleaning recipe produces: weight dropped, race
// recoded, admit_type_id categorical.
std::vector<ColumnSchema> cleaned_study_schema();

// Parse a schema file: JSON array of {name, kind, allowed_levels, allow_missing}.
std::vector<ColumnSchema> schema_from_json_file(const std::string& path);

}  // namespace los
