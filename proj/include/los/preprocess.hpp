#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "los/table.hpp"

namespace los {

struct CleaningReport {
    std::size_t rows_in = 0;
    std::size_t rows_removed_gender = 0;
    std::vector<std::string> columns_dropped;
    std::map<std::string, std::size_t> race_recode_counts;
    std::size_t rows_out = 0;
};

// Ordered level list of one categorical variable; reference level first
// (the most frequent level in the data the spec was built from).
struct FactorSpec {
    std::string variable;
    std::vector<std::string> levels;
    const std::string& reference() const { return levels.front(); }
};

// Rows whose gender is not Female/Male are removed; returns removal count.
std::pair<RawTable, std::size_t> drop_invalid_gender(const RawTable& table);

RawTable drop_column(const RawTable& table, const std::string& name);

// Missing race -> "Missing"; Asian/Hispanic/Other -> "Other".
RawTable recode_race(const RawTable& table);

// admit_type_id integer codes 1..4 become a categorical column with
// levels "1".."4" (code 4 = unavailable stays a level, not missing).
RawTable factorize_admit_type(const RawTable& table);

// One spec per categorical column, levels in descending frequency,
// lexicographic tie-break, most frequent level first (= reference).
std::vector<FactorSpec> build_factor_specs(const RawTable& table);

struct CleanResult {
    RawTable table;
    CleaningReport report;
    std::vector<FactorSpec> specs;
};

// The full recipe: drop invalid gender, drop weight, recode race,
// factorize admit_type_id, build factor specs. Errors if any missing
// values survive the recipe.
CleanResult run_cleaning_recipe(const RawTable& table);

std::string cleaning_report_to_json(const CleaningReport& report);

std::string factor_specs_to_json(const std::vector<FactorSpec>& specs);
std::vector<FactorSpec> factor_specs_from_json(const std::string& text);

}  // namespace los
