#include "los/preprocess.hpp"

#include <algorithm>

#include "json.hpp"
#include "los/errors.hpp"

namespace los {

std::pair<RawTable, std::size_t> drop_invalid_gender(const RawTable& table) {
    const Column& gender = table.column("gender");
    std::vector<std::size_t> keep;
    keep.reserve(table.n_rows());
    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        bool valid = !gender.missing[i] &&
                     (gender.cats[i] == "Female" || gender.cats[i] == "Male");
        if (valid) keep.push_back(i);
    }
    std::size_t removed = table.n_rows() - keep.size();
    if (removed == 0) return {table, 0};
    return {table.select_rows(keep), removed};
}

RawTable drop_column(const RawTable& table, const std::string& name) {
    return table.without_column(name);
}

RawTable recode_race(const RawTable& table) {
    RawTable out = table;
    Column& race = out.column("race");
    if (race.schema.kind != ColumnKind::Categorical)
        throw ValidationError("race column is not categorical");
    for (std::size_t i = 0; i < out.n_rows(); ++i) {
        if (race.missing[i]) {
            race.cats[i] = "Missing";
            race.missing[i] = 0;
            continue;
        }
        const std::string& v = race.cats[i];
        if (v == "Asian" || v == "Hispanic" || v == "Other") {
            race.cats[i] = "Other";
        } else if (v != "Caucasian" && v != "AfricanAmerican") {
            throw ValidationError("unexpected race level '" + v + "'");
        }
    }
    race.schema.allowed_levels =
        std::vector<std::string>{"Caucasian", "AfricanAmerican", "Other", "Missing"};
    race.schema.allow_missing = false;
    return out;
}

RawTable factorize_admit_type(const RawTable& table) {
    RawTable out = table;
    Column& col = out.column("admit_type_id");
    if (col.schema.kind != ColumnKind::CountInteger)
        throw ValidationError("admit_type_id is already categorical");
    Column factored;
    factored.schema.name = "admit_type_id";
    factored.schema.kind = ColumnKind::Categorical;
    factored.schema.allowed_levels = std::vector<std::string>{"1", "2", "3", "4"};
    factored.cats.reserve(out.n_rows());
    for (std::size_t i = 0; i < out.n_rows(); ++i) {
        if (col.missing[i])
            throw ValidationError("admit_type_id has a missing value at row " +
                                  std::to_string(i + 1));
        long long code = col.ints[i];
        if (code < 1 || code > 4)
            throw ValidationError("admit_type_id code " + std::to_string(code) +
                                  " out of range 1-4");
        factored.cats.push_back(std::to_string(code));
        factored.missing.push_back(0);
    }
    col = std::move(factored);
    return out;
}

std::vector<FactorSpec> build_factor_specs(const RawTable& table) {
    std::vector<FactorSpec> specs;
    for (const auto& col : table.columns()) {
        if (col.schema.kind != ColumnKind::Categorical) continue;
        LevelCounts counts = level_counts(col);
        if (counts.empty())
            throw ValidationError("categorical column '" + col.schema.name +
                                  "' has no observed levels");
        FactorSpec spec;
        spec.variable = col.schema.name;
        for (const auto& [level, n] : counts) spec.levels.push_back(level);
        specs.push_back(std::move(spec));
    }
    return specs;
}

CleanResult run_cleaning_recipe(const RawTable& table) {
    CleanResult result;
    result.report.rows_in = table.n_rows();

    auto [filtered, removed] = drop_invalid_gender(table);
    result.report.rows_removed_gender = removed;

    RawTable cleaned = filtered;
    if (cleaned.has_column("weight")) {
        cleaned = drop_column(cleaned, "weight");
        result.report.columns_dropped.push_back("weight");
    }
    cleaned = recode_race(cleaned);
    cleaned = factorize_admit_type(cleaned);

    for (const auto& [level, n] : level_counts(cleaned.column("race")))
        result.report.race_recode_counts[level] = n;

    // Gender, weight, race and admit_type_id are the only columns the study
    // reports missingness in; anything else is invalid input.
    for (const auto& col : cleaned.columns()) {
        for (std::size_t i = 0; i < cleaned.n_rows(); ++i) {
            if (col.missing[i])
                throw ValidationError("unexpected missing value in column '" +
                                      col.schema.name + "' at row " +
                                      std::to_string(i + 1));
        }
    }

    result.report.rows_out = cleaned.n_rows();
    result.specs = build_factor_specs(cleaned);
    result.table = std::move(cleaned);
    return result;
}

std::string cleaning_report_to_json(const CleaningReport& report) {
    nlohmann::ordered_json doc;
    doc["rows_in"] = report.rows_in;
    doc["rows_removed_gender"] = report.rows_removed_gender;
    doc["columns_dropped"] = report.columns_dropped;
    doc["race_recode_counts"] = report.race_recode_counts;
    doc["rows_out"] = report.rows_out;
    return doc.dump(2) + "\n";
}

std::string factor_specs_to_json(const std::vector<FactorSpec>& specs) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& s : specs) {
        nlohmann::ordered_json item;
        item["variable"] = s.variable;
        item["levels"] = s.levels;
        item["reference"] = s.reference();
        doc.push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

std::vector<FactorSpec> factor_specs_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("factor specs: ") + e.what());
    }
    std::vector<FactorSpec> specs;
    for (const auto& item : doc) {
        FactorSpec s;
        s.variable = item.at("variable").get<std::string>();
        s.levels = item.at("levels").get<std::vector<std::string>>();
        if (s.levels.empty())
            throw ValidationError("factor spec '" + s.variable + "' has no levels");
        if (item.contains("reference") &&
            item["reference"].get<std::string>() != s.levels.front())
            throw ValidationError("factor spec '" + s.variable +
                                  "': reference must equal the first level");
        specs.push_back(std::move(s));
    }
    return specs;
}

}  // namespace los
