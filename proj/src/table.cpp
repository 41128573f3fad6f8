#include "los/table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "los/errors.hpp"
#include "los/special.hpp"

namespace los {

RawTable::RawTable(std::vector<Column> columns) : columns_(std::move(columns)) {
    if (!columns_.empty()) {
        n_rows_ = columns_.front().size();
        for (const auto& c : columns_) {
            if (c.size() != n_rows_ || c.missing.size() != n_rows_)
                throw ValidationError("RawTable: ragged columns (column '" +
                                      c.schema.name + "')");
        }
    }
}

bool RawTable::has_column(const std::string& name) const {
    for (const auto& c : columns_)
        if (c.schema.name == name) return true;
    return false;
}

const Column& RawTable::column(const std::string& name) const {
    for (const auto& c : columns_)
        if (c.schema.name == name) return c;
    throw LookupError("unknown column '" + name + "'");
}

Column& RawTable::column(const std::string& name) {
    for (auto& c : columns_)
        if (c.schema.name == name) return c;
    throw LookupError("unknown column '" + name + "'");
}

void RawTable::add_column(Column col) {
    if (has_column(col.schema.name))
        throw ValidationError("duplicate column '" + col.schema.name + "'");
    if (!columns_.empty() && col.size() != n_rows_)
        throw ValidationError("column '" + col.schema.name + "' has wrong length");
    if (columns_.empty()) n_rows_ = col.size();
    columns_.push_back(std::move(col));
}

RawTable RawTable::without_column(const std::string& name) const {
    column(name);  // existence check
    std::vector<Column> kept;
    for (const auto& c : columns_)
        if (c.schema.name != name) kept.push_back(c);
    RawTable out(std::move(kept));
    out.n_rows_ = n_rows_;
    return out;
}

RawTable RawTable::select_rows(const std::vector<std::size_t>& indices) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const auto& c : columns_) {
        Column nc;
        nc.schema = c.schema;
        nc.missing.reserve(indices.size());
        if (c.schema.kind == ColumnKind::CountInteger)
            nc.ints.reserve(indices.size());
        else
            nc.cats.reserve(indices.size());
        for (std::size_t i : indices) {
            if (i >= n_rows_) throw ValidationError("row index out of range");
            if (c.schema.kind == ColumnKind::CountInteger)
                nc.ints.push_back(c.ints[i]);
            else
                nc.cats.push_back(c.cats[i]);
            nc.missing.push_back(c.missing[i]);
        }
        cols.push_back(std::move(nc));
    }
    return RawTable(std::move(cols));
}

namespace {

// RFC-4180 record reader: handles quoted fields, embedded commas/newlines,
// doubled quotes, CRLF line endings.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        saw_any = true;
        char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
    }
    if (!saw_any) return false;
    fields.push_back(std::move(field));
    return true;
}

bool is_missing_token(const std::string& tok, const LoadOptions& opts) {
    return std::find(opts.missing_tokens.begin(), opts.missing_tokens.end(), tok) !=
           opts.missing_tokens.end();
}

std::string cell_coords(std::size_t row, const std::string& col) {
    std::ostringstream os;
    os << "row " << row << ", column '" << col << "'";
    return os.str();
}

}  // namespace

RawTable load_csv(const std::string& path, const std::vector<ColumnSchema>& schema,
                  const LoadOptions& opts, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");

    std::vector<std::string> header;
    if (!read_record(in, header))
        throw ParseError("'" + path + "': missing header row");

    // Map each schema column to its position in the file.
    std::vector<long> pos(schema.size(), -1);
    std::unordered_set<std::string> wanted;
    for (const auto& s : schema) wanted.insert(s.name);
    for (std::size_t j = 0; j < header.size(); ++j) {
        bool used = false;
        for (std::size_t k = 0; k < schema.size(); ++k) {
            if (header[j] == schema[k].name) {
                if (pos[k] != -1)
                    throw SchemaError("duplicate header column '" + header[j] + "'");
                pos[k] = static_cast<long>(j);
                used = true;
            }
        }
        if (!used && warnings)
            warnings->push_back("ignoring extra column '" + header[j] + "'");
    }
    for (std::size_t k = 0; k < schema.size(); ++k)
        if (pos[k] == -1)
            throw SchemaError("header is missing schema column '" + schema[k].name + "'");

    std::vector<Column> cols(schema.size());
    for (std::size_t k = 0; k < schema.size(); ++k) cols[k].schema = schema[k];

    std::vector<std::string> fields;
    std::size_t row = 0;
    while (read_record(in, fields)) {
        // A lone trailing newline produces one empty field; skip it.
        if (fields.size() == 1 && fields[0].empty() && in.peek() == EOF) break;
        ++row;
        if (fields.size() != header.size())
            throw ParseError("'" + path + "': row " + std::to_string(row) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        for (std::size_t k = 0; k < schema.size(); ++k) {
            const std::string& tok = fields[static_cast<std::size_t>(pos[k])];
            const ColumnSchema& cs = schema[k];
            Column& col = cols[k];
            if (is_missing_token(tok, opts)) {
                if (!cs.allow_missing)
                    throw ParseError("missing value in non-missing-allowed column, " +
                                     cell_coords(row, cs.name));
                col.missing.push_back(1);
                if (cs.kind == ColumnKind::CountInteger)
                    col.ints.push_back(0);
                else
                    col.cats.push_back("");
                continue;
            }
            if (cs.kind == ColumnKind::CountInteger) {
                long long v = 0;
                auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
                bool ok = ec == std::errc{} && p == tok.data() + tok.size() && v >= 0;
                if (!ok) {
                    if (cs.allow_missing) {
                        col.missing.push_back(1);
                        col.ints.push_back(0);
                        continue;
                    }
                    throw ParseError("unparseable count value '" + tok + "' at " +
                                     cell_coords(row, cs.name));
                }
                col.ints.push_back(v);
                col.missing.push_back(0);
            } else {
                if (cs.allowed_levels &&
                    std::find(cs.allowed_levels->begin(), cs.allowed_levels->end(),
                              tok) == cs.allowed_levels->end())
                    throw ParseError("unexpected level '" + tok + "' at " +
                                     cell_coords(row, cs.name));
                col.cats.push_back(tok);
                col.missing.push_back(0);
            }
        }
    }
    return RawTable(std::move(cols));
}

namespace {

void write_field(std::ostream& out, const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

void write_csv(const RawTable& table, const std::string& path,
               const std::string& missing_token) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    const auto& cols = table.columns();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        if (k) out << ',';
        write_field(out, cols[k].schema.name);
    }
    out << '\n';
    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (k) out << ',';
            const Column& c = cols[k];
            if (c.missing[i]) {
                write_field(out, missing_token);
            } else if (c.schema.kind == ColumnKind::CountInteger) {
                out << c.ints[i];
            } else {
                write_field(out, c.cats[i]);
            }
        }
        out << '\n';
    }
}

LevelCounts level_counts(const Column& col) {
    if (col.schema.kind != ColumnKind::Categorical)
        throw ValidationError("level_counts: column '" + col.schema.name +
                              "' is not categorical");
    std::map<std::string, std::size_t> freq;
    for (std::size_t i = 0; i < col.cats.size(); ++i)
        if (!col.missing[i]) ++freq[col.cats[i]];
    LevelCounts out(freq.begin(), freq.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

ColumnSummary column_summary(const RawTable& table, const std::string& name) {
    const Column& col = table.column(name);
    ColumnSummary out;
    out.n_missing = static_cast<std::size_t>(
        std::count(col.missing.begin(), col.missing.end(), char(1)));
    if (col.schema.kind == ColumnKind::CountInteger) {
        std::vector<double> vals;
        vals.reserve(col.ints.size());
        for (std::size_t i = 0; i < col.ints.size(); ++i)
            if (!col.missing[i]) vals.push_back(static_cast<double>(col.ints[i]));
        if (vals.empty()) throw ValidationError("column '" + name + "' is all-missing");
        NumericSummary s;
        s.n = vals.size();
        s.n_missing = out.n_missing;
        s.min = *std::min_element(vals.begin(), vals.end());
        s.max = *std::max_element(vals.begin(), vals.end());
        double sum = 0.0;
        for (double v : vals) sum += v;
        s.mean = sum / static_cast<double>(vals.size());
        s.q1 = quantile_type7(vals, 0.25);
        s.median = quantile_type7(vals, 0.5);
        s.q3 = quantile_type7(vals, 0.75);
        out.numeric = s;
    } else {
        out.levels = level_counts(col);
    }
    return out;
}

std::vector<ColumnSchema> study_schema() {
    auto cat = [](std::string name, std::vector<std::string> levels,
                  bool allow_missing = false) {
        ColumnSchema s;
        s.name = std::move(name);
        s.kind = ColumnKind::Categorical;
        if (!levels.empty()) s.allowed_levels = std::move(levels);
        s.allow_missing = allow_missing;
        return s;
    };
    auto cnt = [](std::string name, bool allow_missing = false) {
        ColumnSchema s;
        s.name = std::move(name);
        s.kind = ColumnKind::CountInteger;
        s.allow_missing = allow_missing;
        return s;
    };
    return {
        cnt("days"),
        cat("gender", {}),  // invalid-gender strings are filtered later, not rejected
        cat("age", {"[0-10)", "[10-20)", "[20-30)", "[30-40)", "[40-50)", "[50-60)",
                    "[60-70)", "[70-80)", "[80-90)", "[90-100)"}),
        cat("race", {"Caucasian", "AfricanAmerican", "Asian", "Hispanic", "Other"},
            true),
        cat("weight", {}, true),
        cnt("admit_type_id"),
        cat("metformin", {"No", "Down", "Steady", "Up"}),
        cat("insulin", {"No", "Down", "Steady", "Up"}),
        cat("readmitted", {"NO", "<30", ">30"}),
        cnt("num_procs"),
        cnt("num_meds"),
        cnt("num_ip"),
        cnt("num_diags"),
    };
}

std::vector<ColumnSchema> cleaned_study_schema() {
    std::vector<ColumnSchema> out;
    for (auto& s : study_schema()) {
        if (s.name == "weight") continue;
        if (s.name == "race") {
            s.allowed_levels =
                std::vector<std::string>{"Caucasian", "AfricanAmerican", "Other",
                                         "Missing"};
            s.allow_missing = false;
        } else if (s.name == "admit_type_id") {
            s.kind = ColumnKind::Categorical;
            s.allowed_levels = std::vector<std::string>{"1", "2", "3", "4"};
        } else if (s.name == "gender") {
            s.allowed_levels = std::vector<std::string>{"Female", "Male"};
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ColumnSchema> schema_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open schema file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("schema file '" + path + "': " + e.what());
    }
    if (!doc.is_array()) throw SchemaError("schema file must be a JSON array");
    std::vector<ColumnSchema> out;
    std::unordered_set<std::string> seen;
    for (const auto& item : doc) {
        ColumnSchema s;
        s.name = item.at("name").get<std::string>();
        std::string kind = item.at("kind").get<std::string>();
        if (kind == "count-integer")
            s.kind = ColumnKind::CountInteger;
        else if (kind == "categorical")
            s.kind = ColumnKind::Categorical;
        else
            throw SchemaError("unknown column kind '" + kind + "'");
        if (item.contains("allowed_levels") && !item["allowed_levels"].is_null())
            s.allowed_levels = item["allowed_levels"].get<std::vector<std::string>>();
        if (item.contains("allow_missing")) s.allow_missing = item["allow_missing"].get<bool>();
        if (!seen.insert(s.name).second)
            throw SchemaError("duplicate schema column '" + s.name + "'");
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace los
