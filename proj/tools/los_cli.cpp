// Length-of-stay GLM pipeline: prep, eda, split, fit, select, diagnose,
// predict, and an end-to-end report command.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "los/design.hpp"
#include "los/diagnostics.hpp"
#include "los/errors.hpp"
#include "los/glm.hpp"
#include "los/model_io.hpp"
#include "los/preprocess.hpp"
#include "los/special.hpp"
#include "los/stepwise.hpp"
#include "los/table.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace los;

namespace {

constexpr std::uint64_t kDefaultSeed = 20080101;

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

void write_table_atomic(const RawTable& table, const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp";
    write_csv(table, tmp.string());
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sig7(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

std::string fixed7(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7f", v);
    return buf;
}

std::string format_p_value(double p) {
    if (p < 2e-16) return "< 2e-16";
    char buf[64];
    if (p >= 1e-4)
        std::snprintf(buf, sizeof buf, "%.6f", p);
    else
        std::snprintf(buf, sizeof buf, "%.2e", p);
    return buf;
}

std::string signif_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return " ";
}

Family parse_family(const std::string& name) {
    if (name == "poisson") return Family{FamilyKind::PoissonLog};
    if (name == "gaussian") return Family{FamilyKind::GaussianIdentity};
    throw ValidationError("unknown family '" + name + "' (poisson|gaussian)");
}

Criterion parse_criterion(const std::string& name) {
    if (name == "aic") return Criterion::Aic;
    if (name == "bic") return Criterion::Bic;
    throw ValidationError("unknown criterion '" + name + "' (aic|bic)");
}

std::vector<std::string> default_terms(const RawTable& table,
                                       const std::string& response) {
    std::vector<std::string> terms;
    for (const auto& c : table.columns())
        if (c.schema.name != response) terms.push_back(c.schema.name);
    return terms;
}

std::string coefficient_summary(const GlmFit& fit, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& mu,
                                const std::string& formula) {
    std::ostringstream out;
    out << "Call: glm(" << formula << ", family = "
        << (fit.family.kind == FamilyKind::PoissonLog ? "poisson(log)"
                                                      : "gaussian(identity)")
        << ")\n\n";
    if (!fit.converged)
        out << "WARNING: fit did not converge in " << fit.iterations
            << " iterations\n\n";

    Eigen::VectorXd dres = deviance_residuals(y, mu, fit.family);
    FiveNumber f = five_number_summary(dres);
    out << "Deviance Residuals:\n";
    out << "     Min        1Q    Median        3Q       Max\n";
    char line[256];
    std::snprintf(line, sizeof line, "%8.4f  %8.4f  %8.4f  %8.4f  %8.4f\n\n", f.min,
                  f.q1, f.median, f.q3, f.max);
    out << line;

    out << "Coefficients:\n";
    std::size_t wname = 12;
    for (const auto& n : fit.column_names) wname = std::max(wname, n.size());
    std::snprintf(line, sizeof line, "%-*s %10s %10s %8s %9s\n",
                  static_cast<int>(wname), "", "Estimate", "Std.Error", "z value",
                  "Pr(>|z|)");
    out << line;
    for (const auto& row : wald_inference(fit)) {
        std::snprintf(line, sizeof line, "%-*s %10s %10s %8.3f %9s %s\n",
                      static_cast<int>(wname), row.name.c_str(),
                      fixed7(row.estimate).c_str(), fixed7(row.std_error).c_str(),
                      row.z, format_p_value(row.p_value).c_str(),
                      signif_stars(row.p_value).c_str());
        out << line;
    }
    out << "---\n";
    out << "Signif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1\n\n";
    std::snprintf(line, sizeof line,
                  "    Null deviance: %.1f  on %ld  degrees of freedom\n",
                  fit.null_deviance, fit.df_null);
    out << line;
    std::snprintf(line, sizeof line,
                  "Residual deviance: %.1f  on %ld  degrees of freedom\n",
                  fit.deviance, fit.df_residual);
    out << line;
    out << "AIC: " << sig7(fit.aic) << "\n";
    out << "BIC: " << sig7(fit.bic) << "\n\n";
    out << "Number of Fisher Scoring iterations: " << fit.iterations << "\n";
    return out.str();
}

std::string formula_of(const std::string& response,
                       const std::vector<std::string>& terms) {
    std::string s = response + " ~ ";
    if (terms.empty()) return s + "1";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) s += " + ";
        s += terms[i];
    }
    return s;
}

// --- subcommand bodies -----------------------------------------------------

struct PrepOutputs {
    CleanResult clean;
};

PrepOutputs run_prep(const std::string& input, const fs::path& out_dir,
                     const std::string& schema_path) {
    std::vector<ColumnSchema> schema =
        schema_path.empty() ? study_schema() : schema_from_json_file(schema_path);
    std::vector<std::string> warnings;
    RawTable raw = load_csv(input, schema, {}, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    CleanResult clean = run_cleaning_recipe(raw);
    fs::create_directories(out_dir);
    write_table_atomic(clean.table, out_dir / "cleaned.csv");
    write_atomic(out_dir / "cleaning_report.json", cleaning_report_to_json(clean.report));
    write_atomic(out_dir / "factor_specs.json", factor_specs_to_json(clean.specs));
    return {std::move(clean)};
}

RawTable load_cleaned(const std::string& path, const std::string& schema_path) {
    std::vector<ColumnSchema> schema = schema_path.empty()
                                           ? cleaned_study_schema()
                                           : schema_from_json_file(schema_path);
    return load_csv(path, schema);
}

void run_eda(const RawTable& table, const fs::path& out_dir,
             const std::string& response) {
    fs::create_directories(out_dir);
    std::ostringstream text;
    json doc;
    json columns = json::array();
    text << "Descriptive statistics (" << table.n_rows() << " rows)\n\n";
    for (const auto& col : table.columns()) {
        ColumnSummary s = column_summary(table, col.schema.name);
        json jcol;
        jcol["name"] = col.schema.name;
        text << col.schema.name << ":\n";
        if (s.numeric) {
            const auto& ns = *s.numeric;
            char line[256];
            std::snprintf(line, sizeof line,
                          "  Min %.3f  1Q %.3f  Median %.3f  Mean %.3f  3Q %.3f  "
                          "Max %.3f\n",
                          ns.min, ns.q1, ns.median, ns.mean, ns.q3, ns.max);
            text << line;
            jcol["kind"] = "numeric";
            jcol["min"] = ns.min;
            jcol["q1"] = ns.q1;
            jcol["median"] = ns.median;
            jcol["mean"] = ns.mean;
            jcol["q3"] = ns.q3;
            jcol["max"] = ns.max;
        } else {
            json levels = json::array();
            for (const auto& [level, n] : *s.levels) {
                char line[256];
                std::snprintf(line, sizeof line, "  %-16s %8zu\n", level.c_str(), n);
                text << line;
                levels.push_back({{"level", level}, {"count", n}});
            }
            jcol["kind"] = "categorical";
            jcol["levels"] = std::move(levels);
        }
        columns.push_back(std::move(jcol));
        text << "\n";
    }
    doc["columns"] = std::move(columns);

    // Group tables of the response by each factor.
    json groups = json::array();
    text << "Group means of " << response << ":\n";
    for (const auto& col : table.columns()) {
        if (col.schema.kind != ColumnKind::Categorical) continue;
        json g;
        g["by"] = col.schema.name;
        json rows = json::array();
        text << "  by " << col.schema.name << ":\n";
        for (const auto& [level, st] : group_means(table, col.schema.name, response)) {
            char line[256];
            std::snprintf(line, sizeof line, "    %-16s mean %6.2f  median %5.1f  n %6zu\n",
                          level.c_str(), st.mean, st.median, st.n);
            text << line;
            rows.push_back({{"level", level},
                            {"mean", st.mean},
                            {"median", st.median},
                            {"n", st.n}});
        }
        g["rows"] = std::move(rows);
        groups.push_back(std::move(g));
    }
    doc["group_means"] = std::move(groups);

    // Correlation matrix of numeric columns.
    std::vector<std::string> numeric_names;
    std::vector<Eigen::VectorXd> numeric_vals;
    for (const auto& col : table.columns()) {
        if (col.schema.kind != ColumnKind::CountInteger) continue;
        Eigen::VectorXd v(static_cast<Eigen::Index>(col.ints.size()));
        for (std::size_t i = 0; i < col.ints.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = static_cast<double>(col.ints[i]);
        numeric_names.push_back(col.schema.name);
        numeric_vals.push_back(std::move(v));
    }
    json corr;
    corr["names"] = numeric_names;
    json cm = json::array();
    std::ostringstream ccsv;
    ccsv << "variable";
    for (const auto& n : numeric_names) ccsv << ',' << n;
    ccsv << '\n';
    for (std::size_t i = 0; i < numeric_names.size(); ++i) {
        json row = json::array();
        ccsv << numeric_names[i];
        for (std::size_t j = 0; j < numeric_names.size(); ++j) {
            double c = (i == j) ? 1.0 : correlation(numeric_vals[i], numeric_vals[j]);
            row.push_back(c);
            ccsv << ',' << sig7(c);
        }
        ccsv << '\n';
        cm.push_back(std::move(row));
    }
    corr["matrix"] = std::move(cm);
    doc["correlation"] = std::move(corr);

    write_atomic(out_dir / "eda.txt", text.str());
    write_atomic(out_dir / "eda.json", doc.dump(2) + "\n");
    write_atomic(out_dir / "correlation.csv", ccsv.str());
}

ModelDocument fit_model(const RawTable& train, const std::vector<FactorSpec>& specs,
                        const std::vector<std::string>& terms,
                        const std::string& response, Family family,
                        const FitOptions& opts) {
    auto [X, y] = encode(train, specs, terms, response);
    ModelDocument model;
    model.fit = fit(X, y, family, opts);
    model.terms = terms;
    model.response = response;
    for (const auto& t : terms)
        for (const auto& s : specs)
            if (s.variable == t) model.factor_specs.push_back(s);
    return model;
}

void write_fit_outputs(const ModelDocument& model, const RawTable& train,
                       const fs::path& out_dir, const std::string& stem) {
    fs::create_directories(out_dir);
    auto [X, y] = encode(train, model.factor_specs, model.terms, model.response);
    Eigen::VectorXd mu = predict(model.fit, X);
    write_atomic(out_dir / (stem + ".json"), model_to_json(model));
    write_atomic(out_dir / (stem + "_summary.txt"),
                 coefficient_summary(model.fit, y, mu,
                                     formula_of(model.response, model.terms)));
}

void run_diagnose(const ModelDocument& model, const RawTable& data,
                  const fs::path& out_dir) {
    fs::create_directories(out_dir);
    auto [X, y] = encode(data, model.factor_specs, model.terms, model.response);
    Eigen::VectorXd mu = predict(model.fit, X);

    MetricsReport metrics = fit_metrics(y, mu);
    PearsonReport pearson =
        pearson_report(y, mu, model.fit.family,
                       static_cast<long>(y.size()) -
                           static_cast<long>(model.fit.beta.size()));
    Eigen::VectorXd dres = deviance_residuals(y, mu, model.fit.family);
    auto [qq_theoretical, qq_sample] = qq_data(dres);
    FiveNumber fns = five_number_summary(dres);

    json doc;
    doc["n"] = metrics.n;
    doc["mae"] = metrics.mae;
    doc["rmse"] = metrics.rmse;
    doc["r_squared"] =
        metrics.r_squared ? json(*metrics.r_squared) : json(nullptr);
    doc["pearson_per_observation"] = pearson.per_observation;
    doc["pearson_sum"] = pearson.sum;
    doc["pearson_per_df"] = pearson.per_df;
    doc["deviance"] = deviance(y, mu, model.fit.family);
    doc["deviance_residual_summary"] = {{"min", fns.min},
                                        {"q1", fns.q1},
                                        {"median", fns.median},
                                        {"q3", fns.q3},
                                        {"max", fns.max}};
    write_atomic(out_dir / "report.json", doc.dump(2) + "\n");

    std::ostringstream rvf;
    rvf << "fitted,residual\n";
    rvf.precision(17);
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        rvf << mu(i) << ',' << dres(i) << '\n';
    write_atomic(out_dir / "residuals_vs_fitted.csv", rvf.str());

    std::ostringstream qq;
    qq << "theoretical,sample\n";
    qq.precision(17);
    for (Eigen::Index i = 0; i < qq_sample.size(); ++i)
        qq << qq_theoretical(i) << ',' << qq_sample(i) << '\n';
    write_atomic(out_dir / "qq.csv", qq.str());

    std::ostringstream preds;
    preds << "row_id,y,mu\n";
    preds.precision(17);
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        preds << i << ',' << y(i) << ',' << mu(i) << '\n';
    write_atomic(out_dir / "preds.csv", preds.str());
}

void run_predict(const ModelDocument& model, const RawTable& newdata,
                 const fs::path& out_path, bool explain) {
    // Predicting needs no response values; synthesize a zero response column
    // when the new data lacks one.
    RawTable data = newdata;
    if (!data.has_column(model.response)) {
        Column resp;
        resp.schema.name = model.response;
        resp.schema.kind = ColumnKind::CountInteger;
        resp.ints.assign(data.n_rows(), 0);
        resp.missing.assign(data.n_rows(), 0);
        data.add_column(std::move(resp));
    }
    auto [X, y] = encode(data, model.factor_specs, model.terms, model.response);
    Eigen::VectorXd mu = predict(model.fit, X);

    std::ostringstream out;
    out << "row_id,mu";
    if (explain) {
        for (std::size_t j = 1; j < model.fit.column_names.size(); ++j)
            out << ",factor_" << model.fit.column_names[j];
    }
    out << '\n';
    out.precision(17);
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        out << i << ',' << mu(i);
        if (explain) {
            for (Eigen::Index j = 1; j < model.fit.beta.size(); ++j)
                out << ',' << std::exp(model.fit.beta(j) * X.values(i, j));
        }
        out << '\n';
    }
    write_atomic(out_path, out.str());
}

// Merge a JSON config file under explicitly passed CLI flags.
struct ConfigFile {
    json doc;
    bool loaded = false;

    void load(const std::string& path) {
        if (path.empty()) return;
        try {
            doc = json::parse(read_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("config '" + path + "': " + e.what());
        }
        loaded = true;
    }

    template <typename T>
    void apply(const CLI::Option* opt, const std::string& key, T& value) const {
        if (!loaded || opt->count() > 0) return;
        if (doc.contains(key)) value = doc[key].get<T>();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hospital length-of-stay GLM pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override");

    // Shared option storage.
    std::string input, out_dir = "out", schema_path, model_path, data_path,
                response = "days", family_name = "poisson", criterion_name_s = "bic",
                terms_csv, out_path = "predictions.csv";
    std::uint64_t seed = kDefaultSeed;
    double train_fraction = 0.7, tolerance = 1e-8;
    std::size_t train_size = 0;
    int max_iterations = 25;
    unsigned jobs = 0;
    bool explain = false;

    auto* prep = app.add_subcommand("prep", "Clean a raw encounter CSV");
    auto* prep_in = prep->add_option("--input", input)->required();
    auto* prep_out = prep->add_option("--out-dir", out_dir);
    prep->add_option("--schema", schema_path, "schema JSON override");

    auto* eda = app.add_subcommand("eda", "Descriptive statistics of a cleaned CSV");
    auto* eda_in = eda->add_option("--input", input)->required();
    auto* eda_out = eda->add_option("--out-dir", out_dir);
    eda->add_option("--schema", schema_path);
    eda->add_option("--response", response);

    auto* split_cmd = app.add_subcommand("split", "Seeded train/test split");
    auto* split_in = split_cmd->add_option("--input", input)->required();
    auto* split_out = split_cmd->add_option("--out-dir", out_dir);
    split_cmd->add_option("--schema", schema_path);
    auto* split_seed = split_cmd->add_option("--seed", seed);
    auto* split_frac = split_cmd->add_option("--train-fraction", train_fraction);
    auto* split_size = split_cmd->add_option("--train-size", train_size);

    auto* fit_cmd = app.add_subcommand("fit", "Fit a GLM on a training CSV");
    auto* fit_in = fit_cmd->add_option("--train", input)->required();
    std::string specs_path;
    fit_cmd->add_option("--specs", specs_path, "factor_specs.json from prep");
    auto* fit_out = fit_cmd->add_option("--out-dir", out_dir);
    fit_cmd->add_option("--schema", schema_path);
    auto* fit_terms = fit_cmd->add_option("--terms", terms_csv, "comma-separated; default all");
    auto* fit_resp = fit_cmd->add_option("--response", response);
    auto* fit_family = fit_cmd->add_option("--family", family_name);
    fit_cmd->add_option("--max-iterations", max_iterations);
    fit_cmd->add_option("--tolerance", tolerance);

    auto* select_cmd = app.add_subcommand("select", "Forward stepwise selection");
    auto* sel_in = select_cmd->add_option("--train", input)->required();
    select_cmd->add_option("--specs", specs_path);
    auto* sel_out = select_cmd->add_option("--out-dir", out_dir);
    select_cmd->add_option("--schema", schema_path);
    auto* sel_crit = select_cmd->add_option("--criterion", criterion_name_s);
    auto* sel_resp = select_cmd->add_option("--response", response);
    auto* sel_family = select_cmd->add_option("--family", family_name);
    auto* sel_terms = select_cmd->add_option("--candidates", terms_csv);
    select_cmd->add_option("--jobs", jobs);

    auto* diag_cmd = app.add_subcommand("diagnose", "Held-out metrics and plot data");
    auto* diag_model = diag_cmd->add_option("--model", model_path)->required();
    auto* diag_data = diag_cmd->add_option("--data", data_path)->required();
    auto* diag_out = diag_cmd->add_option("--out-dir", out_dir);
    diag_cmd->add_option("--schema", schema_path);

    auto* pred_cmd = app.add_subcommand("predict", "Predict mean stay for new data");
    auto* pred_model = pred_cmd->add_option("--model", model_path)->required();
    auto* pred_data = pred_cmd->add_option("--newdata", data_path)->required();
    auto* pred_out = pred_cmd->add_option("--out", out_path);
    pred_cmd->add_option("--schema", schema_path);
    pred_cmd->add_flag("--explain", explain, "emit per-term multiplicative factors");

    auto* report_cmd = app.add_subcommand("report", "Full pipeline end to end");
    auto* rep_in = report_cmd->add_option("--input", input)->required();
    auto* rep_out = report_cmd->add_option("--out-dir", out_dir);
    report_cmd->add_option("--schema", schema_path);
    auto* rep_seed = report_cmd->add_option("--seed", seed);
    auto* rep_frac = report_cmd->add_option("--train-fraction", train_fraction);
    auto* rep_size = report_cmd->add_option("--train-size", train_size);
    auto* rep_crit = report_cmd->add_option("--criterion", criterion_name_s);
    report_cmd->add_option("--jobs", jobs);

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ConfigFile config;
        config.load(config_path);
        config.apply(prep_out, "out_dir", out_dir);
        config.apply(eda_out, "out_dir", out_dir);
        config.apply(split_out, "out_dir", out_dir);
        config.apply(fit_out, "out_dir", out_dir);
        config.apply(sel_out, "out_dir", out_dir);
        config.apply(diag_out, "out_dir", out_dir);
        config.apply(rep_out, "out_dir", out_dir);
        config.apply(split_seed, "seed", seed);
        config.apply(rep_seed, "seed", seed);
        config.apply(split_frac, "train_fraction", train_fraction);
        config.apply(rep_frac, "train_fraction", train_fraction);
        config.apply(split_size, "train_size", train_size);
        config.apply(rep_size, "train_size", train_size);
        config.apply(sel_crit, "criterion", criterion_name_s);
        config.apply(rep_crit, "criterion", criterion_name_s);
        config.apply(fit_family, "family", family_name);
        config.apply(sel_family, "family", family_name);
        config.apply(fit_resp, "response", response);
        config.apply(sel_resp, "response", response);
        config.apply(fit_terms, "terms", terms_csv);
        config.apply(sel_terms, "terms", terms_csv);
        if (config.loaded) {
            config.apply(prep_in, "input", input);
            config.apply(eda_in, "input", input);
            config.apply(split_in, "input", input);
            config.apply(fit_in, "input", input);
            config.apply(sel_in, "input", input);
            config.apply(rep_in, "input", input);
            config.apply(diag_model, "model", model_path);
            config.apply(pred_model, "model", model_path);
            config.apply(diag_data, "data", data_path);
            config.apply(pred_data, "newdata", data_path);
            config.apply(pred_out, "out", out_path);
        }
        if (response == "days" && config.loaded && config.doc.contains("response"))
            response = config.doc["response"].get<std::string>();

        auto parse_terms = [&](const RawTable& table) {
            std::vector<std::string> terms;
            if (terms_csv.empty()) return default_terms(table, response);
            std::stringstream ss(terms_csv);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) terms.push_back(item);
                if (item == response)
                    throw ValidationError("response cannot appear in terms");
            }
            return terms;
        };
        auto load_specs = [&](const RawTable& table) {
            return specs_path.empty() ? build_factor_specs(table)
                                      : factor_specs_from_json(read_file(specs_path));
        };

        if (*prep) {
            PrepOutputs out = run_prep(input, out_dir, schema_path);
            std::cout << "rows_in=" << out.clean.report.rows_in
                      << " removed_gender=" << out.clean.report.rows_removed_gender
                      << " rows_out=" << out.clean.report.rows_out << "\n";
        } else if (*eda) {
            RawTable table = load_cleaned(input, schema_path);
            run_eda(table, out_dir, response);
        } else if (*split_cmd) {
            RawTable table = load_cleaned(input, schema_path);
            SplitSpec spec{train_fraction, seed, train_size};
            auto [train, test] = split(table, spec);
            fs::create_directories(out_dir);
            write_table_atomic(train, fs::path(out_dir) / "train.csv");
            write_table_atomic(test, fs::path(out_dir) / "test.csv");
            std::cout << "train=" << train.n_rows() << " test=" << test.n_rows()
                      << "\n";
        } else if (*fit_cmd) {
            RawTable train = load_cleaned(input, schema_path);
            auto specs = load_specs(train);
            auto terms = parse_terms(train);
            ModelDocument model = fit_model(train, specs, terms, response,
                                            parse_family(family_name),
                                            FitOptions{max_iterations, tolerance});
            write_fit_outputs(model, train, out_dir, "model");
            if (!model.fit.converged)
                std::cerr << "warning: fit did not converge\n";
        } else if (*select_cmd) {
            RawTable train = load_cleaned(input, schema_path);
            auto specs = load_specs(train);
            auto candidates = parse_terms(train);
            Criterion crit = parse_criterion(criterion_name_s);
            SelectOptions sopts;
            sopts.jobs = jobs;
            SelectionTrace trace = forward_select(train, specs, candidates, response,
                                                  parse_family(family_name), crit,
                                                  sopts);
            fs::create_directories(out_dir);
            write_atomic(fs::path(out_dir) / "trace.txt",
                         format_trace_text(trace, crit, response));
            write_atomic(fs::path(out_dir) / "trace.json", trace_to_json(trace, crit));
            ModelDocument model;
            model.fit = trace.final_fit;
            model.terms = trace.final_terms;
            model.response = response;
            for (const auto& t : trace.final_terms)
                for (const auto& s : specs)
                    if (s.variable == t) model.factor_specs.push_back(s);
            write_fit_outputs(model, train, out_dir, "selected_model");
            for (const auto& w : trace.warnings) std::cerr << "warning: " << w << "\n";
        } else if (*diag_cmd) {
            ModelDocument model = load_model(model_path);
            RawTable data = load_cleaned(data_path, schema_path);
            run_diagnose(model, data, out_dir);
        } else if (*pred_cmd) {
            ModelDocument model = load_model(model_path);
            RawTable data = load_cleaned(data_path, schema_path);
            run_predict(model, data, out_path, explain);
        } else if (*report_cmd) {
            fs::path root(out_dir);
            PrepOutputs prep_out_res = run_prep(input, root, schema_path);
            const RawTable& cleaned = prep_out_res.clean.table;
            const auto& specs = prep_out_res.clean.specs;
            run_eda(cleaned, root, response);
            SplitSpec sspec{train_fraction, seed, train_size};
            auto [train, test] = split(cleaned, sspec);
            write_table_atomic(train, root / "train.csv");
            write_table_atomic(test, root / "test.csv");

            auto terms = default_terms(cleaned, response);
            Family family = parse_family(family_name);
            ModelDocument full = fit_model(train, specs, terms, response, family, {});
            write_fit_outputs(full, train, root, "full_model");

            Criterion crit = parse_criterion(criterion_name_s);
            SelectOptions sopts;
            sopts.jobs = jobs;
            SelectionTrace trace =
                forward_select(train, specs, terms, response, family, crit, sopts);
            write_atomic(root / "trace.txt", format_trace_text(trace, crit, response));
            write_atomic(root / "trace.json", trace_to_json(trace, crit));
            ModelDocument selected;
            selected.fit = trace.final_fit;
            selected.terms = trace.final_terms;
            selected.response = response;
            for (const auto& t : trace.final_terms)
                for (const auto& s : specs)
                    if (s.variable == t) selected.factor_specs.push_back(s);
            write_fit_outputs(selected, train, root, "selected_model");

            run_diagnose(full, test, root / "diagnostics_full");
            run_diagnose(selected, test, root / "diagnostics_selected");
            std::cout << "report written to " << root.string() << "\n";
        }
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
