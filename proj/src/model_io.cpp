#include "los/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "los/errors.hpp"

namespace los {

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    if (r == 0) return {};
    const auto c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                          .get<double>();
    return m;
}

}  // namespace

std::string model_to_json(const ModelDocument& model) {
    const GlmFit& f = model.fit;
    json doc;
    doc["family"] = f.family.kind == FamilyKind::PoissonLog ? "poisson" : "gaussian";
    doc["link"] = f.family.kind == FamilyKind::PoissonLog ? "log" : "identity";
    doc["response"] = model.response;
    doc["column_names"] = f.column_names;
    json terms = json::array();
    for (const auto& t : model.terms) {
        json item;
        item["name"] = t;
        const FactorSpec* spec = nullptr;
        for (const auto& s : model.factor_specs)
            if (s.variable == t) spec = &s;
        if (spec) {
            item["kind"] = "factor";
            item["levels"] = spec->levels;
            item["reference"] = spec->reference();
        } else {
            item["kind"] = "numeric";
        }
        terms.push_back(std::move(item));
    }
    doc["terms"] = std::move(terms);
    doc["beta"] = std::vector<double>(f.beta.data(), f.beta.data() + f.beta.size());
    doc["covariance"] = matrix_to_json(f.covariance);
    doc["n"] = f.n;
    doc["deviance"] = f.deviance;
    doc["null_deviance"] = f.null_deviance;
    doc["df_null"] = f.df_null;
    doc["df_residual"] = f.df_residual;
    doc["log_likelihood"] = f.log_likelihood;
    doc["aic"] = f.aic;
    doc["bic"] = f.bic;
    doc["iterations"] = f.iterations;
    doc["converged"] = f.converged;
    return doc.dump(2) + "\n";
}

ModelDocument model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    ModelDocument model;
    std::string family = doc.at("family").get<std::string>();
    if (family == "poisson")
        model.fit.family.kind = FamilyKind::PoissonLog;
    else if (family == "gaussian")
        model.fit.family.kind = FamilyKind::GaussianIdentity;
    else
        throw SchemaError("unknown family '" + family + "'");
    model.response = doc.at("response").get<std::string>();
    model.fit.column_names = doc.at("column_names").get<std::vector<std::string>>();
    for (const auto& item : doc.at("terms")) {
        std::string name = item.at("name").get<std::string>();
        model.terms.push_back(name);
        if (item.at("kind").get<std::string>() == "factor") {
            FactorSpec s;
            s.variable = name;
            s.levels = item.at("levels").get<std::vector<std::string>>();
            model.factor_specs.push_back(std::move(s));
        }
    }
    auto beta = doc.at("beta").get<std::vector<double>>();
    model.fit.beta = Eigen::Map<Eigen::VectorXd>(beta.data(),
                                                 static_cast<Eigen::Index>(beta.size()));
    model.fit.covariance = matrix_from_json(doc.at("covariance"));
    model.fit.n = doc.at("n").get<long>();
    model.fit.deviance = doc.at("deviance").get<double>();
    model.fit.null_deviance = doc.at("null_deviance").get<double>();
    model.fit.df_null = doc.at("df_null").get<long>();
    model.fit.df_residual = doc.at("df_residual").get<long>();
    model.fit.log_likelihood = doc.at("log_likelihood").get<double>();
    model.fit.aic = doc.at("aic").get<double>();
    model.fit.bic = doc.at("bic").get<double>();
    model.fit.iterations = doc.at("iterations").get<int>();
    model.fit.converged = doc.at("converged").get<bool>();
    if (model.fit.beta.size() !=
        static_cast<Eigen::Index>(model.fit.column_names.size()))
        throw SchemaError("model JSON: beta length does not match column names");
    return model;
}

void save_model(const ModelDocument& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << model_to_json(model);
}

ModelDocument load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open model '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace los
