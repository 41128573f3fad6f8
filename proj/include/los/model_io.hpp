#pragma once

#include <string>
#include <vector>

#include "los/glm.hpp"
#include "los/preprocess.hpp"

namespace los {

// A fitted model plus the term metadata needed to re-encode new data.
struct ModelDocument {
    GlmFit fit;
    std::vector<std::string> terms;        // model terms, in order
    std::vector<FactorSpec> factor_specs;  // specs for the categorical terms
    std::string response;
};

std::string model_to_json(const ModelDocument& model);
ModelDocument model_from_json(const std::string& text);

void save_model(const ModelDocument& model, const std::string& path);
ModelDocument load_model(const std::string& path);

}  // namespace los
