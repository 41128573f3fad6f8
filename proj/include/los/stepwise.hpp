#pragma once

#include <optional>
#include <string>
#include <vector>

#include "los/glm.hpp"
#include "los/preprocess.hpp"
#include "los/table.hpp"

namespace los {

enum class Criterion { Aic, Bic };

double criterion_value(const GlmFit& fit, Criterion criterion);

std::string criterion_name(Criterion criterion);

struct CandidateEval {
    std::string term;
    long df_added = 0;
    double deviance = 0.0;
    double criterion = 0.0;
    bool converged = true;
};

struct SelectionStep {
    std::vector<std::string> current_terms;
    std::vector<CandidateEval> candidates;  // candidate-list order
    double no_change_criterion = 0.0;
    double no_change_deviance = 0.0;
    std::optional<std::string> chosen;  // nullopt = stop
    double criterion_after = 0.0;
};

struct SelectionTrace {
    std::vector<SelectionStep> steps;
    std::vector<std::string> final_terms;
    GlmFit final_fit;
    std::vector<std::string> warnings;
};

struct SelectOptions {
    unsigned jobs = 0;  // 0 = hardware concurrency
    FitOptions fit_options;
};

// Greedy forward selection over whole terms, starting from the intercept-only
// model. A term is added only on strict criterion improvement; ties break by
// position in `candidates`. Candidate fits within a step run concurrently.
SelectionTrace forward_select(const RawTable& train,
                              const std::vector<FactorSpec>& specs,
                              const std::vector<std::string>& candidates,
                              const std::string& response, Family family,
                              Criterion criterion, const SelectOptions& opts = {});

// Appendix-style plain-text rendering: per step, candidates sorted by
// criterion with the no-change row interleaved, values rounded to 2 decimals.
std::string format_trace_text(const SelectionTrace& trace, Criterion criterion,
                              const std::string& response);

std::string trace_to_json(const SelectionTrace& trace, Criterion criterion);

}  // namespace los
