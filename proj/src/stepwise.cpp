#include "los/stepwise.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "los/design.hpp"
#include "los/errors.hpp"

namespace los {

double criterion_value(const GlmFit& fit, Criterion criterion) {
    return criterion == Criterion::Aic ? fit.aic : fit.bic;
}

std::string criterion_name(Criterion criterion) {
    return criterion == Criterion::Aic ? "AIC" : "BIC";
}

namespace {

GlmFit fit_terms(const RawTable& train, const std::vector<FactorSpec>& specs,
                 const std::vector<std::string>& terms, const std::string& response,
                 Family family, const FitOptions& opts) {
    auto [X, y] = encode(train, specs, terms, response);
    return fit(X, y, family, opts);
}

}  // namespace

SelectionTrace forward_select(const RawTable& train,
                              const std::vector<FactorSpec>& specs,
                              const std::vector<std::string>& candidates,
                              const std::string& response, Family family,
                              Criterion criterion, const SelectOptions& opts) {
    if (candidates.empty()) throw ValidationError("forward_select: no candidates");
    unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());

    SelectionTrace trace;
    std::vector<std::string> current;
    GlmFit current_fit =
        fit_terms(train, specs, current, response, family, opts.fit_options);
    double current_score = criterion_value(current_fit, criterion);

    std::vector<std::string> remaining = candidates;

    while (true) {
        SelectionStep step;
        step.current_terms = current;
        step.no_change_criterion = current_score;
        step.no_change_deviance = current_fit.deviance;
        step.candidates.resize(remaining.size());

        std::vector<GlmFit> fits(remaining.size());
        std::vector<std::string> errors(remaining.size());
        std::atomic<std::size_t> next{0};
        std::mutex warn_mutex;
        auto worker = [&]() {
            for (;;) {
                std::size_t k = next.fetch_add(1);
                if (k >= remaining.size()) return;
                CandidateEval eval;
                eval.term = remaining[k];
                std::vector<std::string> terms = current;
                terms.push_back(remaining[k]);
                try {
                    GlmFit f = fit_terms(train, specs, terms, response, family,
                                         opts.fit_options);
                    eval.df_added = static_cast<long>(f.beta.size()) -
                                    static_cast<long>(current_fit.beta.size());
                    eval.deviance = f.deviance;
                    eval.converged = f.converged;
                    eval.criterion = f.converged
                                         ? criterion_value(f, criterion)
                                         : std::numeric_limits<double>::infinity();
                    if (!f.converged) {
                        std::lock_guard<std::mutex> lock(warn_mutex);
                        trace.warnings.push_back("candidate '" + remaining[k] +
                                                 "' did not converge; scored +inf");
                    }
                    fits[k] = std::move(f);
                } catch (const Error& e) {
                    eval.converged = false;
                    eval.criterion = std::numeric_limits<double>::infinity();
                    std::lock_guard<std::mutex> lock(warn_mutex);
                    trace.warnings.push_back("candidate '" + remaining[k] +
                                             "' failed: " + e.what());
                }
                step.candidates[k] = std::move(eval);
            }
        };
        std::vector<std::thread> pool;
        unsigned nthreads = std::min<std::size_t>(jobs, remaining.size());
        for (unsigned t = 0; t + 1 < nthreads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        // Strict minimizer below the no-change score; first index wins ties.
        std::size_t best = remaining.size();
        double best_score = current_score;
        for (std::size_t k = 0; k < remaining.size(); ++k) {
            if (step.candidates[k].criterion < best_score) {
                best_score = step.candidates[k].criterion;
                best = k;
            }
        }

        if (best == remaining.size()) {
            step.chosen = std::nullopt;
            step.criterion_after = current_score;
            trace.steps.push_back(std::move(step));
            break;
        }

        step.chosen = remaining[best];
        step.criterion_after = best_score;
        current.push_back(remaining[best]);
        current_fit = std::move(fits[best]);
        current_score = best_score;
        remaining.erase(remaining.begin() + static_cast<long>(best));
        trace.steps.push_back(std::move(step));
        if (remaining.empty()) break;
    }

    trace.final_terms = current;
    trace.final_fit =
        fit_terms(train, specs, current, response, family, opts.fit_options);
    return trace;
}

namespace {

std::string formula_text(const std::string& response,
                         const std::vector<std::string>& terms) {
    std::string s = response + " ~ ";
    if (terms.empty()) return s + "1";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) s += " + ";
        s += terms[i];
    }
    return s;
}

}  // namespace

std::string format_trace_text(const SelectionTrace& trace, Criterion criterion,
                              const std::string& response) {
    const std::string crit = criterion_name(criterion);
    std::ostringstream out;
    out << std::fixed;
    for (std::size_t si = 0; si < trace.steps.size(); ++si) {
        const SelectionStep& step = trace.steps[si];
        out << (si == 0 ? "Start:  " : "Step:  ") << crit << "=" << std::setprecision(2)
            << step.no_change_criterion << "\n";
        out << formula_text(response, step.current_terms) << "\n\n";

        struct Row {
            std::string label;
            std::string df;
            double deviance;
            double criterion;
        };
        std::vector<Row> rows;
        for (const auto& c : step.candidates)
            rows.push_back({"+ " + c.term, std::to_string(c.df_added), c.deviance,
                            c.criterion});
        rows.push_back({"<none>", "", step.no_change_deviance,
                        step.no_change_criterion});
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.criterion < b.criterion; });

        std::size_t wlabel = 8;
        for (const auto& r : rows) wlabel = std::max(wlabel, r.label.size());
        out << std::left << std::setw(static_cast<int>(wlabel) + 1) << "" << std::right
            << std::setw(3) << "Df" << std::setw(10) << "Deviance" << std::setw(10)
            << crit << "\n";
        for (const auto& r : rows) {
            out << std::left << std::setw(static_cast<int>(wlabel) + 1) << r.label
                << std::right << std::setw(3) << r.df;
            if (std::isfinite(r.criterion))
                out << std::setw(10) << std::setprecision(2) << r.deviance
                    << std::setw(10) << std::setprecision(2) << r.criterion;
            else
                out << std::setw(10) << "-" << std::setw(10) << "Inf";
            out << "\n";
        }
        out << "\n";
    }
    out << "Final: " << formula_text(response, trace.final_terms) << "\n";
    return out.str();
}

std::string trace_to_json(const SelectionTrace& trace, Criterion criterion) {
    nlohmann::ordered_json doc;
    doc["criterion"] = criterion_name(criterion);
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& step : trace.steps) {
        nlohmann::ordered_json s;
        s["current_terms"] = step.current_terms;
        nlohmann::ordered_json cands = nlohmann::ordered_json::array();
        for (const auto& c : step.candidates) {
            nlohmann::ordered_json item;
            item["term"] = c.term;
            item["df_added"] = c.df_added;
            item["deviance"] = c.deviance;
            if (std::isfinite(c.criterion))
                item["criterion"] = c.criterion;
            else
                item["criterion"] = nullptr;
            item["converged"] = c.converged;
            cands.push_back(std::move(item));
        }
        s["candidates"] = std::move(cands);
        s["no_change_criterion"] = step.no_change_criterion;
        s["chosen"] = step.chosen ? nlohmann::ordered_json(*step.chosen)
                                  : nlohmann::ordered_json(nullptr);
        s["criterion_after"] = step.criterion_after;
        steps.push_back(std::move(s));
    }
    doc["steps"] = std::move(steps);
    doc["final_terms"] = trace.final_terms;
    doc["warnings"] = trace.warnings;
    return doc.dump(2) + "\n";
}

}  // namespace los
