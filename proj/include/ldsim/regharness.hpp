#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ldsim/dataio.hpp"

namespace ldsim {

/// One regression term: a predictor column, or the elementwise product of
/// two columns when `b` is non-empty.
struct Term {
    std::string a;
    std::string b;

    std::string label() const { return b.empty() ? a : a + ":" + b; }
};

/// A named predictor set for the RTinv response. An intercept is always
/// included implicitly.
struct ModelSpec {
    std::string name; // classical | static | dynamic
    std::vector<Term> terms;
};

struct FitResult {
    std::string model;
    std::vector<std::string> coefficient_names; // "(intercept)" first
    Eigen::VectorXd coefficients;               // aliased entries are 0
    std::vector<std::string> dropped;           // aliased columns, by label
    double rss = 0.0;
    std::size_t n = 0;
    std::size_t k = 0; // estimated parameters, incl. intercept and variance
    double aic = 0.0;
};

struct ComparisonEntry {
    std::string model;
    std::size_t n = 0;
    std::size_t k = 0;
    double aic = 0.0;
    double delta_aic = 0.0;
    double rel_likelihood = 1.0;
};

struct SubjectComparison {
    int subject = 0;
    char lexicality = 'W';
    std::vector<ComparisonEntry> entries;
};

struct AggregateSummary {
    std::size_t subjects = 0;
    std::size_t dynamic_wins = 0; // dynamic AIC strictly below static
    double mean_delta = 0.0;      // mean of (static AIC - dynamic AIC)

    double fraction_dynamic_wins() const {
        return subjects == 0 ? 0.0 : double(dynamic_wins) / double(subjects);
    }
};

/// Least squares of y on X. Aliased (rank-deficient) columns are dropped,
/// named in the result, and given zero coefficients. k counts the kept
/// columns plus the residual variance. aic = n(ln(2 pi rss/n) + 1) + 2k.
/// Requires n > k.
FitResult ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names, const std::string& model_name);

/// Builds the design matrix (intercept plus spec terms) from the table and
/// fits rtinv on it.
FitResult fit_model(const ModelSpec& spec, const PredictorTable& table);

/// Ranks fits of the same data ascending by AIC; deltas are against the
/// best fit and the relative likelihood is exp(-delta/2). All fits must
/// share n.
std::vector<ComparisonEntry> compare_models(const std::vector<FitResult>& fits);

// Default predictor sets. Word models carry the frequency terms; nonword
// models drop them (nonwords have no corpus counts). The dynamic set is
// the static set plus yes_activation, which a model without trial-by-trial
// learning cannot provide.
ModelSpec classical_spec(bool word_trials);
ModelSpec static_spec(bool word_trials);
ModelSpec dynamic_spec(bool word_trials);

/// Comparison report CSV: subject, model, n, k, aic, delta_aic,
/// rel_likelihood. Written atomically.
void write_comparisons(const std::vector<SubjectComparison>& per_subject,
                       const std::string& path);

/// Fraction of subjects whose dynamic fit beats the static fit, plus the
/// mean AIC advantage. Each comparison must contain both models.
AggregateSummary summarize(const std::vector<SubjectComparison>& per_subject);

} // namespace ldsim
