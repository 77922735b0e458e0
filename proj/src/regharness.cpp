#include "ldsim/regharness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/textio.hpp"

namespace ldsim {

FitResult ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names, const std::string& model_name) {
    if (X.rows() != y.size()) throw DimensionError("design matrix and response disagree on rows");
    if (static_cast<Eigen::Index>(names.size()) != X.cols())
        throw DimensionError("one name per design column required");
    if (X.rows() == 0) throw EmptyInputError("cannot fit on zero rows");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::Index rank = qr.rank();

    FitResult fit;
    fit.model = model_name;
    fit.coefficient_names = names;
    fit.coefficients = Eigen::VectorXd::Zero(X.cols());
    fit.n = static_cast<std::size_t>(X.rows());
    fit.k = static_cast<std::size_t>(rank) + 1; // + residual variance

    if (rank == X.cols()) {
        fit.coefficients = qr.solve(y);
    } else {
        // Keep the pivoted leading columns, refit on them, and report the rest.
        const auto& perm = qr.colsPermutation().indices();
        std::vector<Eigen::Index> kept(perm.data(), perm.data() + rank);
        std::sort(kept.begin(), kept.end());
        std::vector<bool> is_kept(static_cast<std::size_t>(X.cols()), false);
        for (Eigen::Index c : kept) is_kept[static_cast<std::size_t>(c)] = true;
        for (Eigen::Index c = 0; c < X.cols(); ++c)
            if (!is_kept[static_cast<std::size_t>(c)])
                fit.dropped.push_back(names[static_cast<std::size_t>(c)]);

        Eigen::MatrixXd Xk(X.rows(), rank);
        for (Eigen::Index j = 0; j < rank; ++j) Xk.col(j) = X.col(kept[static_cast<std::size_t>(j)]);
        Eigen::VectorXd beta = Xk.householderQr().solve(y);
        for (Eigen::Index j = 0; j < rank; ++j)
            fit.coefficients[kept[static_cast<std::size_t>(j)]] = beta[j];
    }

    if (fit.n <= fit.k)
        throw Error("too few rows (" + std::to_string(fit.n) + ") for " +
                    std::to_string(fit.k) + " parameters in model " + model_name);

    fit.rss = (y - X * fit.coefficients).squaredNorm();
    const double n = static_cast<double>(fit.n);
    fit.aic = n * (std::log(2.0 * std::numbers::pi * fit.rss / n) + 1.0) +
              2.0 * static_cast<double>(fit.k);
    return fit;
}

FitResult fit_model(const ModelSpec& spec, const PredictorTable& table) {
    const auto n = static_cast<Eigen::Index>(table.row_count());
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(spec.terms.size()) + 1);
    std::vector<std::string> names;
    names.reserve(spec.terms.size() + 1);
    X.col(0).setOnes();
    names.push_back("(intercept)");
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
        const Term& term = spec.terms[t];
        Eigen::VectorXd col = table.column(term.a);
        if (!term.b.empty()) col = col.cwiseProduct(table.column(term.b));
        X.col(static_cast<Eigen::Index>(t) + 1) = col;
        names.push_back(term.label());
    }
    return ols_fit(X, table.column("rtinv"), names, spec.name);
}

std::vector<ComparisonEntry> compare_models(const std::vector<FitResult>& fits) {
    if (fits.empty()) throw EmptyInputError("no fits to compare");
    for (const FitResult& f : fits)
        if (f.n != fits.front().n)
            throw Error("fits cover different row counts: " + std::to_string(f.n) + " vs " +
                        std::to_string(fits.front().n));

    std::vector<ComparisonEntry> entries;
    entries.reserve(fits.size());
    for (const FitResult& f : fits)
        entries.push_back(ComparisonEntry{f.model, f.n, f.k, f.aic, 0.0, 1.0});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ComparisonEntry& a, const ComparisonEntry& b) {
                         return a.aic != b.aic ? a.aic < b.aic : a.model < b.model;
                     });
    const double best = entries.front().aic;
    for (ComparisonEntry& e : entries) {
        e.delta_aic = e.aic - best;
        e.rel_likelihood = std::exp(-e.delta_aic / 2.0);
    }
    return entries;
}

namespace {

std::vector<Term> classical_terms(bool word_trials) {
    std::vector<Term> terms = {{"trial_z", ""}, {"word_length", ""},
                               {"log_neighborhood_size", ""}, {"has_neighbours", ""}};
    if (word_trials) {
        terms.push_back({"log_frequency", ""});
        terms.push_back({"in_bnc", ""});
    }
    return terms;
}

} // namespace

ModelSpec classical_spec(bool word_trials) {
    return ModelSpec{"classical", classical_terms(word_trials)};
}

ModelSpec static_spec(bool word_trials) {
    ModelSpec spec{"static", classical_terms(word_trials)};
    spec.terms.push_back({"log_semantic_density", ""});
    spec.terms.push_back({"log_shortest_path", ""});
    spec.terms.push_back({"has_neighbours_path", ""});
    spec.terms.push_back({"c_precision", ""});
    spec.terms.push_back({"log_l1chat", ""});
    return spec;
}

ModelSpec dynamic_spec(bool word_trials) {
    ModelSpec spec = static_spec(word_trials);
    spec.name = "dynamic";
    spec.terms.push_back({"yes_activation", ""});
    return spec;
}

void write_comparisons(const std::vector<SubjectComparison>& per_subject,
                       const std::string& path) {
    std::ostringstream out;
    out << "subject,model,n,k,aic,delta_aic,rel_likelihood\n";
    for (const SubjectComparison& sc : per_subject)
        for (const ComparisonEntry& e : sc.entries)
            out << sc.subject << ',' << e.model << ',' << e.n << ',' << e.k << ','
                << detail::fmt12(e.aic) << ',' << detail::fmt12(e.delta_aic) << ','
                << detail::fmt12(e.rel_likelihood) << '\n';
    detail::write_text_atomic(path, out.str());
}

AggregateSummary summarize(const std::vector<SubjectComparison>& per_subject) {
    AggregateSummary agg;
    double delta_sum = 0.0;
    for (const SubjectComparison& sc : per_subject) {
        const ComparisonEntry* stat = nullptr;
        const ComparisonEntry* dyn = nullptr;
        for (const ComparisonEntry& e : sc.entries) {
            if (e.model == "static") stat = &e;
            if (e.model == "dynamic") dyn = &e;
        }
        if (!stat || !dyn)
            throw Error("comparison for subject " + std::to_string(sc.subject) +
                        " lacks a static or dynamic fit");
        ++agg.subjects;
        if (dyn->aic < stat->aic) ++agg.dynamic_wins;
        delta_sum += stat->aic - dyn->aic;
    }
    agg.mean_delta = agg.subjects == 0 ? 0.0 : delta_sum / double(agg.subjects);
    return agg;
}

} // namespace ldsim
