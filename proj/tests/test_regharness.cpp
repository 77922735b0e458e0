#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "ldsim/regharness.hpp"
#include "helpers.hpp"

using namespace ldsim;

namespace {

std::vector<std::string> term_labels(const ModelSpec& spec) {
    std::vector<std::string> out;
    for (const Term& t : spec.terms) out.push_back(t.label());
    return out;
}

// Plausible word-trial measures with a tunable yes_activation effect on rt.
MeasureRow synth_row(testutil::Rng& rng, std::uint64_t order, double yes_gamma) {
    MeasureRow r;
    r.subject = 1;
    r.order = order;
    r.block = 1;
    r.session = 1;
    r.stimulus = "w" + std::to_string(order);
    r.lexicality = 'W';
    r.response = rng.uniform() < 0.9 ? 'W' : 'N';
    r.semantic_density = 0.3 + 0.1 * std::abs(rng.gauss());
    r.shortest_path = (order % 5 == 0) ? 0.0 : 1.0 + std::abs(rng.gauss());
    r.has_neighbours_path = r.shortest_path > 0.0;
    r.c_precision = 0.5 + 0.1 * rng.gauss();
    r.l1chat = 5.0 + std::abs(rng.gauss());
    r.yes_activation = 0.5 * rng.gauss();
    r.word_length = 3 + int(order % 4);
    r.frequency = (order % 7 == 0) ? 0.0 : 50.0 + 10.0 * std::abs(rng.gauss());
    r.in_bnc = r.frequency > 0.0;
    r.neighborhood_size = int(order % 3);
    double target = -2.0 + 0.2 * rng.gauss() + yes_gamma * r.yes_activation;
    target = std::clamp(target, -9.9, -0.51);
    r.rt_ms = -1000.0 / target;
    return r;
}

std::vector<MeasureRow> synth_rows(std::uint64_t seed, std::size_t n, double yes_gamma) {
    testutil::Rng rng(seed);
    std::vector<MeasureRow> rows;
    for (std::size_t i = 1; i <= n; ++i) rows.push_back(synth_row(rng, i, yes_gamma));
    return rows;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("ols recovers exact linear structure") {
    testutil::Rng rng(353);
    const Eigen::MatrixXd X = testutil::random_matrix(rng, 30, 4);
    Eigen::VectorXd beta(4);
    beta << 2.0, -1.5, 0.25, 3.0;
    const Eigen::VectorXd y = X * beta;
    const FitResult fit = ols_fit(X, y, {"a", "b", "c", "d"}, "exact");
    CHECK((fit.coefficients - beta).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(fit.rss <= 1e-16 * y.squaredNorm());
    CHECK(fit.dropped.empty());
    CHECK(fit.k == 5);
    CHECK(fit.n == 30);
}

TEST_CASE("intercept-only fit is the mean, with the textbook aic") {
    testutil::Rng rng(359);
    const Eigen::VectorXd y = testutil::random_vector(rng, 25);
    const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(25, 1);
    const FitResult fit = ols_fit(X, y, {"(intercept)"}, "mean");
    CHECK(fit.coefficients[0] == doctest::Approx(y.mean()).epsilon(1e-12));

    const double rss = (y.array() - y.mean()).square().sum();
    CHECK(fit.rss == doctest::Approx(rss).epsilon(1e-12));
    CHECK(fit.k == 2); // intercept + residual variance
    const double n = 25.0;
    const double aic = n * (std::log(2.0 * std::numbers::pi * rss / n) + 1.0) + 2.0 * 2.0;
    CHECK(fit.aic == doctest::Approx(aic).epsilon(1e-12));
}

TEST_CASE("ols agrees with the normal equations") {
    testutil::Rng rng(367);
    const Eigen::MatrixXd X = testutil::random_matrix(rng, 12, 3);
    const Eigen::VectorXd y = testutil::random_vector(rng, 12);
    const Eigen::VectorXd beta = (X.transpose() * X).inverse() * (X.transpose() * y);
    const FitResult fit = ols_fit(X, y, {"a", "b", "c"}, "ne");
    CHECK((fit.coefficients - beta).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(fit.rss == doctest::Approx((y - X * beta).squaredNorm()).epsilon(1e-9));
}

TEST_CASE("aliased columns are dropped without hurting the fit") {
    testutil::Rng rng(373);
    Eigen::MatrixXd X(40, 4);
    X.col(0).setOnes();
    X.col(1) = testutil::random_vector(rng, 40);
    X.col(2) = testutil::random_vector(rng, 40);
    X.col(3) = X.col(1) + X.col(2); // perfectly collinear
    const Eigen::VectorXd y = testutil::random_vector(rng, 40);

    const FitResult fit = ols_fit(X, y, {"(intercept)", "a", "b", "a_plus_b"}, "aliased");
    REQUIRE(fit.dropped.size() == 1);
    CHECK(fit.k == 4); // rank 3 + variance
    // the dropped coefficient is pinned to zero
    for (std::size_t c = 0; c < fit.coefficient_names.size(); ++c)
        if (fit.coefficient_names[c] == fit.dropped.front())
            CHECK(fit.coefficients[Eigen::Index(c)] == 0.0);

    const FitResult clean =
        ols_fit(X.leftCols(3), y, {"(intercept)", "a", "b"}, "clean");
    CHECK(fit.rss == doctest::Approx(clean.rss).epsilon(1e-9));
    CHECK(fit.k == clean.k);

    Eigen::MatrixXd Xdup(40, 2);
    Xdup.col(0) = X.col(1);
    Xdup.col(1) = X.col(1);
    const FitResult dup = ols_fit(Xdup, y, {"x", "x_again"}, "dup");
    CHECK(dup.dropped.size() == 1);
    CHECK(dup.rss ==
          doctest::Approx(ols_fit(Xdup.leftCols(1), y, {"x"}, "one").rss).epsilon(1e-9));
}

TEST_CASE("an uninformative extra column costs exactly two aic points") {
    testutil::Rng rng(379);
    const Eigen::Index n = 50;
    Eigen::MatrixXd Xa(n, 2);
    Xa.col(0).setOnes();
    Xa.col(1) = testutil::random_vector(rng, n);
    Eigen::VectorXd y = testutil::random_vector(rng, n);

    // Extra column orthogonal to the design and the response: its least
    // squares weight is zero, so only the parameter count changes. Project
    // against an orthonormal basis of span{1, x, y} so all three
    // orthogonalities hold simultaneously.
    Eigen::VectorXd z = testutil::random_vector(rng, n);
    Eigen::MatrixXd span(n, 3);
    span << Xa, y;
    const Eigen::MatrixXd Q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(span).householderQ() *
        Eigen::MatrixXd::Identity(n, 3);
    z -= Q * (Q.transpose() * z);

    Eigen::MatrixXd Xb(n, 3);
    Xb << Xa, z;
    const FitResult small = ols_fit(Xa, y, {"(intercept)", "x"}, "small");
    const FitResult big = ols_fit(Xb, y, {"(intercept)", "x", "noise"}, "big");
    CHECK(big.rss == doctest::Approx(small.rss).epsilon(1e-9));
    CHECK(big.aic - small.aic == doctest::Approx(2.0).epsilon(1e-9));

    const auto ranked = compare_models({small, big});
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].model == "small");
    CHECK(ranked[0].delta_aic == 0.0);
    CHECK(ranked[0].rel_likelihood == 1.0);
    CHECK(ranked[1].delta_aic == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ranked[1].rel_likelihood == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("fits are invariant to response shifts and equivariant to scale") {
    testutil::Rng rng(383);
    Eigen::MatrixXd X(30, 3);
    X.col(0).setOnes();
    X.col(1) = testutil::random_vector(rng, 30);
    X.col(2) = testutil::random_vector(rng, 30);
    const Eigen::VectorXd y = testutil::random_vector(rng, 30);
    const std::vector<std::string> names = {"(intercept)", "a", "b"};

    const FitResult base = ols_fit(X, y, names, "m");
    const FitResult shifted = ols_fit(X, (y.array() + 11.0).matrix(), names, "m");
    CHECK(shifted.coefficients[1] == doctest::Approx(base.coefficients[1]).epsilon(1e-9));
    CHECK(shifted.coefficients[2] == doctest::Approx(base.coefficients[2]).epsilon(1e-9));
    CHECK(shifted.coefficients[0] == doctest::Approx(base.coefficients[0] + 11.0).epsilon(1e-9));
    CHECK(shifted.rss == doctest::Approx(base.rss).epsilon(1e-8));

    const FitResult scaled = ols_fit(X, (3.0 * y).eval(), names, "m");
    CHECK((scaled.coefficients - 3.0 * base.coefficients).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(scaled.rss == doctest::Approx(9.0 * base.rss).epsilon(1e-8));
}

TEST_CASE("degenerate fit inputs are rejected") {
    testutil::Rng rng(389);
    const Eigen::MatrixXd X = testutil::random_matrix(rng, 4, 4);
    const Eigen::VectorXd y = testutil::random_vector(rng, 4);
    // k = 4 coefficients + variance = 5 > n = 4
    CHECK_THROWS_AS(ols_fit(X, y, {"a", "b", "c", "d"}, "overfull"), Error);
    CHECK_THROWS_AS(ols_fit(X, testutil::random_vector(rng, 5), {"a", "b", "c", "d"}, "m"),
                    DimensionError);
    CHECK_THROWS_AS(ols_fit(X, y, {"a", "b"}, "m"), DimensionError);
    CHECK_THROWS_AS(ols_fit(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), {"a", "b"}, "m"),
                    EmptyInputError);
}

TEST_CASE("model specs nest as classical within static within dynamic") {
    const ModelSpec cw = classical_spec(true);
    CHECK(cw.name == "classical");
    CHECK(term_labels(cw) == std::vector<std::string>{"trial_z", "word_length",
                                                      "log_neighborhood_size", "has_neighbours",
                                                      "log_frequency", "in_bnc"});
    const ModelSpec cn = classical_spec(false);
    CHECK(term_labels(cn) == std::vector<std::string>{"trial_z", "word_length",
                                                      "log_neighborhood_size", "has_neighbours"});

    const ModelSpec sw = static_spec(true);
    CHECK(sw.name == "static");
    const auto sw_labels = term_labels(sw);
    for (const auto& label : term_labels(cw))
        CHECK(std::find(sw_labels.begin(), sw_labels.end(), label) != sw_labels.end());
    for (const char* extra : {"log_semantic_density", "log_shortest_path", "has_neighbours_path",
                              "c_precision", "log_l1chat"})
        CHECK(std::find(sw_labels.begin(), sw_labels.end(), extra) != sw_labels.end());

    const ModelSpec dw = dynamic_spec(true);
    CHECK(dw.name == "dynamic");
    CHECK(dw.terms.size() == sw.terms.size() + 1);
    CHECK(dw.terms.back().label() == "yes_activation");
    for (std::size_t i = 0; i < sw.terms.size(); ++i)
        CHECK(dw.terms[i].label() == sw.terms[i].label());
    // nonword specs carry no corpus-frequency terms
    for (const auto& label : term_labels(dynamic_spec(false))) {
        CHECK(label != "log_frequency");
        CHECK(label != "in_bnc");
    }
}

TEST_CASE("nested models never fit worse in rss, and k grows with them") {
    const auto rows = synth_rows(397, 60, 0.0);
    const PredictorTable table = PredictorTable::from_measures(rows).filter_lexicality('W');
    const FitResult classical = fit_model(classical_spec(true), table);
    const FitResult stat = fit_model(static_spec(true), table);
    const FitResult dyn = fit_model(dynamic_spec(true), table);

    CHECK(classical.dropped.empty());
    CHECK(stat.dropped.empty());
    CHECK(dyn.dropped.empty());
    CHECK(stat.rss <= classical.rss + 1e-9);
    CHECK(dyn.rss <= stat.rss + 1e-9);
    CHECK(classical.k == 8);
    CHECK(stat.k == 13);
    CHECK(dyn.k == 14);
    CHECK(classical.coefficient_names.front() == "(intercept)");
}

TEST_CASE("interaction terms multiply their two columns") {
    const auto rows = synth_rows(401, 40, 0.0);
    PredictorTable table = PredictorTable::from_measures(rows);

    // response constructed to be exactly 3 * trial_z * c_precision
    std::vector<MeasureRow> shaped = rows;
    const Eigen::VectorXd z = table.column("trial_z");
    const Eigen::VectorXd c = table.column("c_precision");
    for (std::size_t i = 0; i < shaped.size(); ++i) {
        const double target = 3.0 * z[Eigen::Index(i)] * c[Eigen::Index(i)] - 5.0;
        shaped[i].rt_ms = -1000.0 / target;
    }
    const PredictorTable shaped_table = PredictorTable::from_measures(shaped);
    const ModelSpec spec{"inter", {Term{"trial_z", "c_precision"}}};
    const FitResult fit = fit_model(spec, shaped_table);
    REQUIRE(fit.coefficient_names.size() == 2);
    CHECK(fit.coefficient_names[1] == "trial_z:c_precision");
    CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.coefficients[0] == doctest::Approx(-5.0).epsilon(1e-6));
}

TEST_CASE("model comparison ranks by aic with stable tie-breaks") {
    FitResult a, b, c;
    a.model = "alpha";
    a.n = 10;
    a.aic = 100.0;
    b.model = "beta";
    b.n = 10;
    b.aic = 96.0;
    c.model = "gamma";
    c.n = 10;
    c.aic = 100.0;
    const auto ranked = compare_models({a, b, c});
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].model == "beta");
    CHECK(ranked[1].model == "alpha"); // aic tie broken by name
    CHECK(ranked[2].model == "gamma");
    CHECK(ranked[1].delta_aic == doctest::Approx(4.0));
    CHECK(ranked[1].rel_likelihood == doctest::Approx(std::exp(-2.0)));

    FitResult other = a;
    other.n = 11;
    CHECK_THROWS_AS(compare_models({a, other}), Error);
    CHECK_THROWS_AS(compare_models({}), EmptyInputError);
}

TEST_CASE("a real yes_activation effect hands the win to the dynamic model") {
    std::vector<SubjectComparison> all;
    for (int s = 0; s < 3; ++s) {
        const auto rows = synth_rows(409 + std::uint64_t(s), 80, 0.5);
        const PredictorTable table = PredictorTable::from_measures(rows).filter_lexicality('W');
        const FitResult stat = fit_model(static_spec(true), table);
        const FitResult dyn = fit_model(dynamic_spec(true), table);
        CHECK(dyn.aic < stat.aic);

        SubjectComparison sc;
        sc.subject = s + 1;
        sc.lexicality = 'W';
        sc.entries = compare_models({stat, dyn});
        CHECK(sc.entries.front().model == "dynamic");
        all.push_back(sc);
    }
    const AggregateSummary agg = summarize(all);
    CHECK(agg.subjects == 3);
    CHECK(agg.dynamic_wins == 3);
    CHECK(agg.fraction_dynamic_wins() == doctest::Approx(1.0));
    CHECK(agg.mean_delta > 0.0);
}

TEST_CASE("comparison reports serialize one row per model") {
    testutil::TempDir tmp("comparisons");
    SubjectComparison sc;
    sc.subject = 9;
    sc.lexicality = 'W';
    sc.entries = {{"dynamic", 100, 14, -250.5, 0.0, 1.0},
                  {"static", 100, 13, -248.5, 2.0, std::exp(-1.0)}};
    const std::string path = tmp.file("cmp.csv");
    write_comparisons({sc}, path);
    const std::string text = read_text(path);
    CHECK(text.find("subject,model,n,k,aic,delta_aic,rel_likelihood\n") == 0);
    CHECK(text.find("9,dynamic,100,14,-250.5,0,1\n") != std::string::npos);
    CHECK(text.find("9,static,100,13,-248.5,2,") != std::string::npos);
}

TEST_CASE("summaries require both contenders per subject") {
    SubjectComparison sc;
    sc.subject = 1;
    sc.entries = {{"static", 50, 13, 10.0, 0.0, 1.0}};
    CHECK_THROWS_AS(summarize({sc}), Error);
    CHECK(summarize({}).subjects == 0);
}
