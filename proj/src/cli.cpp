#include "ldsim/cli.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ldsim/dataio.hpp"
#include "ldsim/regharness.hpp"
#include "detail/textio.hpp"

namespace fs = std::filesystem;

namespace ldsim {

namespace {

constexpr const char* kPriorF = "F0.ldmp";
constexpr const char* kPriorG = "G0.ldmp";

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw ConfigError(std::string(what) + " path not set");
    if (!fs::exists(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

/// Reorders the loaded embeddings to lexicon word-id order so cue and
/// semantic rows line up. Every lexicon word must be present.
EmbeddingTable align_embeddings(const EmbeddingTable& loaded,
                                const std::vector<std::string>& lexicon) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(lexicon.size()), loaded.dim());
    for (std::size_t i = 0; i < lexicon.size(); ++i) {
        auto id = loaded.word_id(lexicon[i]);
        if (!id) throw Error("lexicon word without embedding: " + lexicon[i]);
        rows.row(static_cast<Eigen::Index>(i)) = loaded.matrix().row(*id);
    }
    return EmbeddingTable(std::move(rows), lexicon);
}

Eigen::MatrixXd dense_cue_rows(const CueMatrix& cues) {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cues.word_count()),
                                                  static_cast<Eigen::Index>(cues.cue_count()));
    for (std::size_t w = 0; w < cues.word_count(); ++w)
        for (std::uint32_t id : cues.row(w).active)
            dense(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(id)) = 1.0;
    return dense;
}

BuildReport evaluate_priors(const CueMatrix& cues, const EmbeddingTable& sem,
                            const MappingMatrix& F, const MappingMatrix& G) {
    BuildReport report;
    report.words = cues.word_count();
    report.cues = cues.cue_count();
    report.dim = sem.dim();

    Eigen::MatrixXd s_hat = predict_all_semantic(cues, F);
    report.comprehension_at1 = correlation_accuracy(s_hat, sem, 1).accuracy();
    const std::size_t k5 = std::min<std::size_t>(5, cues.word_count());
    report.comprehension_at5 = correlation_accuracy(s_hat, sem, k5).accuracy();

    Eigen::MatrixXd c_hat = sem.matrix() * G.values;
    report.production_proxy = correlation_accuracy(c_hat, dense_cue_rows(cues), 1).accuracy();
    return report;
}

std::string report_text(const BuildReport& r) {
    std::ostringstream out;
    out << "words=" << r.words << '\n'
        << "cues=" << r.cues << '\n'
        << "dim=" << r.dim << '\n'
        << "comprehension_accuracy_at1=" << detail::fmt12(r.comprehension_at1) << '\n'
        << "comprehension_accuracy_at5=" << detail::fmt12(r.comprehension_at5) << '\n'
        << "production_accuracy=" << detail::fmt12(r.production_proxy) << '\n';
    return out.str();
}

void check_prior_dims(const MappingMatrix& F, const MappingMatrix& G, const CueMatrix& cues,
                      const EmbeddingTable& sem) {
    const auto T = static_cast<Eigen::Index>(cues.cue_count());
    if (F.kind != MappingKind::Comprehension || F.in_dim() != T || F.out_dim() != sem.dim())
        throw DimensionError("comprehension prior does not match lexicon/embeddings");
    if (G.kind != MappingKind::Production || G.in_dim() != sem.dim() || G.out_dim() != T)
        throw DimensionError("production prior does not match lexicon/embeddings");
}

std::string measures_path(const std::string& dir, int subject, bool dynamic) {
    return dir + "/measures_s" + std::to_string(subject) + (dynamic ? "_dynamic" : "_static") +
           ".csv";
}
std::string skiplog_path(const std::string& dir, int subject, bool dynamic) {
    return dir + "/skipped_s" + std::to_string(subject) + (dynamic ? "_dynamic" : "_static") +
           ".csv";
}

std::mutex log_mutex;

void log_line(const std::string& line) {
    std::lock_guard<std::mutex> lock(log_mutex);
    std::cerr << line << '\n';
}

} // namespace

void RunConfig::validate_common() const {
    if (mode != "dynamic" && mode != "static" && mode != "both")
        throw ConfigError("mode must be dynamic, static, or both");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (density_n == 0) throw ConfigError("density-n must be at least 1");
    learning.validate();
}

BuildReport cmd_build(const RunConfig& config) {
    config.validate_common();
    require_file(config.lexicon_path, "lexicon");
    require_file(config.embeddings_path, "embeddings");

    const auto words = load_wordlist(config.lexicon_path);
    const CueMatrix cues = CueMatrix::build(words);
    const EmbeddingTable sem = align_embeddings(load_embeddings(config.embeddings_path), words);

    const MappingMatrix F = solve_endstate(cues, sem, config.learning.ridge);
    const MappingMatrix G = solve_endstate(sem, cues, config.learning.ridge);

    fs::create_directories(config.output_dir);
    save_mapping(F, config.output_dir + "/" + kPriorF);
    save_mapping(G, config.output_dir + "/" + kPriorG);

    BuildReport report = evaluate_priors(cues, sem, F, G);
    detail::write_text_atomic(config.output_dir + "/build_report.txt", report_text(report));
    std::cout << report_text(report);
    return report;
}

BuildReport cmd_evaluate(const RunConfig& config) {
    config.validate_common();
    require_file(config.lexicon_path, "lexicon");
    require_file(config.embeddings_path, "embeddings");

    const auto words = load_wordlist(config.lexicon_path);
    const CueMatrix cues = CueMatrix::build(words);
    const EmbeddingTable sem = align_embeddings(load_embeddings(config.embeddings_path), words);

    const std::string f_path = config.output_dir + "/" + kPriorF;
    const std::string g_path = config.output_dir + "/" + kPriorG;
    if (!fs::exists(f_path) || !fs::exists(g_path))
        throw Error("priors not found under " + config.output_dir + "; run build first");
    const MappingMatrix F = load_mapping(f_path);
    const MappingMatrix G = load_mapping(g_path);
    check_prior_dims(F, G, cues, sem);

    BuildReport report = evaluate_priors(cues, sem, F, G);
    detail::write_text_atomic(config.output_dir + "/evaluation_report.txt", report_text(report));
    std::cout << report_text(report);
    return report;
}

void cmd_simulate(const RunConfig& config) {
    config.validate_common();
    require_file(config.lexicon_path, "lexicon");
    require_file(config.embeddings_path, "embeddings");
    require_file(config.trials_path, "trials");
    if (!config.frequencies_path.empty()) require_file(config.frequencies_path, "frequencies");

    const auto words = load_wordlist(config.lexicon_path);
    const CueMatrix cues = CueMatrix::build(words);
    const EmbeddingTable sem = align_embeddings(load_embeddings(config.embeddings_path), words);

    const std::string f_path = config.output_dir + "/" + kPriorF;
    const std::string g_path = config.output_dir + "/" + kPriorG;
    if (!fs::exists(f_path) || !fs::exists(g_path))
        throw Error("priors not found under " + config.output_dir + "; run build first");
    const Priors priors{load_mapping(f_path), load_mapping(g_path)};
    check_prior_dims(priors.F, priors.G, cues, sem);

    std::unordered_map<std::string, double> freqs;
    if (!config.frequencies_path.empty()) freqs = load_frequencies(config.frequencies_path);

    TrialData data = load_trials(config.trials_path);
    log_line("event=trials_loaded kept=" + std::to_string(data.report.kept) +
             " removed_null=" + std::to_string(data.report.removed_null_stimulus) +
             " removed_timeout=" + std::to_string(data.report.removed_timeout) +
             " removed_rt_low=" + std::to_string(data.report.removed_rt_low) +
             " removed_rt_high=" + std::to_string(data.report.removed_rt_high));

    std::vector<const SubjectTrials*> selected;
    if (config.subjects.empty()) {
        for (const auto& st : data.subjects) selected.push_back(&st);
    } else {
        for (int want : config.subjects) {
            auto it = std::find_if(data.subjects.begin(), data.subjects.end(),
                                   [want](const SubjectTrials& st) { return st.subject == want; });
            if (it == data.subjects.end())
                throw Error("subject " + std::to_string(want) + " not present in trials");
            selected.push_back(&*it);
        }
    }

    std::vector<bool> modes;
    if (config.mode == "dynamic" || config.mode == "both") modes.push_back(true);
    if (config.mode == "static" || config.mode == "both") modes.push_back(false);

    struct Job {
        const SubjectTrials* subject;
        bool dynamic;
    };
    std::vector<Job> jobs;
    for (const auto* st : selected)
        for (bool dyn : modes) jobs.push_back(Job{st, dyn});

    const SimulationContext ctx(cues, sem, std::move(freqs), words);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            const Job& job = jobs[i];
            try {
                SimulationConfig sim;
                sim.dynamic = job.dynamic;
                sim.learning = config.learning;
                sim.density_n = config.density_n;
                sim.g_input = config.g_input;
                SubjectState state = make_subject_state(priors, sem);
                SimulationResult result = simulate_subject(job.subject->trials, state, ctx, sim);
                const int id = job.subject->subject;
                write_measures(result.rows, measures_path(config.output_dir, id, job.dynamic));
                write_skip_log(result.skipped, skiplog_path(config.output_dir, id, job.dynamic));
                for (const SkipEntry& e : result.skipped)
                    log_line("event=skip subject=" + std::to_string(e.subject) +
                             " order=" + std::to_string(e.order) + " stimulus=" + e.stimulus +
                             " reason=\"" + e.reason + "\"");
                log_line("event=subject_done subject=" + std::to_string(id) +
                         std::string(" mode=") + (job.dynamic ? "dynamic" : "static") +
                         " rows=" + std::to_string(result.rows.size()) +
                         " skipped=" + std::to_string(result.skipped.size()));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
        }
    };

    fs::create_directories(config.output_dir);
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    write_data_dictionary(config.output_dir + "/data_dictionary.txt");
}

CompareSummary cmd_compare(const RunConfig& config) {
    if (!fs::is_directory(config.output_dir))
        throw ConfigError("output directory not found: " + config.output_dir);

    // Discover subjects with measures in both modes.
    std::vector<int> found;
    for (const auto& entry : fs::directory_iterator(config.output_dir)) {
        const std::string name = entry.path().filename().string();
        const std::string prefix = "measures_s";
        const std::string suffix = "_static.csv";
        if (name.size() > prefix.size() + suffix.size() && name.rfind(prefix, 0) == 0 &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            const std::string id_str =
                name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
            try {
                found.push_back(std::stoi(id_str));
            } catch (const std::exception&) {
                continue; // not a measure file of ours
            }
        }
    }
    std::sort(found.begin(), found.end());
    if (!config.subjects.empty()) {
        std::vector<int> filtered;
        for (int want : config.subjects) {
            if (std::find(found.begin(), found.end(), want) == found.end())
                throw Error("no static measures for subject " + std::to_string(want));
            filtered.push_back(want);
        }
        found = std::move(filtered);
    }
    if (found.empty()) throw Error("no measure files under " + config.output_dir);

    std::vector<SubjectComparison> word_cmp;
    std::vector<SubjectComparison> nonword_cmp;

    for (int subject : found) {
        const std::string dyn_path = measures_path(config.output_dir, subject, true);
        if (!fs::exists(dyn_path))
            throw Error("missing dynamic measures for subject " + std::to_string(subject));
        const auto stat_rows = read_measures(measures_path(config.output_dir, subject, false));
        const auto dyn_rows = read_measures(dyn_path);
        if (stat_rows.size() != dyn_rows.size())
            throw Error("static and dynamic measures disagree on trial count for subject " +
                        std::to_string(subject));
        for (std::size_t i = 0; i < stat_rows.size(); ++i)
            if (stat_rows[i].order != dyn_rows[i].order ||
                stat_rows[i].stimulus != dyn_rows[i].stimulus)
                throw Error("static and dynamic measures disagree on trial sequence for "
                            "subject " +
                            std::to_string(subject));

        const PredictorTable stat_table = PredictorTable::from_measures(stat_rows);
        const PredictorTable dyn_table = PredictorTable::from_measures(dyn_rows);
        for (const auto& w : stat_table.warnings()) log_line("event=log_floor_warning " + w);

        for (char lex : {'W', 'N'}) {
            const bool word_trials = lex == 'W';
            const PredictorTable ts = stat_table.filter_lexicality(lex);
            const PredictorTable td = dyn_table.filter_lexicality(lex);
            std::vector<FitResult> fits;
            fits.push_back(fit_model(classical_spec(word_trials), ts));
            fits.push_back(fit_model(static_spec(word_trials), ts));
            fits.push_back(fit_model(dynamic_spec(word_trials), td));
            SubjectComparison sc{subject, lex, compare_models(fits)};
            (word_trials ? word_cmp : nonword_cmp).push_back(std::move(sc));
        }
    }

    write_comparisons(word_cmp, config.output_dir + "/comparison_words.csv");
    write_comparisons(nonword_cmp, config.output_dir + "/comparison_nonwords.csv");

    const AggregateSummary words = summarize(word_cmp);
    const AggregateSummary nonwords = summarize(nonword_cmp);
    CompareSummary summary;
    summary.subjects = words.subjects;
    summary.word_fraction_dynamic_wins = words.fraction_dynamic_wins();
    summary.word_mean_delta = words.mean_delta;
    summary.nonword_fraction_dynamic_wins = nonwords.fraction_dynamic_wins();
    summary.nonword_mean_delta = nonwords.mean_delta;

    std::cout << "subjects=" << summary.subjects << '\n'
              << "word_fraction_dynamic_wins=" << detail::fmt12(summary.word_fraction_dynamic_wins)
              << '\n'
              << "word_mean_delta_aic=" << detail::fmt12(summary.word_mean_delta) << '\n'
              << "nonword_fraction_dynamic_wins="
              << detail::fmt12(summary.nonword_fraction_dynamic_wins) << '\n'
              << "nonword_mean_delta_aic=" << detail::fmt12(summary.nonword_mean_delta) << '\n';
    return summary;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Discriminative lexicon simulation pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file; keys match long flag names");

    RunConfig cfg;
    std::string g_input_name = "predicted";

    auto add_common_paths = [&cfg](CLI::App* cmd, bool with_lexicon) {
        if (with_lexicon) {
            cmd->add_option("--lexicon", cfg.lexicon_path, "Word list, one word per line")
                ->required();
            cmd->add_option("--embeddings", cfg.embeddings_path,
                            "Embedding file (word then values per line)")
                ->required();
        }
        cmd->add_option("--out", cfg.output_dir, "Artifact directory")
            ->capture_default_str();
    };

    CLI::App* build = app.add_subcommand("build", "Solve endstate priors and evaluate them");
    add_common_paths(build, true);
    build->add_option("--ridge", cfg.learning.ridge,
                      "Ridge term for the endstate solve (default: trace-scaled)");

    CLI::App* simulate = app.add_subcommand("simulate", "Replay trials against built priors");
    add_common_paths(simulate, true);
    simulate->add_option("--trials", cfg.trials_path, "Trial CSV")->required();
    simulate->add_option("--frequencies", cfg.frequencies_path, "Frequency CSV (word,count)");
    simulate->add_option("--mode", cfg.mode, "dynamic, static, or both")
        ->check(CLI::IsMember({"dynamic", "static", "both"}))
        ->capture_default_str();
    simulate->add_option("--eta-fg", cfg.learning.eta_fg, "Learning rate for F and G")
        ->capture_default_str();
    simulate->add_option("--eta-d", cfg.learning.eta_d, "Learning rate for the decision mapping")
        ->capture_default_str();
    simulate->add_option("--density-n", cfg.density_n, "Neighbours in the density mean")
        ->capture_default_str();
    simulate->add_option("--g-input", g_input_name,
                         "Input vector for the production update: predicted or target")
        ->check(CLI::IsMember({"predicted", "target"}))
        ->capture_default_str();
    simulate->add_option("--subjects", cfg.subjects, "Only these subject ids")
        ->delimiter(',');
    simulate->add_option("--workers", cfg.workers, "Parallel subject workers")
        ->capture_default_str();

    CLI::App* compare = app.add_subcommand("compare", "Fit and compare the RT regressions");
    add_common_paths(compare, false);
    compare->add_option("--subjects", cfg.subjects, "Only these subject ids")->delimiter(',');

    CLI::App* evaluate = app.add_subcommand("evaluate", "Re-evaluate built priors");
    add_common_paths(evaluate, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    cfg.g_input = g_input_name == "target" ? GInput::Target : GInput::Predicted;

    try {
        if (build->parsed()) cmd_build(cfg);
        if (simulate->parsed()) cmd_simulate(cfg);
        if (compare->parsed()) cmd_compare(cfg);
        if (evaluate->parsed()) cmd_evaluate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace ldsim
