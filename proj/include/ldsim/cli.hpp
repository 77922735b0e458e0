#pragma once

#include <string>
#include <vector>

#include "ldsim/mappings.hpp"
#include "ldsim/trialsim.hpp"

namespace ldsim {

/// Everything a pipeline command needs; filled from flags and/or a config
/// file by run_cli, or constructed directly by tests.
struct RunConfig {
    std::string lexicon_path;
    std::string embeddings_path;
    std::string frequencies_path; // optional; absent words count 0
    std::string trials_path;
    std::string output_dir = "out";

    std::string mode = "both"; // dynamic | static | both
    LearningConfig learning;
    std::size_t density_n = 10;
    GInput g_input = GInput::Predicted;
    std::vector<int> subjects; // empty = all
    unsigned workers = 1;

    void validate_common() const; // mode/workers/density sanity
};

/// Endstate priors for both directions plus the lexicon evaluation.
struct BuildReport {
    std::size_t words = 0;
    std::size_t cues = 0;
    Eigen::Index dim = 0;
    double comprehension_at1 = 0.0;
    double comprehension_at5 = 0.0;
    double production_proxy = 0.0; // form row recovered best by its own meaning
};

/// Solves the endstate mappings from the lexicon and embeddings, writes
/// F0/G0 under output_dir, and reports lexicon-level accuracy.
BuildReport cmd_build(const RunConfig& config);

/// Replays every requested subject in the requested mode(s), writing one
/// measure CSV and one skip log per subject per mode.
void cmd_simulate(const RunConfig& config);

struct CompareSummary {
    std::size_t subjects = 0;
    double word_fraction_dynamic_wins = 0.0;
    double word_mean_delta = 0.0; // static AIC - dynamic AIC
    double nonword_fraction_dynamic_wins = 0.0;
    double nonword_mean_delta = 0.0;
};

/// Fits the classical / static / dynamic regressions per subject (words
/// and nonwords separately) from the simulate outputs and writes the
/// comparison CSVs.
CompareSummary cmd_compare(const RunConfig& config);

/// Re-evaluates previously built priors without re-solving.
BuildReport cmd_evaluate(const RunConfig& config);

/// Full argv interface; returns the process exit code.
int run_cli(int argc, const char* const* argv);

} // namespace ldsim
