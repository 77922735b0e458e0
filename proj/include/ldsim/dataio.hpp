#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "ldsim/measures.hpp"
#include "ldsim/semspace.hpp"
#include "ldsim/trialsim.hpp"

namespace ldsim {

// Stand-in added before taking logs of a zero value.
inline constexpr double kLogBackoffFloor = 0.002;

/// Counts of rows dropped by each filtering rule when loading trials.
struct TrialFilterReport {
    std::size_t kept = 0;
    std::size_t removed_null_stimulus = 0; // literal "null"/"nan" stimuli
    std::size_t removed_timeout = 0;       // timeout flag set or response missing
    std::size_t removed_rt_low = 0;        // rt <= 100 ms
    std::size_t removed_rt_high = 0;       // rt > 2000 ms

    std::size_t removed_total() const {
        return removed_null_stimulus + removed_timeout + removed_rt_low + removed_rt_high;
    }
};

struct SubjectTrials {
    int subject = 0;
    std::vector<TrialRecord> trials; // file order preserved
};

struct TrialData {
    std::vector<SubjectTrials> subjects; // order of first appearance
    TrialFilterReport report;
};

/// Loads and filters a trial CSV. Columns (exact, in header):
/// subject, order, block, session, stimulus, lexicality, response, rt_ms
/// with an optional trailing timeout column (0/1).
TrialData load_trials(const std::string& path);

/// Writes records back out in the same CSV layout (no timeout column).
void write_trials(const std::vector<TrialRecord>& trials, const std::string& path);

/// -1000 / rt. Throws on nonpositive rt.
double rtinv(double rt_ms);

/// Natural log with a floor: 0 maps to log(kLogBackoffFloor). Negative
/// input is an error.
double log_backoff(double x);

/// 0 when x is exactly zero, 1 otherwise. Negative input is an error.
int zero_indicator(double x);

/// (x - mean) / sd with the n-1 denominator. Throws on fewer than two
/// values or zero variance.
std::vector<double> standardize(const std::vector<double>& xs);

/// Per-subject regression input: one row per trial in presentation order,
/// named numeric columns (transforms applied), and the per-row lexicality
/// needed to split word and nonword fits.
class PredictorTable {
public:
    /// Builds the table from one subject's measure rows. Trial number is
    /// standardized over all of the subject's rows before any split.
    /// Nonzero values below the log floor are reported in warnings():
    /// below it the backoff would break monotonicity.
    static PredictorTable from_measures(const std::vector<MeasureRow>& rows);

    std::size_t row_count() const { return static_cast<std::size_t>(values_.rows()); }
    const std::vector<std::string>& names() const { return names_; }
    bool has_column(const std::string& name) const;
    Eigen::VectorXd column(const std::string& name) const; // throws on unknown name
    char lexicality(std::size_t row) const { return lex_.at(row); }

    /// Rows whose stimulus lexicality matches (W or N); columns unchanged.
    PredictorTable filter_lexicality(char lex) const;

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    std::vector<std::string> names_;
    Eigen::MatrixXd values_; // rows x names
    std::vector<char> lex_;
    std::vector<std::string> warnings_;
};

/// Measure table CSV, one row per trial, 12 significant digits, written
/// atomically. read_measures is its inverse up to float formatting.
void write_measures(const std::vector<MeasureRow>& rows, const std::string& path);
std::vector<MeasureRow> read_measures(const std::string& path);

/// Sidecar log of skipped trials (subject, order, stimulus, reason).
void write_skip_log(const std::vector<SkipEntry>& entries, const std::string& path);

/// Plain-text column glossary for the measure CSV.
void write_data_dictionary(const std::string& path);

/// One entry per line: word then d space-separated floats. An optional
/// first line "count dim" is validated against the body.
EmbeddingTable load_embeddings(const std::string& path);
void write_embeddings(const EmbeddingTable& table, const std::string& path);

/// CSV word,count. Duplicate words are an error; counts must be >= 0.
std::unordered_map<std::string, double> load_frequencies(const std::string& path);
void write_frequencies(const std::vector<std::pair<std::string, double>>& entries,
                       const std::string& path);

/// Word lists: one word per line, blank lines ignored.
std::vector<std::string> load_wordlist(const std::string& path);
void write_wordlist(const std::vector<std::string>& words, const std::string& path);

} // namespace ldsim
