#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldsim/formspace.hpp"
#include "ldsim/mappings.hpp"
#include "ldsim/measures.hpp"
#include "ldsim/semspace.hpp"

namespace ldsim {

/// One experimental trial as replayed from the data.
struct TrialRecord {
    int subject = 0;
    std::uint64_t order = 0; // presentation rank, strictly increasing per subject
    int block = 0;
    int session = 0;
    std::string stimulus;
    char lexicality = 'W'; // W or N
    char response = 'W';
    double rt_ms = 0.0;
};

/// The mutable learning state owned by one simulated subject.
struct SubjectState {
    MappingMatrix F;
    MappingMatrix G;
    DecisionMapping D;
    SemVec nonword_vec;  // n_t, starts at zero
    SemVec wordness_vec; // centroid of the word cloud, cached at init
    std::uint64_t trial_counter = 0;
};

struct Priors {
    MappingMatrix F;
    MappingMatrix G;
};

enum class GInput {
    Predicted, // update G from the predicted semantic vector
    Target,    // update G from the selected target vector
};

struct SimulationConfig {
    bool dynamic = true;
    LearningConfig learning;
    std::size_t density_n = 10;
    GInput g_input = GInput::Predicted;
    bool record_dropped_cues = true;

    void validate() const;
};

/// A trial that cannot be simulated (unencodable stimulus or a word
/// stimulus without an embedding); caught and logged by simulate_subject.
class SkipTrial : public Error {
public:
    using Error::Error;
};

struct SkipEntry {
    int subject = 0;
    std::uint64_t order = 0;
    std::string stimulus;
    std::string reason;
};

struct SimulationResult {
    std::vector<MeasureRow> rows;
    std::vector<SkipEntry> skipped;
};

/// Read-shared simulation inputs: the lexicon's cue matrix and embeddings,
/// plus frequency and neighbour lookups. Neighbour scans are memoised;
/// safe for concurrent use from several subject workers.
class SimulationContext {
public:
    SimulationContext(const CueMatrix& cues, const EmbeddingTable& semantics,
                      std::unordered_map<std::string, double> frequencies = {},
                      std::vector<std::string> neighbor_reference = {});

    const CueMatrix& cues() const { return cues_; }
    const EmbeddingTable& semantics() const { return semantics_; }

    double frequency_of(const std::string& word) const;

    /// Same-length one-letter-different neighbours within the lexicon.
    const std::vector<std::string>& coltheart_of(const std::string& stimulus) const;

    /// Edit-distance-1 count against the reference list (defaults to the
    /// lexicon when no separate list was supplied).
    int neighborhood_count_of(const std::string& stimulus) const;

private:
    const CueMatrix& cues_;
    const EmbeddingTable& semantics_;
    std::unordered_map<std::string, double> frequencies_;
    std::vector<std::string> neighbor_reference_;

    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::string, std::vector<std::string>> coltheart_cache_;
    mutable std::unordered_map<std::string, int> neighborhood_cache_;
};

/// Fresh per-subject state from the priors: decision mapping all zero,
/// nonword vector zero, wordness vector = centroid of the embeddings.
SubjectState make_subject_state(const Priors& priors, const EmbeddingTable& semantics);

/// Target semantic vector for the comprehension update, by stimulus
/// lexicality and participant response:
///   (W,W) -> the word's own embedding row
///   (N,W) -> the wordness vector (centroid)
///   (*,N) -> the current nonword vector
SemVec select_semantic_target(char lexicality, char response, const SubjectState& state,
                              const EmbeddingTable& semantics, const std::string& stimulus);

/// n <- (n + s_hat) / 2. Call only after trials with a nonword response.
void update_nonword_vector(SubjectState& state, const SemVec& s_hat);

/// One trial: encode, predict meaning / decision support / form feedback,
/// emit the measure row from pre-update state, then (dynamic only) apply
/// the learning updates. Throws SkipTrial for unsimulatable stimuli.
MeasureRow run_trial(SubjectState& state, const TrialRecord& trial,
                     const SimulationContext& ctx, const SimulationConfig& config);

/// Replays a subject's trial list in presentation order, mutating `state`.
/// Trials must be sorted by strictly increasing order.
SimulationResult simulate_subject(const std::vector<TrialRecord>& trials, SubjectState& state,
                                  const SimulationContext& ctx, const SimulationConfig& config);

/// Convenience overload starting from fresh priors.
SimulationResult simulate_subject(const std::vector<TrialRecord>& trials, const Priors& priors,
                                  const SimulationContext& ctx, const SimulationConfig& config);

} // namespace ldsim
