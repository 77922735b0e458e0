#include "ldsim/trialsim.hpp"

#include <mutex>
#include <utility>

namespace ldsim {

void SimulationConfig::validate() const {
    learning.validate();
    if (density_n == 0) {
        throw ConfigError("density_n must be at least 1");
    }
}

SimulationContext::SimulationContext(const CueMatrix& cues, const EmbeddingTable& semantics,
                                     std::unordered_map<std::string, double> frequencies,
                                     std::vector<std::string> neighbor_reference)
    : cues_(cues), semantics_(semantics), frequencies_(std::move(frequencies)),
      neighbor_reference_(std::move(neighbor_reference)) {
    if (neighbor_reference_.empty()) {
        neighbor_reference_ = cues_.words();
    }
}

double SimulationContext::frequency_of(const std::string& word) const {
    auto it = frequencies_.find(word);
    return it == frequencies_.end() ? 0.0 : it->second;
}

const std::vector<std::string>& SimulationContext::coltheart_of(const std::string& stimulus) const {
    {
        std::shared_lock lock(mutex_);
        auto it = coltheart_cache_.find(stimulus);
        if (it != coltheart_cache_.end()) {
            return it->second;
        }
    }
    auto neighbors = coltheart_neighbors(stimulus, cues_.words());
    std::unique_lock lock(mutex_);
    // Another worker may have filled the slot meanwhile; emplace keeps the first.
    return coltheart_cache_.emplace(stimulus, std::move(neighbors)).first->second;
}

int SimulationContext::neighborhood_count_of(const std::string& stimulus) const {
    {
        std::shared_lock lock(mutex_);
        auto it = neighborhood_cache_.find(stimulus);
        if (it != neighborhood_cache_.end()) {
            return it->second;
        }
    }
    int count = static_cast<int>(levenshtein_neighbors(stimulus, neighbor_reference_));
    std::unique_lock lock(mutex_);
    return neighborhood_cache_.emplace(stimulus, count).first->second;
}

SubjectState make_subject_state(const Priors& priors, const EmbeddingTable& semantics) {
    if (semantics.size() == 0) {
        throw EmptyInputError("cannot initialise a subject from an empty embedding table");
    }
    SubjectState state;
    state.F = priors.F;
    state.G = priors.G;
    state.D = DecisionMapping::zeros(priors.F.in_dim());
    state.nonword_vec = SemVec::Zero(semantics.dim());
    state.wordness_vec = centroid(semantics);
    return state;
}

SemVec select_semantic_target(char lexicality, char response, const SubjectState& state,
                              const EmbeddingTable& semantics, const std::string& stimulus) {
    if (response == 'N') {
        return state.nonword_vec;
    }
    if (lexicality == 'W') {
        auto id = semantics.word_id(stimulus);
        if (!id) {
            throw Error("no embedding for word stimulus '" + stimulus + "'");
        }
        return semantics.row(*id);
    }
    return state.wordness_vec; // nonword judged to be a word
}

void update_nonword_vector(SubjectState& state, const SemVec& s_hat) {
    if (state.nonword_vec.size() != s_hat.size()) {
        throw DimensionError("nonword vector and prediction disagree on dimension");
    }
    state.nonword_vec = (state.nonword_vec + s_hat) / 2.0;
}

MeasureRow run_trial(SubjectState& state, const TrialRecord& trial, const SimulationContext& ctx,
                     const SimulationConfig& config) {
    const EmbeddingTable& sem = ctx.semantics();

    if (trial.lexicality == 'W' && !sem.word_id(trial.stimulus)) {
        throw SkipTrial("word stimulus without embedding");
    }
    EncodedForm encoded = encode_form(trial.stimulus, ctx.cues().index());
    if (encoded.vec.empty()) {
        throw SkipTrial("no known cues in stimulus");
    }
    const CueVector& c = encoded.vec;

    // All predictions come from the pre-trial state.
    SemVec s_hat = predict_semantic(c, state.F);
    double decision = predict_decision(c, state.D);
    Eigen::VectorXd c_hat = predict_form(s_hat, state.G);

    MeasureRow row;
    row.subject = trial.subject;
    row.order = trial.order;
    row.block = trial.block;
    row.session = trial.session;
    row.stimulus = trial.stimulus;
    row.lexicality = trial.lexicality;
    row.response = trial.response;
    row.rt_ms = trial.rt_ms;

    row.semantic_density = semantic_density(s_hat, sem, config.density_n);
    PathResult path = shortest_path(trial.stimulus, ctx.coltheart_of(trial.stimulus), state.F,
                                    ctx.cues(), true);
    row.shortest_path = path.length;
    row.has_neighbours_path = path.has_neighbors;
    row.c_precision = c_precision(c, c_hat);
    row.l1chat = l1chat(c_hat);
    row.yes_activation = decision;

    row.word_length = static_cast<int>(trial.stimulus.size());
    row.frequency = ctx.frequency_of(trial.stimulus);
    row.in_bnc = row.frequency > 0.0;
    row.neighborhood_size = ctx.neighborhood_count_of(trial.stimulus);
    if (config.record_dropped_cues) {
        row.dropped_cues = static_cast<std::uint32_t>(encoded.dropped);
    }

    if (config.dynamic) {
        SemVec target = select_semantic_target(trial.lexicality, trial.response, state, sem,
                                               trial.stimulus);
        wh_update_comprehension(state.F, c, target, config.learning.eta_fg);
        const SemVec& g_input = config.g_input == GInput::Predicted ? s_hat : target;
        wh_update_production(state.G, g_input, c, config.learning.eta_fg);
        wh_update_decision(state.D, c, trial.response == 'W' ? 1 : 0, config.learning.eta_d);
        if (trial.response == 'N') {
            update_nonword_vector(state, s_hat);
        }
        ++state.trial_counter;
    }
    return row;
}

SimulationResult simulate_subject(const std::vector<TrialRecord>& trials, SubjectState& state,
                                  const SimulationContext& ctx, const SimulationConfig& config) {
    config.validate();
    SimulationResult result;
    result.rows.reserve(trials.size());
    std::uint64_t last_order = 0;
    bool first = true;
    for (const TrialRecord& trial : trials) {
        if (!first && trial.order <= last_order) {
            throw Error("trials out of order for subject " + std::to_string(trial.subject) +
                        ": order " + std::to_string(trial.order) + " after " +
                        std::to_string(last_order));
        }
        first = false;
        last_order = trial.order;
        try {
            result.rows.push_back(run_trial(state, trial, ctx, config));
        } catch (const SkipTrial& skip) {
            result.skipped.push_back(SkipEntry{trial.subject, trial.order, trial.stimulus,
                                               skip.what()});
        }
    }
    return result;
}

SimulationResult simulate_subject(const std::vector<TrialRecord>& trials, const Priors& priors,
                                  const SimulationContext& ctx, const SimulationConfig& config) {
    SubjectState state = make_subject_state(priors, ctx.semantics());
    return simulate_subject(trials, state, ctx, config);
}

} // namespace ldsim
