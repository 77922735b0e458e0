#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldsim/formspace.hpp"
#include "ldsim/mappings.hpp"
#include "ldsim/semspace.hpp"
#include "ldsim/tour.hpp"

namespace ldsim {

/// Per-trial output row: the model-derived predictors plus the pass-through
/// trial and classical fields. All values raw; transforms happen downstream.
struct MeasureRow {
    int subject = 0;
    std::uint64_t order = 0; // presentation rank within subject
    int block = 0;
    int session = 0;
    std::string stimulus;
    char lexicality = 'W'; // W or N
    char response = 'W';
    double rt_ms = 0.0;

    double semantic_density = 0.0;
    double shortest_path = 0.0; // 0 iff has_neighbours_path is false
    bool has_neighbours_path = false;
    double c_precision = 0.0;
    double l1chat = 0.0;
    double yes_activation = 0.0;

    int word_length = 0;
    double frequency = 0.0; // raw corpus count, 0 when absent
    bool in_bnc = false;
    int neighborhood_size = 0; // edit-distance-1 count against the reference list
    std::uint32_t dropped_cues = 0;
};

struct PathResult {
    double length = 0.0;
    bool has_neighbors = false;
};

/// Mean of the n largest cosine similarities between s_hat and the rows of
/// the table (every row participates, including the stimulus' own target).
double semantic_density(const SemVec& s_hat, const EmbeddingTable& table, std::size_t n = 10);

/// Length of the shortest closed Euclidean tour through the predicted
/// semantic vectors of the stimulus and its same-length one-letter
/// neighbours. (0, false) when the stimulus has no neighbours.
PathResult shortest_path(const std::string& word, const std::vector<std::string>& lexicon,
                         const MappingMatrix& F, const CueMatrix& cues);

/// Same computation with a precomputed neighbour list.
PathResult shortest_path(const std::string& word, const std::vector<std::string>& neighbors,
                         const MappingMatrix& F, const CueMatrix& cues, bool precomputed);

/// Pearson correlation between the 0/1 expansion of c and the predicted
/// form vector.
double c_precision(const CueVector& c, const Eigen::VectorXd& c_hat);

/// L1 norm of the predicted form vector.
double l1chat(const Eigen::VectorXd& c_hat);

/// Support for the "word" outcome: c . D, reported pre-update.
double yes_activation(const CueVector& c, const DecisionMapping& D);

} // namespace ldsim
