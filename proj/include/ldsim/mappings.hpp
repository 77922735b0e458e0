#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ldsim/formspace.hpp"
#include "ldsim/semspace.hpp"

namespace ldsim {

enum class MappingKind : std::uint32_t {
    Comprehension = 0, // trigrams x d
    Production = 1,    // d x trigrams
    Decision = 2,      // trigrams x 1
};

/// Dense linear mapping between form space and semantic space.
struct MappingMatrix {
    Eigen::MatrixXd values;
    MappingKind kind = MappingKind::Comprehension;

    Eigen::Index in_dim() const { return values.rows(); }
    Eigen::Index out_dim() const { return values.cols(); }
};

/// Single-outcome mapping from trigram cues to word/nonword support.
struct DecisionMapping {
    Eigen::VectorXd values;

    static DecisionMapping zeros(Eigen::Index cue_count) {
        return DecisionMapping{Eigen::VectorXd::Zero(cue_count)};
    }
};

struct LearningConfig {
    double eta_fg = 0.001; // learning rate for the form/meaning mappings
    double eta_d = 0.01;   // learning rate for the lexicality mapping
    // Ridge term for the endstate solver. Unset means trace-scaled default.
    std::optional<double> ridge;

    void validate() const;
};

// Trace-scaled default ridge applied when none is given: keeps rank-deficient
// normal equations solvable without visibly perturbing well-posed ones.
inline constexpr double kDefaultRidgeScale = 1e-8;

/// Least-squares mapping from cue rows to semantic rows (the matrix F):
/// minimises |CF - S|^2 + ridge |F|^2 via the normal equations.
/// Throws SolverError with the residual norm when the solve is unreliable.
MappingMatrix solve_endstate(const CueMatrix& cues, const EmbeddingTable& semantics,
                             std::optional<double> ridge = std::nullopt);

/// Same solve in the opposite direction (the matrix G): dense semantic rows
/// as input, sparse cue rows as target.
MappingMatrix solve_endstate(const EmbeddingTable& semantics, const CueMatrix& cues,
                             std::optional<double> ridge = std::nullopt);

/// s_hat = c . F as a sparse accumulation over active cue rows, ascending id.
SemVec predict_semantic(const CueVector& c, const MappingMatrix& F);

/// c_hat = s . G; dense vector of trigram supports.
Eigen::VectorXd predict_form(const SemVec& s, const MappingMatrix& G);

/// d = c . D.
double predict_decision(const CueVector& c, const DecisionMapping& D);

/// Dense predictions for every row of the cue matrix (rows: c_i . F).
Eigen::MatrixXd predict_all_semantic(const CueMatrix& cues, const MappingMatrix& F);

/// Dense 0/1 expansion of a cue vector.
Eigen::VectorXd to_dense(const CueVector& c);

// Widrow-Hoff updates. Error terms always use the pre-update prediction.

/// F += c^T (s_target - s_hat) eta; only rows at active cue ids change.
void wh_update_comprehension(MappingMatrix& F, const CueVector& c, const SemVec& s_target,
                             double eta);

/// G += s_input^T (c_target - c_hat) eta, with c_target expanded to 0/1.
void wh_update_production(MappingMatrix& G, const SemVec& s_input, const CueVector& c_target,
                          double eta);

/// D += c^T (r - d) eta, r in {0,1}.
void wh_update_decision(DecisionMapping& D, const CueVector& c, int response, double eta);

// Binary serialization: fixed header, row-major little-endian doubles,
// trailing checksum. Byte-identical across runs for identical inputs.
void save_mapping(const MappingMatrix& m, const std::string& path);
MappingMatrix load_mapping(const std::string& path);
void save_decision(const DecisionMapping& d, const std::string& path);
DecisionMapping load_decision(const std::string& path);

} // namespace ldsim
