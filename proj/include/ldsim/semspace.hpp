#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "ldsim/errors.hpp"

namespace ldsim {

using SemVec = Eigen::VectorXd;

/// Dense word-by-dimension semantic matrix. Rows are word embeddings;
/// word ids align with the CueMatrix when the two are built from the
/// same word list. Immutable after construction.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(Eigen::MatrixXd rows, std::vector<std::string> words);

    std::size_t size() const { return static_cast<std::size_t>(mat_.rows()); }
    Eigen::Index dim() const { return mat_.cols(); }

    SemVec row(std::size_t word_id) const { return mat_.row(static_cast<Eigen::Index>(word_id)); }
    const std::string& word(std::size_t word_id) const { return words_.at(word_id); }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    const std::vector<std::string>& words() const { return words_; }

    std::optional<std::uint32_t> word_id(const std::string& word) const;

    // Cached L2 norms of the rows, for cosine scans.
    const Eigen::VectorXd& row_norms() const { return norms_; }

private:
    Eigen::MatrixXd mat_;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    Eigen::VectorXd norms_;
};

struct Scored {
    std::uint32_t word_id;
    double score;
};

struct AccuracyReport {
    std::size_t correct = 0;
    std::size_t total = 0;
    std::size_t undefined_rows = 0; // zero-variance predictions, counted incorrect
    double accuracy() const { return total == 0 ? 0.0 : double(correct) / double(total); }
};

/// dot(a,b) / (|a||b|). Throws UndefinedSimilarityError on a zero vector.
double cosine_similarity(const SemVec& a, const SemVec& b);

double euclidean_distance(const SemVec& a, const SemVec& b);

/// Pearson correlation of two vectors viewed as samples.
/// Throws UndefinedCorrelationError if either side has zero variance.
double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// The n rows of `table` most cosine-similar to `q`, descending; ties break
/// by ascending word id. Returns fewer than n entries only when the table
/// is smaller than n.
std::vector<Scored> top_n_by_cosine(const SemVec& q, const EmbeddingTable& table, std::size_t n);

/// Arithmetic mean across rows.
SemVec centroid(const EmbeddingTable& table);

/// Fraction of predicted rows whose own target is among the k targets with
/// highest Pearson correlation. Zero-variance predicted rows count as
/// incorrect and are reported. Ranking ties break by ascending row id.
AccuracyReport correlation_accuracy(const Eigen::MatrixXd& predicted,
                                    const Eigen::MatrixXd& targets, std::size_t k);

AccuracyReport correlation_accuracy(const Eigen::MatrixXd& predicted,
                                    const EmbeddingTable& targets, std::size_t k);

} // namespace ldsim
