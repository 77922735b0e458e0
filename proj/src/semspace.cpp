#include "ldsim/semspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ldsim {

EmbeddingTable::EmbeddingTable(Eigen::MatrixXd rows, std::vector<std::string> words)
    : mat_(std::move(rows)), words_(std::move(words)) {
    if (static_cast<std::size_t>(mat_.rows()) != words_.size())
        throw DimensionError("embedding row count does not match word count");
    if (!mat_.allFinite())
        throw Error("embedding table contains non-finite values");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto [it, inserted] = ids_.emplace(words_[i], static_cast<std::uint32_t>(i));
        if (!inserted) throw DuplicateEntryError("duplicate word in embeddings: " + words_[i]);
    }
    norms_ = mat_.rowwise().norm();
}

std::optional<std::uint32_t> EmbeddingTable::word_id(const std::string& word) const {
    auto it = ids_.find(word);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

double cosine_similarity(const SemVec& a, const SemVec& b) {
    if (a.size() != b.size())
        throw DimensionError("cosine similarity of vectors with different dimensions");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        throw UndefinedSimilarityError("cosine similarity is undefined for a zero vector");
    return a.dot(b) / (na * nb);
}

double euclidean_distance(const SemVec& a, const SemVec& b) {
    if (a.size() != b.size())
        throw DimensionError("euclidean distance of vectors with different dimensions");
    return (a - b).norm();
}

double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw DimensionError("correlation of vectors with different dimensions");
    if (a.size() < 2)
        throw UndefinedCorrelationError("correlation needs at least two components");
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double sa = ca.norm();
    const double sb = cb.norm();
    if (sa == 0.0 || sb == 0.0)
        throw UndefinedCorrelationError("correlation is undefined for a constant vector");
    return ca.dot(cb) / (sa * sb);
}

std::vector<Scored> top_n_by_cosine(const SemVec& q, const EmbeddingTable& table, std::size_t n) {
    if (n < 1) throw Error("top_n_by_cosine requires n >= 1");
    if (table.size() == 0) throw EmptyInputError("top_n_by_cosine on an empty table");
    if (q.size() != table.dim())
        throw DimensionError("query dimension does not match embedding table");
    const double qn = q.norm();
    if (qn == 0.0)
        throw UndefinedSimilarityError("cosine similarity is undefined for a zero query");

    const Eigen::VectorXd dots = table.matrix() * q;
    const Eigen::VectorXd& norms = table.row_norms();

    std::vector<Scored> scored(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto ei = static_cast<Eigen::Index>(i);
        if (norms[ei] == 0.0)
            throw UndefinedSimilarityError("zero embedding row: " + table.word(i));
        scored[i] = {static_cast<std::uint32_t>(i), dots[ei] / (norms[ei] * qn)};
    }

    const std::size_t keep = std::min(n, scored.size());
    auto better = [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.word_id < b.word_id;
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), better);
    scored.resize(keep);
    return scored;
}

SemVec centroid(const EmbeddingTable& table) {
    if (table.size() == 0) throw EmptyInputError("centroid of an empty table");
    return table.matrix().colwise().mean();
}

AccuracyReport correlation_accuracy(const Eigen::MatrixXd& predicted,
                                    const Eigen::MatrixXd& targets, std::size_t k) {
    if (predicted.rows() != targets.rows())
        throw DimensionError("predicted and target row counts differ");
    if (predicted.cols() != targets.cols())
        throw DimensionError("predicted and target dimensions differ");
    if (k < 1) throw Error("correlation accuracy requires k >= 1");

    const Eigen::Index n = targets.rows();
    constexpr double kUndefined = -std::numeric_limits<double>::infinity();

    // Center and unit-normalise target rows once; correlations then reduce
    // to dot products. Constant rows are marked undefined.
    Eigen::MatrixXd tnorm(n, targets.cols());
    std::vector<bool> target_ok(static_cast<std::size_t>(n), true);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::RowVectorXd c = targets.row(j).array() - targets.row(j).mean();
        const double s = c.norm();
        if (s == 0.0) {
            target_ok[static_cast<std::size_t>(j)] = false;
            tnorm.row(j).setZero();
        } else {
            tnorm.row(j) = c / s;
        }
    }

    AccuracyReport report;
    report.total = static_cast<std::size_t>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::RowVectorXd c = predicted.row(i).array() - predicted.row(i).mean();
        const double s = c.norm();
        if (s == 0.0) {
            ++report.undefined_rows;
            continue; // counted incorrect
        }
        c /= s;
        Eigen::VectorXd corr = tnorm * c.transpose();
        for (Eigen::Index j = 0; j < n; ++j)
            if (!target_ok[static_cast<std::size_t>(j)]) corr[j] = kUndefined;

        if (corr[i] == kUndefined) continue; // own target constant: incorrect
        // Rank of the own target under (correlation desc, id asc).
        std::size_t rank = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            if (corr[j] > corr[i] || (corr[j] == corr[i] && j < i)) ++rank;
        }
        if (rank < k) ++report.correct;
    }
    return report;
}

AccuracyReport correlation_accuracy(const Eigen::MatrixXd& predicted,
                                    const EmbeddingTable& targets, std::size_t k) {
    return correlation_accuracy(predicted, targets.matrix(), k);
}

} // namespace ldsim
