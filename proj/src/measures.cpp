#include "ldsim/measures.hpp"

namespace ldsim {

double semantic_density(const SemVec& s_hat, const EmbeddingTable& table, std::size_t n) {
    const auto top = top_n_by_cosine(s_hat, table, n);
    double sum = 0.0;
    for (const auto& s : top) sum += s.score;
    return sum / double(top.size());
}

PathResult shortest_path(const std::string& word, const std::vector<std::string>& neighbors,
                         const MappingMatrix& F, const CueMatrix& cues, bool /*precomputed*/) {
    if (neighbors.empty()) return {0.0, false};

    std::vector<Eigen::VectorXd> points;
    points.reserve(neighbors.size() + 1);
    points.push_back(predict_semantic(encode_form(word, cues.index()).vec, F));
    for (const auto& nb : neighbors)
        points.push_back(predict_semantic(encode_form(nb, cues.index()).vec, F));
    return {shortest_tour_length(points), true};
}

PathResult shortest_path(const std::string& word, const std::vector<std::string>& lexicon,
                         const MappingMatrix& F, const CueMatrix& cues) {
    return shortest_path(word, coltheart_neighbors(word, lexicon), F, cues, true);
}

double c_precision(const CueVector& c, const Eigen::VectorXd& c_hat) {
    if (static_cast<Eigen::Index>(c.dim) != c_hat.size())
        throw DimensionError("cue vector and predicted form vector dimensions differ");
    return pearson_correlation(to_dense(c), c_hat);
}

double l1chat(const Eigen::VectorXd& c_hat) { return c_hat.lpNorm<1>(); }

double yes_activation(const CueVector& c, const DecisionMapping& D) {
    return predict_decision(c, D);
}

} // namespace ldsim
