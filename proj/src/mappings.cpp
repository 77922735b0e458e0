#include "ldsim/mappings.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace ldsim {

void LearningConfig::validate() const {
    if (!(eta_fg >= 0.0) || !std::isfinite(eta_fg))
        throw ConfigError("eta_fg must be finite and non-negative");
    if (!(eta_d >= 0.0) || !std::isfinite(eta_d))
        throw ConfigError("eta_d must be finite and non-negative");
    if (ridge && (!(*ridge >= 0.0) || !std::isfinite(*ridge)))
        throw ConfigError("ridge must be finite and non-negative");
}

namespace {

// Solves (A + ridge I) X = B for SPD-ish A, with a residual check on the
// normal equations.
Eigen::MatrixXd solve_normal(Eigen::MatrixXd A, const Eigen::MatrixXd& B,
                             std::optional<double> ridge, const char* label) {
    const Eigen::Index n = A.rows();
    const double ridge_eff =
        ridge.value_or(n > 0 ? kDefaultRidgeScale * A.trace() / double(n) : 0.0);
    A.diagonal().array() += ridge_eff;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw SolverError(std::string(label) + ": factorization failed",
                          std::numeric_limits<double>::quiet_NaN());
    Eigen::MatrixXd X = ldlt.solve(B);

    const double bnorm = B.norm();
    const double resid = (A * X - B).norm();
    const double rel = resid / (bnorm > 0.0 ? bnorm : 1.0);
    if (!X.allFinite() || rel > 1e-6)
        throw SolverError(std::string(label) + ": normal equations not solved reliably " +
                              "(relative residual " + std::to_string(rel) + ")",
                          resid);
    return X;
}

} // namespace

MappingMatrix solve_endstate(const CueMatrix& cues, const EmbeddingTable& semantics,
                             std::optional<double> ridge) {
    if (cues.word_count() != semantics.size())
        throw DimensionError("cue matrix and embedding table have different word counts");
    const auto T = static_cast<Eigen::Index>(cues.cue_count());
    const Eigen::Index d = semantics.dim();

    // A = C^T C and B = C^T S accumulated from the sparse cue rows.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(T, T);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(T, d);
    for (std::size_t w = 0; w < cues.word_count(); ++w) {
        const auto& active = cues.row(w).active;
        for (auto i : active) {
            for (auto j : active) A(i, j) += 1.0;
            B.row(i) += semantics.matrix().row(static_cast<Eigen::Index>(w));
        }
    }
    return MappingMatrix{solve_normal(std::move(A), B, ridge, "comprehension endstate"),
                         MappingKind::Comprehension};
}

MappingMatrix solve_endstate(const EmbeddingTable& semantics, const CueMatrix& cues,
                             std::optional<double> ridge) {
    if (cues.word_count() != semantics.size())
        throw DimensionError("cue matrix and embedding table have different word counts");
    const auto T = static_cast<Eigen::Index>(cues.cue_count());
    const Eigen::MatrixXd& S = semantics.matrix();

    Eigen::MatrixXd A = S.transpose() * S; // d x d
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(S.cols(), T);
    for (std::size_t w = 0; w < cues.word_count(); ++w)
        for (auto j : cues.row(w).active)
            B.col(j) += S.row(static_cast<Eigen::Index>(w)).transpose();
    return MappingMatrix{solve_normal(std::move(A), B, ridge, "production endstate"),
                         MappingKind::Production};
}

SemVec predict_semantic(const CueVector& c, const MappingMatrix& F) {
    if (static_cast<Eigen::Index>(c.dim) != F.values.rows())
        throw DimensionError("cue vector dimension does not match mapping");
    SemVec out = SemVec::Zero(F.values.cols());
    for (auto id : c.active) out += F.values.row(id);
    return out;
}

Eigen::VectorXd predict_form(const SemVec& s, const MappingMatrix& G) {
    if (s.size() != G.values.rows())
        throw DimensionError("semantic vector dimension does not match mapping");
    return G.values.transpose() * s;
}

double predict_decision(const CueVector& c, const DecisionMapping& D) {
    if (static_cast<Eigen::Index>(c.dim) != D.values.size())
        throw DimensionError("cue vector dimension does not match decision mapping");
    double out = 0.0;
    for (auto id : c.active) out += D.values[id];
    return out;
}

Eigen::MatrixXd predict_all_semantic(const CueMatrix& cues, const MappingMatrix& F) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(cues.word_count()), F.values.cols());
    for (std::size_t w = 0; w < cues.word_count(); ++w)
        out.row(static_cast<Eigen::Index>(w)) = predict_semantic(cues.row(w), F).transpose();
    return out;
}

Eigen::VectorXd to_dense(const CueVector& c) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(c.dim);
    for (auto id : c.active) out[id] = 1.0;
    return out;
}

void wh_update_comprehension(MappingMatrix& F, const CueVector& c, const SemVec& s_target,
                             double eta) {
    if (eta == 0.0) return;
    const SemVec s_hat = predict_semantic(c, F);
    if (s_target.size() != s_hat.size())
        throw DimensionError("target semantic vector dimension does not match mapping");
    const Eigen::RowVectorXd delta = (s_target - s_hat).transpose() * eta;
    for (auto id : c.active) F.values.row(id) += delta;
}

void wh_update_production(MappingMatrix& G, const SemVec& s_input, const CueVector& c_target,
                          double eta) {
    if (eta == 0.0) return;
    const Eigen::VectorXd c_hat = predict_form(s_input, G);
    if (static_cast<Eigen::Index>(c_target.dim) != c_hat.size())
        throw DimensionError("target cue vector dimension does not match mapping");
    Eigen::VectorXd err = -c_hat;
    for (auto id : c_target.active) err[id] += 1.0;
    G.values.noalias() += eta * s_input * err.transpose();
}

void wh_update_decision(DecisionMapping& D, const CueVector& c, int response, double eta) {
    if (eta == 0.0) return;
    const double d = predict_decision(c, D);
    const double delta = (double(response) - d) * eta;
    for (auto id : c.active) D.values[id] += delta;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'L', 'D', 'M', 'P'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a64(const unsigned char* data, std::size_t len, std::uint64_t h) {
    constexpr std::uint64_t prime = 1099511628211ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= prime;
    }
    return h;
}
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;

void put_u32_le(std::vector<unsigned char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}
void put_u64_le(std::vector<unsigned char>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}
std::uint32_t get_u32_le(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    return v;
}
std::uint64_t get_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    return v;
}

void write_atomic(const std::string& path, const std::vector<unsigned char>& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::vector<unsigned char> serialize(const Eigen::MatrixXd& m, MappingKind kind) {
    std::vector<unsigned char> buf;
    buf.reserve(32 + static_cast<std::size_t>(m.size()) * 8 + 8);
    buf.insert(buf.end(), kMagic, kMagic + 4);
    put_u32_le(buf, kVersion);
    put_u32_le(buf, static_cast<std::uint32_t>(kind));
    put_u64_le(buf, static_cast<std::uint64_t>(m.rows()));
    put_u64_le(buf, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            put_u64_le(buf, std::bit_cast<std::uint64_t>(m(r, c)));
    put_u64_le(buf, fnv1a64(buf.data(), buf.size(), kFnvOffset));
    return buf;
}

std::pair<Eigen::MatrixXd, MappingKind> deserialize(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open mapping file: " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 32 + 8) throw IoError("mapping file truncated: " + path);

    const std::size_t body = buf.size() - 8;
    const std::uint64_t stored = get_u64_le(buf.data() + body);
    if (fnv1a64(buf.data(), body, kFnvOffset) != stored)
        throw IoError("mapping file checksum mismatch: " + path);

    if (std::memcmp(buf.data(), kMagic, 4) != 0)
        throw IoError("not a mapping file: " + path);
    if (get_u32_le(buf.data() + 4) != kVersion)
        throw IoError("unsupported mapping file version: " + path);
    const auto kind = static_cast<MappingKind>(get_u32_le(buf.data() + 8));
    const auto rows = static_cast<Eigen::Index>(get_u64_le(buf.data() + 12));
    const auto cols = static_cast<Eigen::Index>(get_u64_le(buf.data() + 20));
    if (body != 28 + static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 8)
        throw IoError("mapping file size does not match header: " + path);

    Eigen::MatrixXd m(rows, cols);
    const unsigned char* p = buf.data() + 28;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, p += 8)
            m(r, c) = std::bit_cast<double>(get_u64_le(p));
    return {std::move(m), kind};
}

} // namespace

void save_mapping(const MappingMatrix& m, const std::string& path) {
    write_atomic(path, serialize(m.values, m.kind));
}

MappingMatrix load_mapping(const std::string& path) {
    auto [values, kind] = deserialize(path);
    if (kind != MappingKind::Comprehension && kind != MappingKind::Production)
        throw IoError("expected a mapping matrix: " + path);
    return MappingMatrix{std::move(values), kind};
}

void save_decision(const DecisionMapping& d, const std::string& path) {
    write_atomic(path, serialize(d.values, MappingKind::Decision));
}

DecisionMapping load_decision(const std::string& path) {
    auto [values, kind] = deserialize(path);
    if (kind != MappingKind::Decision || values.cols() != 1)
        throw IoError("expected a decision mapping: " + path);
    return DecisionMapping{Eigen::VectorXd(values.col(0))};
}

} // namespace ldsim
