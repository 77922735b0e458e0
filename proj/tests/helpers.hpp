#pragma once

// Shared test utilities: a portable deterministic RNG (no std distributions,
// so values are identical across standard libraries), dense expansions, and
// scratch-directory management.

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ldsim/formspace.hpp"
#include "ldsim/semspace.hpp"

namespace testutil {

/// splitmix64 + Box-Muller; reproducible everywhere.
struct Rng {
    std::uint64_t s;
    bool have_spare = false;
    double spare = 0.0;

    explicit Rng(std::uint64_t seed) : s(seed) {}

    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return double(next() >> 11) * 0x1.0p-53; } // [0,1)

    std::uint64_t below(std::uint64_t n) { return next() % n; }

    double gauss() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare = r * std::sin(2.0 * std::numbers::pi * u2);
        have_spare = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }
};

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.gauss();
    return m;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gauss();
    return v;
}

inline Eigen::MatrixXd dense_cues(const ldsim::CueMatrix& cues) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cues.word_count()),
                                              static_cast<Eigen::Index>(cues.cue_count()));
    for (std::size_t w = 0; w < cues.word_count(); ++w)
        for (auto id : cues.row(w).active)
            C(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(id)) = 1.0;
    return C;
}

/// A fresh scratch directory under the system temp dir, removed on
/// destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("ldsim_test_" + tag + "_" + std::to_string(++counter) + "_" +
                 std::to_string(std::uint64_t(::getpid())));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

} // namespace testutil
